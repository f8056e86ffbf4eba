import math

import numpy as np
import pytest

from fracrbf.analysis import (SaturationQuery, SymbolQuery, psi_gamma,
                              psi_gamma_hat, quasi_interpolant,
                              saturation_coeffs, symbol_collocation,
                              symbol_galerkin, symbol_gram)

# Appendix coefficient tables |a_alpha^(beta)(x)| / alpha!, 5 printed digits
TABLE_B0 = {
    (0.36, 0.25): [2.4808e-12, 2.1649e-11, 9.4464e-11, 2.7478e-10, 5.9949e-10,
                   1.0463e-09, 1.5218e-09, 1.8971e-09, 2.0695e-09],
    (0.36, 0.5): [4.9617e-12, 0, 1.8893e-10, 0, 1.1990e-09, 0, 3.0436e-09, 0,
                  4.1389e-09],
    (0.25, 0.25): [1.4314e-17, 1.7988e-16, 1.1302e-15, 4.7342e-15, 1.4873e-14,
                   3.7380e-14, 7.8288e-14, 1.4054e-13, 2.2076e-13],
    (0.25, 0.5): [2.8629e-17, 0, 2.2604e-15, 0, 2.9746e-14, 0, 1.5658e-13, 0,
                  4.4153e-13],
}
TABLE_B2 = {
    (0.36, 0.25): [6.0278e-34, 8.2351e-10, 2.4808e-12, 9.6826e-09, 9.4464e-11,
                   3.4048e-08, 5.9949e-10, 5.6819e-08, 1.5218e-09],
    (0.36, 0.5): [9.7940e-11, 0, 3.4622e-09, 0, 2.0403e-08, 0, 4.8128e-08, 0,
                  6.0903e-08],
    (0.25, 0.25): [0, 6.9215e-15, 1.4314e-17, 1.7288e-13, 1.1302e-15,
                   1.2935e-12, 1.4873e-14, 4.6020e-12, 7.8288e-14],
    (0.25, 0.5): [5.6511e-16, 0, 4.2387e-14, 0, 5.2993e-13, 0, 2.6507e-12, 0,
                  7.1059e-12],
}


class TestPsi:
    def test_cardinality_exact(self):
        for m in range(-6, 7):
            assert psi_gamma(float(m), 0.36) == (1.0 if m == 0 else 0.0)

    def test_direct_formula_value(self):
        ref = (0.36 / math.pi) / math.sinh(0.18)
        assert psi_gamma(0.5, 0.36) == pytest.approx(ref, rel=1e-14)

    def test_product_form_2d(self):
        assert psi_gamma(np.array([0.5, 0.25]), 0.3) == pytest.approx(
            psi_gamma(0.5, 0.3) * psi_gamma(0.25, 0.3), rel=1e-14)


class TestPsiHat:
    def test_value_at_zero(self):
        g = 0.36
        ref = math.sinh(math.pi ** 2 / g) / (1.0 + math.cosh(math.pi ** 2 / g))
        assert psi_gamma_hat(0.0, g) == pytest.approx(ref, rel=1e-14)

    def test_large_argument_decay(self):
        # per factor ~ 2 sinh(pi^2/g) e^{-pi xi / g}
        g = 0.36
        for xi in [40.0, 60.0]:
            ref = 2.0 * math.sinh(math.pi ** 2 / g) * math.exp(-math.pi * xi / g)
            assert psi_gamma_hat(xi, g) == pytest.approx(ref, rel=1e-6)

    def test_no_overflow_small_gamma(self):
        v = psi_gamma_hat(0.5, 0.02)
        assert np.isfinite(v) and 0 < v <= 1.0

    def test_matches_discrete_transform(self):
        # numerically Fourier-transform psi_gamma on a fine grid
        g = 0.36
        L, n = 60.0, 2 ** 15
        x = np.linspace(-L, L, n, endpoint=False)
        vals = np.array([psi_gamma(float(t), g) for t in x])
        dx = x[1] - x[0]
        for xi in [0.0, 1.0, 2.5]:
            ref = float(np.sum(vals * np.exp(-1j * xi * x)).real * dx)
            assert psi_gamma_hat(xi, g) == pytest.approx(ref, abs=1e-8)


class TestQuasiInterpolant:
    def test_reproduces_lattice_samples(self):
        g, h = 0.36, 0.1
        m = np.arange(-120, 121)
        u = np.exp(-((m * h) ** 2))
        val = quasi_interpolant(u, m[0], g, h, np.array([0.3]))
        assert val == pytest.approx(math.exp(-0.09), rel=1e-10)

    def test_constant_within_saturation_band(self):
        # |I_h 1 - 1| at x/h = 0.25 sits at the alpha-index-0 coefficient
        g, h = 0.36, 1.0
        m = np.arange(-110, 111)
        val = quasi_interpolant(np.ones(m.size), m[0], g, h, np.array([0.25]))
        assert abs(val - 1.0) == pytest.approx(2.4808e-12, rel=1e-3)

    def test_matches_gram_interpolation(self):
        # exact Gaussian interpolation of u on a window (Gram solve) vs the
        # cardinal-function form: difference small and h-independent
        g = 0.36
        sup = []
        for h in [0.2, 0.1]:
            eps = math.sqrt(g) / h
            m = np.arange(-96, 97)
            xm = m * h
            u = np.exp(-xm ** 2)
            gram = np.exp(-(eps ** 2) * (xm[:, None] - xm[None, :]) ** 2)
            coef = np.linalg.solve(gram, u)
            xs = np.linspace(-0.4, 0.4, 9)
            diffs = []
            for x in xs:
                exact_interp = float(coef @ np.exp(-(eps ** 2) * (x - xm) ** 2))
                card = quasi_interpolant(u, m[0], g, h, np.array([x]))
                diffs.append(abs(card - exact_interp))
            sup.append(max(diffs))
        assert max(sup) < 5e-7
        assert abs(sup[0] - sup[1]) < 5e-7  # same scale across h

    def test_window_warning(self):
        with pytest.warns(UserWarning):
            m = np.arange(-3, 4)
            quasi_interpolant(np.ones(m.size), m[0], 0.36, 1.0, np.array([0.25]))


class TestSaturationCoeffs:
    @pytest.mark.parametrize("key", list(TABLE_B0))
    def test_table_beta0(self, key):
        g, x = key
        vals = saturation_coeffs(SaturationQuery(gamma=g, x=x, beta=0))
        for v, ref in zip(vals, TABLE_B0[key]):
            if ref == 0:
                assert v < 1e-20
            else:
                assert v == pytest.approx(ref, rel=5e-5)

    @pytest.mark.parametrize("key", list(TABLE_B2))
    def test_table_beta2(self, key):
        g, x = key
        vals = saturation_coeffs(SaturationQuery(gamma=g, x=x, beta=2))
        for v, ref in zip(vals, TABLE_B2[key]):
            if ref == 0:
                assert v < 1e-20
            else:
                assert v == pytest.approx(ref, rel=5e-5)

    def test_contour_node_doubling(self):
        q1 = SaturationQuery(gamma=0.36, x=0.25, beta=0)
        q2 = SaturationQuery(gamma=0.36, x=0.25, beta=0, contour_nodes=512)
        v1, v2 = saturation_coeffs(q1), saturation_coeffs(q2)
        assert np.max(np.abs(v1 / v2 - 1.0)) < 1e-3

    def test_periodicity_in_x(self):
        a = saturation_coeffs(SaturationQuery(gamma=0.36, x=0.3, beta=0))
        b = saturation_coeffs(SaturationQuery(gamma=0.36, x=1.3, beta=0))
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_reflection_symmetry(self):
        a = saturation_coeffs(SaturationQuery(gamma=0.36, x=0.25, beta=0))
        b = saturation_coeffs(SaturationQuery(gamma=0.36, x=0.75, beta=0))
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_contour_radius_guard(self):
        with pytest.raises(ValueError):
            SaturationQuery(gamma=0.36, x=0.25, beta=0, contour_radius=3.4)
        with pytest.raises(ValueError):
            SaturationQuery(gamma=0.36, x=0.25, beta=1)


class TestSymbols:
    def test_collocation_at_zero_alpha0(self):
        # alpha = 0 at xi = 0: dominated by j = 0 term pi^{d/2} h^d / gamma^{d/2}
        q = SymbolQuery(h=0.125, gamma=0.25, alpha=0.0, dim=1)
        val = symbol_collocation(q, np.array([0.0]))
        lead = math.pi ** 0.5 * q.h / math.sqrt(q.gamma)
        assert val == pytest.approx(lead, rel=1e-10)

    def test_gram_symmetry_at_pi(self):
        # at xi = pi the j = 0 and j = 1 images coincide
        q = SymbolQuery(h=0.125, gamma=0.25, alpha=0.0, dim=1)
        pref = math.pi / q.gamma
        two_terms = 2.0 * pref * math.exp(-math.pi ** 2 / (2.0 * q.gamma))
        assert symbol_gram(q, np.array([math.pi]))  == pytest.approx(
            two_terms, rel=1e-3)

    @pytest.mark.parametrize("gamma", [0.25, 0.36])
    @pytest.mark.parametrize("alpha", [0.4, 1.0, 1.5])
    @pytest.mark.parametrize("dim", [1, 2])
    def test_comparison_inequality(self, gamma, alpha, dim):
        q = SymbolQuery(h=0.125, gamma=gamma, alpha=alpha, dim=dim)
        scale = (gamma / math.pi) ** (dim / 2.0)
        for t in np.linspace(-math.pi, math.pi, 101)[1:-1]:
            xi = np.full(dim, t)
            assert symbol_collocation(q, xi) >= scale * symbol_galerkin(q, xi)

    def test_gram_bounds_h_independent(self):
        g = 0.25
        mins, maxs = [], []
        for h in [0.5, 0.125, 0.03125]:
            q = SymbolQuery(h=h, gamma=g, alpha=0.0, dim=1)
            vals = [symbol_gram(q, np.array([t]))
                    for t in np.linspace(-math.pi, math.pi, 201)[1:-1]]
            mins.append(min(vals))
            maxs.append(max(vals))
        assert min(mins) > 0
        assert max(mins) - min(mins) < 1e-12 * max(maxs)
        assert max(maxs) - min(maxs) < 1e-12 * max(maxs)

    def test_symbol_h_scaling(self):
        # both symbols carry h^{d-alpha}; their ratio is h-independent
        g, alpha = 0.36, 1.5
        xi = np.array([1.1])
        r = []
        for h in [0.25, 0.0625]:
            q = SymbolQuery(h=h, gamma=g, alpha=alpha, dim=1)
            r.append(symbol_collocation(q, xi) / symbol_galerkin(q, xi))
        assert r[0] == pytest.approx(r[1], rel=1e-12)
