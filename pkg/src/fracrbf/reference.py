"""Brute-force evaluators of the fractional Laplacian for cross-checks.

These work straight from the singular-integral definition

    (-Delta)^{alpha/2} u(x) = C_{d,alpha} P.V. int (u(x) - u(y)) / |x-y|^{d+alpha} dy

with even-reflection removal of the principal value in 1-D and an angular-
average local part in 2-D, so they share no code path with the closed-form
hypergeometric route they are used to check.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

__all__ = ["frlap_coefficient", "frlap_hypersingular_1d", "frlap_hypersingular_2d"]


def frlap_coefficient(d: int, alpha: float) -> float:
    """C_{d,alpha} = 2^{alpha-1} alpha Gamma((alpha+d)/2) / (pi^{d/2} Gamma(1-alpha/2))."""
    if not 0 < alpha < 2:
        raise ValueError("the singular-integral form needs 0 < alpha < 2")
    return (2.0 ** (alpha - 1) * alpha * math.gamma((alpha + d) / 2.0)
            / (math.pi ** (d / 2.0) * math.gamma(1.0 - alpha / 2.0)))


def frlap_hypersingular_1d(u, x: float, alpha: float, t_split: float = 1.0,
                           t_far: float = 200.0, t_decades: int = 4,
                           breakpoints=(), epsabs: float = 1e-10) -> float:
    """(-Delta)^{alpha/2} u at a point, d = 1.

    Even reflection turns the principal value into
    int_0^inf (2 u(x) - u(x+t) - u(x-t)) / t^{1+alpha} dt; the integrand is
    smooth * t^{1-alpha} near 0 and is integrated with an algebraic endpoint
    weight.  Beyond ``t_far`` the 2 u(x) part is integrated analytically and
    the u(x +/- t) part over log-spaced segments out to t_far * 10^t_decades.
    """
    c = frlap_coefficient(1, alpha)
    ux = float(u(x))

    def sym_diff(t):
        return 2.0 * ux - float(u(x + t)) - float(u(x - t))

    # near 0 the integrand is psi(t) * t^{1-alpha} with psi = sym_diff/t^2
    # smooth; the substitution t = s^(1/(2-alpha)) flattens the weight exactly.
    # Below t ~ 1e-4 the double-precision second difference is pure noise and
    # psi is clamped; the noise-limited inner zone [0, t_cut] is integrated
    # separately so its roundoff does not starve the smooth part of
    # subdivisions.
    kappa = 1.0 / (2.0 - alpha)
    t_cut = min(0.1, 0.5 * t_split)
    eff = max(epsabs, 1e-11)

    def flattened(s):
        t = max(s ** kappa, 1e-4)
        return kappa * sym_diff(t) / (t * t)

    # the inner-zone value is noise-limited (second differences of a float64
    # u amplify its rounding by 1/t^2), so it is integrated to that floor
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        total, _ = integrate.quad(flattened, 0.0, t_cut ** (2.0 - alpha),
                                  epsabs=max(epsabs, 1e-10), epsrel=1e-9,
                                  limit=100)

    # smooth range, split at any kinks of u
    pts = sorted({t_cut, t_split, t_far}
                 | {float(b) for b in breakpoints if t_cut < b < t_far})
    for lo, hi in zip(pts[:-1], pts[1:]):
        v, _ = integrate.quad(lambda t: sym_diff(t) / t ** (1.0 + alpha),
                              lo, hi, epsabs=eff, epsrel=1e-11, limit=400)
        total += v

    # far field: analytic 2 u(x) tail plus log-spaced decay integration
    total += 2.0 * ux * t_far ** (-alpha) / alpha
    lo = t_far
    for _ in range(t_decades):
        hi = lo * 10.0
        v, _ = integrate.quad(
            lambda t: -(float(u(x + t)) + float(u(x - t))) / t ** (1.0 + alpha),
            lo, hi, epsabs=eff, epsrel=1e-11, limit=200)
        total += v
        lo = hi
    return c * total


def frlap_hypersingular_2d(u, x, alpha: float, r_split: float = 1.0,
                           r_far: float = 50.0, r_decades: int = 3,
                           n_theta: int = 96, breakpoints=(),
                           epsabs: float = 1e-10) -> float:
    """(-Delta)^{alpha/2} u at a point, d = 2.

    In polar coordinates about x the gradient term integrates to zero over
    each circle, so the local part is int_0^delta m(r) r^{-1-alpha} dr with
    m(r) = int (u(x) - u(x + r w(theta))) dtheta = O(r^2); m is evaluated by
    the (spectrally accurate) periodic trapezoid rule.
    """
    x = np.asarray(x, dtype=float).reshape(2)
    c = frlap_coefficient(2, alpha)
    ux = float(u(x.reshape(1, 2))[0])
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    w = np.stack([np.cos(theta), np.sin(theta)], axis=1)

    def ring_mean_defect(r):
        pts = x[None, :] + r * w
        vals = np.asarray(u(pts), dtype=float)
        return 2.0 * math.pi * (ux - float(np.mean(vals)))

    # same endpoint flattening and noise-zone separation as the 1-D case
    kappa = 1.0 / (2.0 - alpha)
    r_cut = min(0.1, 0.5 * r_split)
    eff = max(epsabs, 1e-11)

    def flattened(s):
        r = max(s ** kappa, 1e-4)
        return kappa * ring_mean_defect(r) / (r * r)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        total, _ = integrate.quad(flattened, 0.0, r_cut ** (2.0 - alpha),
                                  epsabs=max(epsabs, 1e-10), epsrel=1e-9,
                                  limit=100)
    mids = sorted({r_cut, r_split, r_far}
                  | {float(b) for b in breakpoints if r_cut < b < r_far})
    for lo, hi in zip(mids[:-1], mids[1:]):
        v, _ = integrate.quad(lambda r: ring_mean_defect(r) / r ** (1.0 + alpha),
                              lo, hi, epsabs=eff, epsrel=1e-11, limit=400)
        total += v
    total += 2.0 * math.pi * ux * r_far ** (-alpha) / alpha
    lo = r_far
    for _ in range(r_decades):
        hi = lo * 10.0
        v, _ = integrate.quad(
            lambda r: -(2.0 * math.pi) * _ring_mean(u, x, w, r) / r ** (1.0 + alpha),
            lo, hi, epsabs=eff, epsrel=1e-11, limit=200)
        total += v
        lo = hi
    return c * total


def _ring_mean(u, x, w, r):
    pts = x[None, :] + r * w
    return float(np.mean(np.asarray(u(pts), dtype=float)))
