import numpy as np
import pytest

from fracrbf.assembly import (assemble_dense, assemble_toeplitz,
                              read_kernel_dump, toeplitz_matvec,
                              write_kernel_dump)
from fracrbf.frlap_kernel import FracOrder, frlap_gaussian, frlap_oracle_fourier
from fracrbf.lattice import Box, Disk, Interval, LatticeGrid, generate_centers


def _grid_1d(n, h=None):
    h = h or 2.0 / (n + 1)
    return generate_centers(Interval(-1.0, 1.0), h), h


class TestDense:
    def test_single_center(self):
        grid = LatticeGrid(h=0.5, offset=(0.0,), indices=np.array([[0]]))
        A = assemble_dense(grid, FracOrder(1.0, 1), 2.0)
        assert A.matrix.shape == (1, 1)
        assert A.matrix[0, 0] == pytest.approx(
            float(frlap_gaussian(FracOrder(1.0, 1), 2.0, 0.0)), rel=1e-15)

    def test_symmetry_and_diagonal(self):
        grid, h = _grid_1d(15)
        A = assemble_dense(grid, FracOrder(1.5, 1), 0.5 / h)
        assert np.array_equal(A.matrix, A.matrix.T)
        diag = float(frlap_gaussian(FracOrder(1.5, 1), 0.5 / h, 0.0))
        np.testing.assert_allclose(np.diag(A.matrix), diag, rtol=1e-14)

    def test_centrosymmetry(self):
        grid, h = _grid_1d(31)
        A = assemble_dense(grid, FracOrder(0.4, 1), 0.5 / h).matrix
        assert np.array_equal(A, A[::-1, ::-1])

    def test_translation_invariance(self):
        # same index differences, shifted offset: identical matrix
        idx = np.arange(1, 8, dtype=np.int64)[:, None]
        g1 = LatticeGrid(h=0.25, offset=(-1.0,), indices=idx)
        g2 = LatticeGrid(h=0.25, offset=(41.0,), indices=idx)
        o = FracOrder(1.0, 1)
        np.testing.assert_array_equal(assemble_dense(g1, o, 2.0).matrix,
                                      assemble_dense(g2, o, 2.0).matrix)

    def test_entries_vs_fourier_oracle(self):
        grid = generate_centers(Disk((0.0, 0.0), 1.0), 0.25)
        order = FracOrder(1.5, 2)
        A = assemble_dense(grid, order, 2.0)
        pts = grid.points
        for j in range(3):
            for k in range(3):
                r = float(np.linalg.norm(pts[j] - pts[k]))
                ref = frlap_oracle_fourier(order, 2.0, r, quad_tol=1e-10)
                assert A.matrix[j, k] == pytest.approx(ref, abs=1e-9)

    def test_scaling_between_grids(self):
        # (eps, h) vs (2 eps, h/2): matrices related by 2^alpha
        alpha = 1.5
        n = 15
        g1, h1 = _grid_1d(n)
        g2, h2 = _grid_1d(n, h1 / 2.0)
        # keep the same index set so the difference structure matches
        g2 = LatticeGrid(h=h1 / 2.0, offset=(-1.0,), indices=g1.indices)
        A1 = assemble_dense(g1, FracOrder(alpha, 1), 0.5 / h1).matrix
        A2 = assemble_dense(g2, FracOrder(alpha, 1), 1.0 / h1).matrix
        np.testing.assert_allclose(A2, 2.0 ** alpha * A1, rtol=1e-13)

    def test_dimension_mismatch(self):
        grid, h = _grid_1d(7)
        with pytest.raises(ValueError):
            assemble_dense(grid, FracOrder(1.0, 2), 2.0)


class TestToeplitz:
    def test_kernel_even_1d(self):
        grid, h = _grid_1d(7)
        T = assemble_toeplitz(grid, FracOrder(1.0, 1), 0.5 / h)
        assert T.kernel.shape == (13,)
        np.testing.assert_array_equal(T.kernel, T.kernel[::-1])
        assert T.kernel[6] == pytest.approx(
            float(frlap_gaussian(FracOrder(1.0, 1), 0.5 / h, 0.0)), rel=1e-15)

    @pytest.mark.parametrize("domph", [
        (Interval(-1.0, 1.0), 2.0 / 16), (Disk((0.0, 0.0), 1.0), 0.25),
        (Box(((-2.0, 2.0), (-2.0, 2.0))), 0.5)])
    def test_dense_reconstruction(self, domph):
        dom, h = domph
        grid = generate_centers(dom, h)
        order = FracOrder(1.2, dom.dim)
        D = assemble_dense(grid, order, 0.5 / h)
        T = assemble_toeplitz(grid, order, 0.5 / h)
        diff = np.max(np.abs(T.to_dense() - D.matrix))
        assert diff <= 1e-14 * np.max(np.abs(D.matrix))

    def test_matvec_zero_and_unit(self):
        grid = generate_centers(Disk((0.0, 0.0), 1.0), 0.25)
        T = assemble_toeplitz(grid, FracOrder(1.0, 2), 2.0)
        D = T.to_dense()
        np.testing.assert_array_equal(toeplitz_matvec(T, np.zeros(T.n)), 0.0)
        e1 = np.zeros(T.n)
        e1[0] = 1.0
        np.testing.assert_allclose(toeplitz_matvec(T, e1), D[:, 0],
                                   rtol=1e-12, atol=1e-12 * np.max(np.abs(D)))

    @pytest.mark.parametrize("h", [0.25, 0.125, 1 / 16])
    def test_matvec_matches_dense_disk(self, h):
        grid = generate_centers(Disk((0.0, 0.0), 1.0), h)
        order = FracOrder(1.5, 2)
        T = assemble_toeplitz(grid, order, 0.5 / h)
        D = assemble_dense(grid, order, 0.5 / h)
        v = np.random.default_rng(11).standard_normal(grid.count)
        y_fft = toeplitz_matvec(T, v)
        y_dense = D.matrix @ v
        assert (np.linalg.norm(y_fft - y_dense)
                <= 1e-12 * np.linalg.norm(y_dense))

    def test_matvec_dimension_check(self):
        grid, h = _grid_1d(7)
        T = assemble_toeplitz(grid, FracOrder(1.0, 1), 2.0)
        with pytest.raises(ValueError):
            toeplitz_matvec(T, np.zeros(5))

    def test_kernel_dump_roundtrip(self, tmp_path):
        grid = generate_centers(Disk((0.0, 0.0), 1.0), 0.25)
        T = assemble_toeplitz(grid, FracOrder(1.0, 2), 2.0)
        path = tmp_path / "kernel.bin"
        write_kernel_dump(T, path)
        back = read_kernel_dump(path)
        np.testing.assert_array_equal(back, T.kernel)
