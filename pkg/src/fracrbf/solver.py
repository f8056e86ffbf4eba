"""Linear solves, RBF evaluation, RMS errors and condition numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .assembly import DenseStiffness, ToeplitzStiffness
from .lattice import LatticeGrid, evaluation_grid

__all__ = [
    "RbfSolution",
    "SolveReport",
    "SolveOptions",
    "SolverError",
    "solve",
    "evaluate",
    "gaussian_mixture_eval",
    "rms_error",
    "condition_number",
]

# exp(-x) underflows past this; such Gaussian terms contribute exact zero
_EXP_CUTOFF = 745.0


class SolverError(ArithmeticError):
    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


@dataclass(frozen=True)
class SolveOptions:
    method: str = "auto"        # auto | direct | cg
    tol: float = 1e-13
    maxiter: int | None = None
    precondition: bool = False  # circulant (unmasked-symbol) preconditioner
    refine_steps: int = 1       # iterative refinement passes after LU
    direct_limit: int = 4096    # auto: direct solve up to this order


@dataclass(frozen=True)
class SolveReport:
    method: str
    iterations: int
    residual: float
    condition: float | None = None


@dataclass(frozen=True)
class RbfSolution:
    """Coefficients of u_h(x) = sum_k lam_k exp(-eps^2 |x - x_k|^2)."""

    grid: LatticeGrid
    eps: float
    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.shape != (self.grid.count,):
            raise ValueError("coefficient length must match grid count")
        if not np.all(np.isfinite(lam)):
            raise ValueError("non-finite coefficients")
        object.__setattr__(self, "lam", lam)

    def __call__(self, points):
        return evaluate(self, points)


def gaussian_mixture_eval(points, centers, eps: float, coefs,
                          chunk: int = 8192) -> np.ndarray:
    """sum_k c_k exp(-eps^2 |x - x_k|^2) evaluated at many points, chunked to
    bound the pairwise distance workspace."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    cen = np.atleast_2d(np.asarray(centers, dtype=float))
    coefs = np.asarray(coefs, dtype=float)
    out = np.empty(pts.shape[0])
    e2 = eps * eps
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        d2 = ((block[:, None, :] - cen[None, :, :]) ** 2).sum(axis=2)
        ex = e2 * d2
        np.clip(ex, None, _EXP_CUTOFF, out=ex)
        g = np.exp(-ex)
        g[ex >= _EXP_CUTOFF] = 0.0
        out[start:start + chunk] = g @ coefs
    return out


def evaluate(sol: RbfSolution, points) -> np.ndarray:
    """Evaluate the RBF ansatz anywhere in R^d."""
    return gaussian_mixture_eval(points, sol.grid.points, sol.eps, sol.lam)


def _cg(matvec, rhs, tol, maxiter):
    """Plain conjugate gradients with a curvature guard.

    Returns (x, iterations, relative residual, curvature_ok)."""
    n = rhs.shape[0]
    x = np.zeros(n)
    r = rhs.copy()
    p = r.copy()
    rs = float(r @ r)
    bnorm = math.sqrt(float(rhs @ rhs))
    if bnorm == 0.0:
        return x, 0, 0.0, True
    for it in range(1, maxiter + 1):
        ap = matvec(p)
        curv = float(p @ ap)
        if curv <= 0.0:
            return x, it, math.sqrt(rs) / bnorm, False
        alpha = rs / curv
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        if math.sqrt(rs_new) <= tol * bnorm:
            return x, it, math.sqrt(rs_new) / bnorm, True
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x, maxiter, math.sqrt(rs) / bnorm, True


def _solve_dense(mat: np.ndarray, rhs: np.ndarray, opts: SolveOptions):
    lu, piv = scipy.linalg.lu_factor(mat)
    x = scipy.linalg.lu_solve((lu, piv), rhs)
    for _ in range(opts.refine_steps):
        r = rhs - mat @ x
        x += scipy.linalg.lu_solve((lu, piv), r)
    res = np.linalg.norm(rhs - mat @ x) / np.linalg.norm(rhs) if np.any(rhs) else 0.0
    if not np.all(np.isfinite(x)):
        raise SolverError("singular stiffness matrix (non-finite solution)")
    return x, SolveReport(method="direct", iterations=0, residual=float(res))


def _solve_toeplitz(op: ToeplitzStiffness, rhs: np.ndarray, opts: SolveOptions):
    maxiter = opts.maxiter or max(20 * op.n, 2000)
    matvec = op.matvec
    if opts.precondition:
        # unmasked circulant symbol as a preconditioner (floor tiny modes)
        spec = op.spectrum.copy()
        floor = 1e-12 * float(np.max(np.abs(spec)))
        spec = np.where(np.abs(spec) < floor, floor, spec)
        emb_shape = tuple(2 * n for n in op.level_sizes)
        block = tuple(slice(0, n) for n in op.level_sizes)

        def precon(v):
            buf = np.zeros(emb_shape)
            scatter = np.zeros(op.level_sizes)
            scatter[tuple(op.block_pos.T)] = v
            buf[block] = scatter
            sol = np.fft.irfftn(np.fft.rfftn(buf) / spec, s=emb_shape,
                                axes=tuple(range(len(emb_shape))))
            return sol[block][tuple(op.block_pos.T)]

        pre_op = scipy.sparse.linalg.LinearOperator((op.n, op.n), matvec=precon)
        lin = scipy.sparse.linalg.LinearOperator((op.n, op.n), matvec=matvec)
        x, info = scipy.sparse.linalg.cg(lin, rhs, rtol=opts.tol, atol=0.0,
                                         maxiter=maxiter, M=pre_op)
        res = np.linalg.norm(rhs - matvec(x)) / np.linalg.norm(rhs)
        if info != 0 and res > opts.tol * 10:
            raise SolverError(f"preconditioned CG stagnated (info={info})",
                              best_residual=float(res))
        return x, SolveReport(method="cg", iterations=maxiter if info else -1,
                              residual=float(res))

    x, iters, res, curv_ok = _cg(matvec, rhs, opts.tol, maxiter)
    if not curv_ok:
        # non-positive curvature: retreat to a symmetric-indefinite solver
        lin = scipy.sparse.linalg.LinearOperator((op.n, op.n), matvec=matvec)
        x, info = scipy.sparse.linalg.minres(lin, rhs, rtol=opts.tol,
                                             maxiter=maxiter)
        res = float(np.linalg.norm(rhs - matvec(x)) / np.linalg.norm(rhs))
        return x, SolveReport(method="minres", iterations=maxiter, residual=res)
    if res > opts.tol:
        raise SolverError(
            f"CG stagnated at relative residual {res:.3e} after {iters} iterations",
            best_residual=res)
    return x, SolveReport(method="cg", iterations=iters, residual=res)


def solve(stiffness, f, opts: SolveOptions | None = None
          ) -> tuple[RbfSolution, SolveReport]:
    """Solve A lam = f and wrap the coefficients as an evaluable solution."""
    opts = opts or SolveOptions()
    rhs = np.asarray(f, dtype=float)
    if rhs.shape != (stiffness.n,):
        raise ValueError(f"rhs length {rhs.shape} does not match order {stiffness.n}")

    method = opts.method
    if method == "auto":
        if isinstance(stiffness, DenseStiffness) or stiffness.n <= opts.direct_limit:
            method = "direct"
        else:
            method = "cg"

    if method == "direct":
        mat = stiffness.matrix if isinstance(stiffness, DenseStiffness) \
            else stiffness.to_dense()
        x, report = _solve_dense(mat, rhs, opts)
    elif method == "cg":
        if isinstance(stiffness, DenseStiffness):
            maxiter = opts.maxiter or max(20 * stiffness.n, 2000)
            x, iters, res, curv_ok = _cg(stiffness.matvec, rhs, opts.tol, maxiter)
            if res > opts.tol:
                raise SolverError(f"CG stagnated at {res:.3e}", best_residual=res)
            report = SolveReport(method="cg", iterations=iters, residual=res)
        else:
            x, report = _solve_toeplitz(stiffness, rhs, opts)
    else:
        raise ValueError(f"unknown solve method '{method}'")

    sol = RbfSolution(grid=stiffness.grid, eps=stiffness.eps, lam=x)
    return sol, report


def _tensor_lattice_eval(sol: RbfSolution, pts: np.ndarray) -> np.ndarray | None:
    """Separable evaluation when the points form (a subset of) a tensor grid.

    The Gaussian factorizes over axes, so on a tensor evaluation grid
    u_h = F_1 (Lambda) F_2^T with per-axis factor matrices F_j; this turns the
    O(M N) pairwise evaluation into small matrix products.
    """
    grid = sol.grid
    d = grid.dim
    axes = []
    inverse = []
    for j in range(d):
        vals, inv = np.unique(pts[:, j], return_inverse=True)
        axes.append(vals)
        inverse.append(inv)
    m = 1
    for a in axes:
        m *= a.size
    if m > 8 * pts.shape[0] or m > 5_000_000:
        return None  # too sparse in its bounding tensor grid to pay off
    e2 = sol.eps ** 2
    lo = grid.indices.min(axis=0)
    sizes = [int(grid.indices[:, j].max() - lo[j]) + 1 for j in range(d)]
    lam_block = np.zeros(sizes)
    lam_block[tuple((grid.indices - lo[None, :]).T)] = sol.lam
    centers_axis = [np.asarray(grid.offset)[j] + grid.h * (lo[j] + np.arange(sizes[j]))
                    for j in range(d)]
    factors = []
    for j in range(d):
        ex = e2 * (axes[j][:, None] - centers_axis[j][None, :]) ** 2
        np.clip(ex, None, _EXP_CUTOFF, out=ex)
        factors.append(np.exp(-ex))
    if d == 1:
        full = factors[0] @ lam_block
        return full[inverse[0]]
    if d == 2:
        full = factors[0] @ lam_block @ factors[1].T
        return full[inverse[0], inverse[1]]
    return None


def rms_error(sol: RbfSolution, exact, domain, refine: int = 8) -> float:
    """Root mean square of u - u_h over the refined evaluation grid on the
    closed domain."""
    pts = evaluation_grid(domain, sol.grid.h, refine)
    uh = _tensor_lattice_eval(sol, pts)
    if uh is None:
        uh = evaluate(sol, pts)
    ue = _eval_function(exact, pts)
    return float(np.sqrt(np.mean((ue - uh) ** 2)))


def _eval_function(fn, pts: np.ndarray) -> np.ndarray:
    """Evaluate a callable on (N, d) points, accepting scalar or vector forms."""
    try:
        vals = fn(pts)
        vals = np.asarray(vals, dtype=float)
        if vals.shape == (pts.shape[0],):
            return vals
    except Exception:
        pass
    if pts.shape[1] == 1:
        return np.array([float(fn(float(p[0]))) for p in pts])
    return np.array([float(fn(p)) for p in pts])


def condition_number(stiffness, mode: str = "exact_svd", tol: float = 1e-6,
                     seed: int = 0) -> float:
    """2-norm condition number of the stiffness matrix.

    ``exact_svd`` runs a full SVD (orders up to 4096); ``estimate`` powers the
    operator and its inverse with a seeded start vector to relative ``tol``.
    """
    if mode == "exact_svd":
        if stiffness.n > 4096:
            raise ValueError("exact_svd limited to n <= 4096")
        mat = stiffness.matrix if isinstance(stiffness, DenseStiffness) \
            else stiffness.to_dense()
        s = np.linalg.svd(mat, compute_uv=False)
        if s[-1] < 1e-300:
            raise SolverError("stiffness numerically singular (sigma_min < 1e-300)")
        return float(s[0] / s[-1])
    if mode != "estimate":
        raise ValueError("mode must be 'exact_svd' or 'estimate'")

    rng = np.random.default_rng(seed)
    matvec = stiffness.matvec
    if isinstance(stiffness, DenseStiffness):
        lu, piv = scipy.linalg.lu_factor(stiffness.matrix)
        inv_matvec = lambda v: scipy.linalg.lu_solve((lu, piv), v)
    else:
        def inv_matvec(v):
            x, *_ = _cg(matvec, v, 1e-10, 50 * stiffness.n)
            return x

    def power_norm(mv):
        v = rng.standard_normal(stiffness.n)
        v /= np.linalg.norm(v)
        prev = 0.0
        for _ in range(10000):
            w = mv(v)
            lam = float(np.linalg.norm(w))
            if lam == 0.0:
                return 0.0
            v = w / lam
            if abs(lam - prev) <= tol * lam:
                return lam
            prev = lam
        return lam

    smax = power_norm(matvec)
    smin_inv = power_norm(inv_matvec)
    return float(smax * smin_inv)
