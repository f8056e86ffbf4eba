"""Two-stage treatment of nonhomogeneous exterior data.

Stage 1 fits an auxiliary Gaussian mixture w_h to the exterior datum g on a
thin collar region outside the domain.  Stage 2 evaluates the operator
applied to the global function w (= w_h inside, g outside) as

    frlap w (x) = frlap w_h (x)
                  + C_{d,alpha} int_{outside collar} (w_h - g)(y) / |y-x|^{d+alpha} dy,

where the closed form handles the first term and panelized Gauss-Legendre
quadrature the (singularity-free) correction; the homogeneous solver then
runs on f - frlap w.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .assembly import assemble_dense
from .frlap_kernel import FracOrder, frlap_gaussian
from .lattice import Box, Interval, LatticeGrid, generate_centers
from .reference import frlap_coefficient
from .solver import RbfSolution, SolveOptions, gaussian_mixture_eval, solve

__all__ = [
    "BoundaryLayer",
    "AuxiliaryFit",
    "CorrectionQuad",
    "CorrectionField",
    "FitToleranceError",
    "TailBoundError",
    "fit_auxiliary",
    "build_correction_field",
    "frlap_w",
    "frlap_w_many",
    "solve_nonhomogeneous",
]


class FitToleranceError(ArithmeticError):
    def __init__(self, message, fit_rms):
        super().__init__(message)
        self.fit_rms = fit_rms


class TailBoundError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BoundaryLayer:
    """Closed collar of given width hugging the domain from outside.

    Supported geometries: symmetric two-sided collar of an interval, and the
    frame [a - width, b + width]^d \\ (a, b)^d of a box.
    """

    domain: object
    width: float
    fit_spacing: float
    fit_eps: float

    def __post_init__(self):
        if not (self.width > 0 and self.fit_spacing > 0 and self.fit_eps > 0):
            raise ValueError("layer width, spacing and eps must be positive")
        if not isinstance(self.domain, (Interval, Box)):
            raise TypeError("boundary layers support interval and box domains")
        if isinstance(self.domain, Box):
            halves = {round((b - a) / 2, 12) for a, b in self.domain.bounds}
            if len(halves) != 1:
                raise ValueError("box collars require equal half-widths per axis")

    def fit_centers(self) -> np.ndarray:
        """Lattice of spacing fit_spacing covering the closed collar
        (boundary points of the domain included)."""
        hs = self.fit_spacing
        if isinstance(self.domain, Interval):
            n = int(round(self.width / hs))
            left = self.domain.a - self.width + hs * np.arange(n + 1)
            right = self.domain.b + hs * np.arange(n + 1)
            return np.concatenate([left, right])[:, None]
        bounds = self.domain.bounds
        axes = []
        for a, b in bounds:
            n = int(round((b - a + 2 * self.width) / hs))
            axes.append(a - self.width + hs * np.arange(n + 1))
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        inside = self.domain.contains_strict(pts)
        return pts[~inside]

    def collar_sample_grid(self, refine: int = 4) -> np.ndarray:
        """Refined lattice over the collar, for the fit residual RMS."""
        saved = self.fit_spacing
        finer = BoundaryLayer(self.domain, self.width, saved / refine, self.fit_eps)
        return finer.fit_centers()


@dataclass(frozen=True)
class AuxiliaryFit:
    centers: np.ndarray
    eps: float
    lam: np.ndarray
    fit_rms: float
    condition: float

    def __call__(self, points):
        return gaussian_mixture_eval(points, self.centers, self.eps, self.lam)


@dataclass(frozen=True)
class CorrectionQuad:
    """Panelized Gauss-Legendre configuration for the exterior correction."""

    panel_order: int = 16       # Gauss-Legendre points per axis per panel
    first_width: float = 0.125  # innermost panel width; widths double outward
    tail_p: float = 2.0         # |w_h - g|(y) ~ |y|^{-tail_p} far out
    tol: float = 1e-11
    max_radius: float = 1e9
    panel_refine: int = 1       # split every panel this many extra times

    def __post_init__(self):
        if self.panel_order < 2 or self.first_width <= 0 or self.tol <= 0:
            raise ValueError("invalid quadrature configuration")


def fit_auxiliary(g, layer: BoundaryLayer, tol: float = 1e-7,
                  sample_refine: int = 4) -> AuxiliaryFit:
    """Interpolate g on the collar lattice (test points = centers).

    The flat-Gaussian Gram system is numerically rank-deficient (condition
    numbers ~ 1e19); pivoted LU still produces a small-residual quasi-solution
    whose mixture extends smoothly, and SVD least squares is the fallback.
    The achieved residual is measured as an RMS over a
    refine-by-``sample_refine`` collar grid.
    """
    centers = layer.fit_centers()
    rhs = np.asarray(g(centers), dtype=float)
    d2 = ((centers[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    gram = np.exp(-(layer.fit_eps ** 2) * d2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        try:
            lam = scipy.linalg.solve(gram, rhs)
        except scipy.linalg.LinAlgError:
            lam = None
    if lam is None or not np.all(np.isfinite(lam)):
        lam, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    svals = np.linalg.svd(gram, compute_uv=False)
    cond = float(svals[0] / max(svals[-1], 1e-300))

    sample = layer.collar_sample_grid(sample_refine)
    resid = gaussian_mixture_eval(sample, centers, layer.fit_eps, lam) \
        - np.asarray(g(sample), dtype=float)
    fit_rms = float(np.sqrt(np.mean(resid ** 2)))
    if fit_rms > tol:
        raise FitToleranceError(
            f"auxiliary fit RMS {fit_rms:.3e} exceeds tolerance {tol:.1e} "
            f"(Gram condition ~ {cond:.2e})", fit_rms)
    return AuxiliaryFit(centers=centers, eps=layer.fit_eps, lam=lam,
                        fit_rms=fit_rms, condition=cond)


def _gl_panels_1d(lo: float, widths, order: int):
    """Gauss-Legendre nodes/weights tiling [lo, lo + sum(widths)] panelwise."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    a = lo
    for w in widths:
        b = a + w
        nodes.append(0.5 * (a + b) + 0.5 * (b - a) * xg)
        weights.append(0.5 * (b - a) * wg)
        a = b
    return np.concatenate(nodes), np.concatenate(weights)


def _dyadic_widths(first: float, total: float, refine: int):
    """Panel widths doubling outward from ``first`` until covering ``total``.

    Returns (widths, next_width) so the dyadic progression continues across
    successive radius extensions."""
    widths = []
    w = first
    acc = 0.0
    while acc < total - 1e-12 * total:
        w_eff = min(w, total - acc)
        widths.append(w_eff)
        acc += w_eff
        if w_eff == w:
            w *= 2.0
    if refine > 1:
        widths = [wi / refine for wi in widths for _ in range(refine)]
    return widths, w


class CorrectionField:
    """Precomputed quadrature nodes over Omega^c minus the collar, with
    (w_h - g) * weight cached, supporting doubling of the outer radius.

    Node positions depend only on (layer, quad) and the cached defect values
    only on (fit, g), so one field serves every operator order; panel widths
    grade dyadically away from the collar across extensions."""

    def __init__(self, fit: AuxiliaryFit, g, layer: BoundaryLayer,
                 quad: CorrectionQuad):
        self.fit = fit
        self.g = g
        self.layer = layer
        self.quad = quad
        self.nodes = np.empty((0, layer.domain.dim if isinstance(layer.domain, Box)
                               else 1))
        self.wvals = np.empty(0)
        self.radius = 0.0
        self.next_width = quad.first_width
        self.ring_starts: list[int] = []  # node offset where each ring began

    def _defect(self, pts):
        return (gaussian_mixture_eval(pts, self.fit.centers, self.fit.eps,
                                      self.fit.lam)
                - np.asarray(self.g(pts), dtype=float))

    def extend_to(self, radius: float):
        """Add panels between the current outer radius and ``radius``."""
        dom = self.layer.domain
        q = self.quad
        if isinstance(dom, Interval):
            # two rays starting just past the collar; the left ray mirrors the
            # right one around the interval midpoint
            start_r = self.radius if self.radius > 0 else dom.b + self.layer.width
            widths, self.next_width = _dyadic_widths(
                self.next_width, radius - start_r, q.panel_refine)
            nr, wr = _gl_panels_1d(start_r, widths, q.panel_order)
            mid = 0.5 * (dom.a + dom.b)
            nodes = np.concatenate([nr, 2.0 * mid - nr])[:, None]
            weights = np.concatenate([wr, wr])
        else:
            # box frame: rings between square [-L, L]-style frames
            b = dom.bounds
            cx = np.array([(lo + hi) * 0.5 for lo, hi in b])
            half = np.array([(hi - lo) * 0.5 for lo, hi in b])
            start = (half.max() + self.layer.width) if self.radius == 0.0 else self.radius
            widths, self.next_width = _dyadic_widths(
                self.next_width, radius - start, q.panel_refine)
            nodes_list, w_list = [], []
            L = start
            for wdt in widths:
                Lp = L + wdt
                # ring [-Lp, Lp]^2 \ [-L, L]^2 around the (possibly offset) box
                segs = []
                # top / bottom strips (full width), left / right strips
                segs.append(((-Lp, Lp), (L, Lp)))
                segs.append(((-Lp, Lp), (-Lp, -L)))
                segs.append(((-Lp, -L), (-L, L)))
                segs.append(((L, Lp), (-L, L)))
                for (x0, x1), (y0, y1) in segs:
                    nx = max(1, int(math.ceil((x1 - x0) / wdt / 4)))
                    ny = max(1, int(math.ceil((y1 - y0) / wdt / 4)))
                    xs, xw = _gl_panels_1d(x0, [(x1 - x0) / nx] * nx, q.panel_order)
                    ys, yw = _gl_panels_1d(y0, [(y1 - y0) / ny] * ny, q.panel_order)
                    gx, gy = np.meshgrid(xs, ys, indexing="ij")
                    gw = np.outer(xw, yw)
                    nodes_list.append(np.stack([gx.ravel() + cx[0],
                                                gy.ravel() + cx[1]], axis=1))
                    w_list.append(gw.ravel())
                L = Lp
            nodes = np.concatenate(nodes_list) if nodes_list else np.empty((0, 2))
            weights = np.concatenate(w_list) if w_list else np.empty(0)

        if nodes.shape[0]:
            vals = self._defect(nodes) * weights
            self.ring_starts.append(self.nodes.shape[0])
            self.nodes = np.concatenate([self.nodes, nodes]) \
                if self.nodes.size else nodes
            self.wvals = np.concatenate([self.wvals, vals])
        self.radius = radius

    def eval_at(self, xs: np.ndarray, d: int, alpha: float,
                start: int = 0, chunk: int = 200) -> np.ndarray:
        """C_{d,alpha} sum_nodes wvals / |node - x|^{d+alpha} for many x."""
        c = frlap_coefficient(d, alpha)
        out = np.empty(xs.shape[0])
        nodes = self.nodes[start:]
        wv = self.wvals[start:]
        p = -(d + alpha) / 2.0
        for i0 in range(0, xs.shape[0], chunk):
            blk = xs[i0:i0 + chunk]
            d2 = ((blk[:, None, :] - nodes[None, :, :]) ** 2).sum(axis=2)
            out[i0:i0 + chunk] = (d2 ** p) @ wv
        return c * out


def build_correction_field(fit: AuxiliaryFit, g, layer: BoundaryLayer,
                           quad: CorrectionQuad) -> CorrectionField:
    """Fresh (empty) exterior quadrature field; panels are added lazily as
    evaluation requests push the outer radius out."""
    return CorrectionField(fit, g, layer, quad)


def _correction_values(order: FracOrder, field: CorrectionField,
                       xs: np.ndarray) -> np.ndarray:
    """Exterior-correction integral at each x, with adaptive outer radius.

    A shared field only grows when the outermost ring's contribution for this
    operator order still exceeds the stopping criterion."""
    quad = field.quad
    dom = field.layer.domain
    if field.radius == 0.0:
        field.extend_to(4.0 * dom.diameter)
    total = field.eval_at(xs, order.dim, order.alpha)
    decay = 2.0 ** (-(quad.tail_p + order.alpha))

    def converged(last_inc_max: float) -> bool:
        tail_bound = last_inc_max * decay / (1.0 - decay)
        return last_inc_max < quad.tol / 10.0 and tail_bound < quad.tol

    last_start = field.ring_starts[-1] if field.ring_starts else 0
    inc_max = float(np.max(np.abs(
        field.eval_at(xs, order.dim, order.alpha, start=last_start))))
    while not converged(inc_max):
        if field.radius > quad.max_radius:
            raise TailBoundError(
                f"tail bound {inc_max * decay / (1.0 - decay):.2e} still above "
                f"tol {quad.tol:.1e} at radius {field.radius:.3g}")
        prev_count = field.nodes.shape[0]
        field.extend_to(2.0 * field.radius)
        inc = field.eval_at(xs, order.dim, order.alpha, start=prev_count)
        total += inc
        inc_max = float(np.max(np.abs(inc)))
    return total


def frlap_w(order: FracOrder, fit: AuxiliaryFit, g, layer: BoundaryLayer,
            quad: CorrectionQuad, x) -> float:
    """Operator applied to the extended auxiliary function at one point."""
    xs = np.atleast_2d(np.asarray(x, dtype=float))
    return float(frlap_w_many(order, fit, g, layer, quad, xs)[0])


def frlap_w_many(order: FracOrder, fit: AuxiliaryFit, g, layer: BoundaryLayer,
                 quad: CorrectionQuad, xs, field: CorrectionField | None = None
                 ) -> np.ndarray:
    """Vectorized frlap w over interior points: closed-form mixture part plus
    the panel-quadrature correction.  Pass a prebuilt ``field`` to reuse the
    exterior quadrature nodes across calls (they are order-independent)."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    d2 = ((xs[:, None, :] - fit.centers[None, :, :]) ** 2).sum(axis=2)
    analytic = frlap_gaussian(order, fit.eps, np.sqrt(d2)) @ fit.lam
    if order.alpha == 0.0 or order.alpha == 2.0:
        # local operator: no exterior correction
        return analytic
    if field is None:
        field = build_correction_field(fit, g, layer, quad)
    return analytic + _correction_values(order, field, xs)


def solve_nonhomogeneous(problem, layer: BoundaryLayer, quad: CorrectionQuad,
                         h: float, c_star: float, fit_tol: float = 1e-7,
                         opts: SolveOptions | None = None,
                         fit: AuxiliaryFit | None = None,
                         field: CorrectionField | None = None):
    """Two-stage solve of frlap u = f in the domain, u = g outside.

    Returns (interior solution for v, auxiliary fit, combined evaluator for
    u = v + w_h valid on the closed domain, solve report).  ``fit`` and
    ``field`` may be passed in to amortize stage 1 across runs.
    """
    order = FracOrder(problem.alpha, problem.domain.dim)
    if fit is None:
        fit = fit_auxiliary(problem.g, layer, tol=fit_tol)
    grid = generate_centers(problem.domain, h)
    eps = c_star / h
    rhs = np.asarray(problem.f(grid.points), dtype=float) \
        - frlap_w_many(order, fit, problem.g, layer, quad, grid.points, field=field)
    stiff = assemble_dense(grid, order, eps)
    v_sol, report = solve(stiff, rhs, opts)

    def u_eval(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return v_sol(pts) + fit(pts)

    return v_sol, fit, u_eval, report
