"""Domains and uniform lattices of RBF centers strictly interior to them.

Centers live on ``offset + h * k`` for integer multi-indices ``k``; keeping
the integer indices around is what lets assembly exploit the multilevel
Toeplitz structure exactly.  Test points coincide with the centers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Interval",
    "Box",
    "Disk",
    "LatticeGrid",
    "ShapeCoupling",
    "generate_centers",
    "evaluation_grid",
    "parse_domain",
    "EmptyGridError",
]

# Lattice points closer than BOUNDARY_TOL * diam to the boundary are treated
# as boundary points and excluded (ties break toward exclusion).
BOUNDARY_TOL = 1e-12


class EmptyGridError(ValueError):
    """Spacing too large: no lattice point lies strictly inside the domain."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("interval requires b > a")

    dim = 1

    @property
    def bounding_box(self):
        return ((self.a, self.b),)

    @property
    def diameter(self):
        return self.b - self.a

    def contains_strict(self, pts, tol: float = 0.0):
        x = np.asarray(pts, dtype=float).reshape(-1, 1)[:, 0]
        return (x > self.a + tol) & (x < self.b - tol)

    def contains_closed(self, pts):
        x = np.asarray(pts, dtype=float).reshape(-1, 1)[:, 0]
        return (x >= self.a) & (x <= self.b)


@dataclass(frozen=True)
class Box:
    bounds: tuple  # ((a1, b1), ..., (ad, bd))

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(tuple(map(float, ab)) for ab in self.bounds))
        for a, b in self.bounds:
            if not b > a:
                raise ValueError("box requires b > a on every axis")

    @property
    def dim(self):
        return len(self.bounds)

    @property
    def bounding_box(self):
        return self.bounds

    @property
    def diameter(self):
        return math.sqrt(sum((b - a) ** 2 for a, b in self.bounds))

    def contains_strict(self, pts, tol: float = 0.0):
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        ok = np.ones(p.shape[0], dtype=bool)
        for j, (a, b) in enumerate(self.bounds):
            ok &= (p[:, j] > a + tol) & (p[:, j] < b - tol)
        return ok

    def contains_closed(self, pts):
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        ok = np.ones(p.shape[0], dtype=bool)
        for j, (a, b) in enumerate(self.bounds):
            ok &= (p[:, j] >= a) & (p[:, j] <= b)
        return ok


@dataclass(frozen=True)
class Disk:
    center: tuple = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(map(float, self.center)))
        if not self.radius > 0:
            raise ValueError("disk requires positive radius")

    dim = 2

    @property
    def bounding_box(self):
        cx, cy = self.center
        r = self.radius
        return ((cx - r, cx + r), (cy - r, cy + r))

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains_strict(self, pts, tol: float = 0.0):
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        d2 = (p[:, 0] - self.center[0]) ** 2 + (p[:, 1] - self.center[1]) ** 2
        return np.sqrt(d2) < self.radius - tol

    def contains_closed(self, pts):
        p = np.atleast_2d(np.asarray(pts, dtype=float))
        d2 = (p[:, 0] - self.center[0]) ** 2 + (p[:, 1] - self.center[1]) ** 2
        return d2 <= self.radius ** 2


@dataclass(frozen=True)
class ShapeCoupling:
    """Fixed c* = eps*h coupling: gamma = (c*)^2 stays constant under refinement."""

    c_star: float

    def __post_init__(self):
        if not self.c_star > 0:
            raise ValueError("c_star must be positive")

    @property
    def gamma(self):
        return self.c_star ** 2

    def eps(self, h: float) -> float:
        return self.c_star / h


@dataclass(frozen=True)
class LatticeGrid:
    """Uniform lattice of spacing h: points = offset + h * indices."""

    h: float
    offset: tuple
    indices: np.ndarray  # (N, d) int64
    points: np.ndarray = field(init=False)  # (N, d) float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 2 or idx.shape[0] < 1:
            raise ValueError("indices must be a nonempty (N, d) array")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "offset", tuple(map(float, self.offset)))
        pts = np.asarray(self.offset, dtype=float)[None, :] + self.h * idx.astype(float)
        object.__setattr__(self, "points", pts)

    @property
    def count(self):
        return self.indices.shape[0]

    @property
    def dim(self):
        return self.indices.shape[1]


def _axis_interior_indices(a: float, b: float, h: float, tol_len: float):
    """Integer k with a + k*h strictly inside (a, b), boundary ties excluded."""
    kmax = int(math.floor((b - a) / h + 0.5)) + 1
    ks = []
    for k in range(1, kmax + 1):
        x = a + k * h
        if x >= b - tol_len:
            break
        if x > a + tol_len:
            ks.append(k)
    return ks


def generate_centers(domain, h: float) -> LatticeGrid:
    """Uniform lattice of spacing h strictly inside the domain.

    Intervals and boxes anchor the lattice at the lower corner, so spacings of
    the form (b - a)/(N + 1) give exactly the N symmetric interior points.
    The disk lattice is anchored at its center.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    tol_len = BOUNDARY_TOL * domain.diameter
    if isinstance(domain, Interval):
        ks = _axis_interior_indices(domain.a, domain.b, h, tol_len)
        if not ks:
            raise EmptyGridError(f"no interior lattice point for h = {h}")
        idx = np.asarray(ks, dtype=np.int64)[:, None]
        return LatticeGrid(h=h, offset=(domain.a,), indices=idx)
    if isinstance(domain, Box):
        per_axis = [_axis_interior_indices(a, b, h, tol_len) for a, b in domain.bounds]
        if any(len(ks) == 0 for ks in per_axis):
            raise EmptyGridError(f"no interior lattice point for h = {h}")
        idx = np.asarray(list(itertools.product(*per_axis)), dtype=np.int64)
        offset = tuple(a for a, _ in domain.bounds)
        return LatticeGrid(h=h, offset=offset, indices=idx)
    if isinstance(domain, Disk):
        m = int(math.floor(domain.radius / h)) + 1
        rng = np.arange(-m, m + 1, dtype=np.int64)
        ii, jj = np.meshgrid(rng, rng, indexing="ij")
        idx = np.stack([ii.ravel(), jj.ravel()], axis=1)
        pts = np.asarray(domain.center)[None, :] + h * idx.astype(float)
        keep = domain.contains_strict(pts, tol=tol_len)
        idx = idx[keep]
        if idx.shape[0] == 0:
            raise EmptyGridError(f"no interior lattice point for h = {h}")
        return LatticeGrid(h=h, offset=domain.center, indices=idx)
    raise TypeError(f"unsupported domain type {type(domain).__name__}")


def evaluation_grid(domain, h: float, refine: int = 8) -> np.ndarray:
    """Uniform grid of spacing h/refine covering the closed domain.

    Used for RMS error evaluation; membership is non-strict so boundary points
    are included.
    """
    if refine < 2:
        raise ValueError("refine must be >= 2")
    hh = h / refine
    axes = []
    for a, b in domain.bounding_box:
        n = int(round((b - a) / hh))
        axes.append(a + hh * np.arange(0, n + 1))
    if domain.dim == 1:
        pts = axes[0][:, None]
    else:
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
    if isinstance(domain, Disk):
        # anchor at the disk center so the lattice matches the center grid
        cx = np.asarray(domain.center)
        m = int(math.floor(domain.radius / hh)) + 1
        rng = hh * np.arange(-m, m + 1)
        xx, yy = np.meshgrid(cx[0] + rng, cx[1] + rng, indexing="ij")
        pts = np.stack([xx.ravel(), yy.ravel()], axis=1)
    return pts[domain.contains_closed(pts)]


def parse_domain(text: str):
    """Parse a CLI domain spec.

    Formats: ``interval:a,b`` | ``box:a1,b1,a2,b2[,...]`` | ``disk:cx,cy,r``.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    vals = [float(v) for v in rest.split(",")] if rest else []
    if kind == "interval":
        if len(vals) != 2:
            raise ValueError("interval domain needs 'interval:a,b'")
        return Interval(vals[0], vals[1])
    if kind == "box":
        if len(vals) < 4 or len(vals) % 2:
            raise ValueError("box domain needs 'box:a1,b1,a2,b2[,...]'")
        bounds = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
        return Box(bounds)
    if kind == "disk":
        if len(vals) != 3:
            raise ValueError("disk domain needs 'disk:cx,cy,r'")
        return Disk((vals[0], vals[1]), vals[2])
    raise ValueError(f"unknown domain kind '{kind}'")
