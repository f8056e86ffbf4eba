"""Stiffness assembly: dense matrices and masked multilevel-Toeplitz operators.

With centers and test points on a common lattice, a_{jk} depends only on the
integer index difference, so the operator is stored as a difference-indexed
kernel tensor plus a mask embedding the interior points into their bounding
block.  Matrix-vector products then run through a circulant embedding and the
FFT.  Entries are computed once per distinct squared distance.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .frlap_kernel import FracOrder, frlap_gaussian
from .lattice import LatticeGrid

__all__ = [
    "DenseStiffness",
    "ToeplitzStiffness",
    "assemble_dense",
    "assemble_toeplitz",
    "toeplitz_matvec",
    "write_kernel_dump",
    "read_kernel_dump",
]


@dataclass(frozen=True)
class DenseStiffness:
    """Dense symmetric collocation matrix a_{jk} = frlap phi^eps(|x_j - x_k|)."""

    matrix: np.ndarray
    grid: LatticeGrid
    order: FracOrder
    eps: float

    @property
    def n(self):
        return self.matrix.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v


@dataclass(frozen=True)
class ToeplitzStiffness:
    """Masked multilevel-Toeplitz operator.

    ``kernel`` holds frlap values indexed by the difference vector over
    {-(n_i - 1), ..., n_i - 1} per axis (shape 2 n_i - 1); ``mask`` marks the
    lattice points of the bounding block that belong to the domain, in the
    same order as ``grid.points``.
    """

    level_sizes: tuple
    kernel: np.ndarray
    mask: np.ndarray            # bool over the bounding block
    block_pos: np.ndarray       # (N, d) positions of active points in block
    spectrum: np.ndarray = field(repr=False)  # rfftn of circulant embedding
    grid: LatticeGrid = None
    order: FracOrder = None
    eps: float = 0.0

    @property
    def n(self):
        return self.block_pos.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return toeplitz_matvec(self, v)

    def to_dense(self) -> np.ndarray:
        """Materialize the dense matrix by gathering kernel entries."""
        pos = self.block_pos
        d = pos.shape[1]
        center = np.array([n - 1 for n in self.level_sizes])
        diff = pos[:, None, :] - pos[None, :, :] + center[None, None, :]
        flat = np.zeros(diff.shape[:2], dtype=np.int64)
        for j in range(d):
            flat = flat * self.kernel.shape[j] + diff[:, :, j]
        return self.kernel.ravel()[flat]


def assemble_dense(grid: LatticeGrid, order: FracOrder, eps: float) -> DenseStiffness:
    """Dense stiffness from pairwise center distances."""
    if order.dim != grid.dim:
        raise ValueError("order.dim must match grid dimension")
    # integer index differences keep the distance set exact, so the per-unique
    # value cache collapses O(N^2) hypergeometric calls to O(#distinct norms)
    idx = grid.indices
    q2 = np.rint(cdist(idx.astype(float), idx.astype(float), "sqeuclidean")
                 ).astype(np.int64)
    present = np.zeros(int(q2.max()) + 1, dtype=bool)
    present[q2.ravel()] = True
    uniq = np.flatnonzero(present)
    vals = frlap_gaussian(order, eps, grid.h * np.sqrt(uniq.astype(float)))
    lut = np.zeros(present.size)
    lut[uniq] = vals
    mat = lut[q2]
    return DenseStiffness(matrix=mat, grid=grid, order=order, eps=eps)


def assemble_toeplitz(grid: LatticeGrid, order: FracOrder, eps: float) -> ToeplitzStiffness:
    """Difference-indexed kernel tensor, domain mask, and circulant spectrum."""
    if order.dim != grid.dim:
        raise ValueError("order.dim must match grid dimension")
    idx = grid.indices
    lo = idx.min(axis=0)
    hi = idx.max(axis=0)
    sizes = tuple(int(h - l + 1) for l, h in zip(lo, hi))
    d = len(sizes)

    # kernel over difference vectors; one hypergeometric call per distinct
    # integer squared norm
    axes = [np.arange(-(n - 1), n, dtype=np.int64) for n in sizes]
    mesh = np.meshgrid(*axes, indexing="ij")
    q2 = np.zeros(mesh[0].shape, dtype=np.int64)
    for m in mesh:
        q2 = q2 + m * m
    uniq, inv = np.unique(q2.ravel(), return_inverse=True)
    vals = frlap_gaussian(order, eps, grid.h * np.sqrt(uniq.astype(float)))
    kernel = vals[inv].reshape(q2.shape)

    block_pos = (idx - lo[None, :]).astype(np.int64)
    mask = np.zeros(sizes, dtype=bool)
    mask[tuple(block_pos.T)] = True

    # circulant embedding of size 2 n_i per axis: c[j] = kernel[|wrap(j)|]
    emb_shape = tuple(2 * n for n in sizes)
    grids = np.meshgrid(*[np.r_[np.arange(0, n), 0, np.arange(n - 1, 0, -1)]
                          for n in sizes], indexing="ij")
    center = np.array([n - 1 for n in sizes])
    gather = np.zeros(emb_shape, dtype=np.int64)
    for j in range(d):
        gather = gather * kernel.shape[j] + (grids[j] + center[j])
    emb = kernel.ravel()[gather]
    # zero the padding plane (distance n is outside the difference range)
    for j, n in enumerate(sizes):
        sl = [slice(None)] * d
        sl[j] = n
        emb[tuple(sl)] = 0.0
    spectrum = np.fft.rfftn(emb)

    return ToeplitzStiffness(level_sizes=sizes, kernel=kernel, mask=mask,
                             block_pos=block_pos, spectrum=spectrum,
                             grid=grid, order=order, eps=eps)


def toeplitz_matvec(op: ToeplitzStiffness, v: np.ndarray) -> np.ndarray:
    """A @ v through the circulant embedding; O(n log n) in the block size."""
    v = np.asarray(v, dtype=float)
    if v.shape != (op.n,):
        raise ValueError(f"expected vector of length {op.n}, got {v.shape}")
    emb_shape = tuple(2 * n for n in op.level_sizes)
    buf = np.zeros(emb_shape, dtype=float)
    block = tuple(slice(0, n) for n in op.level_sizes)
    scatter = np.zeros(op.level_sizes, dtype=float)
    scatter[tuple(op.block_pos.T)] = v
    buf[block] = scatter
    axes = tuple(range(len(emb_shape)))
    conv = np.fft.irfftn(np.fft.rfftn(buf) * op.spectrum, s=emb_shape, axes=axes)
    out_block = conv[block]
    return out_block[tuple(op.block_pos.T)]


_DUMP_MAGIC = b"TKRN"


def write_kernel_dump(op: ToeplitzStiffness, path) -> None:
    """Binary kernel dump: magic, int64 d, d int64 kernel dims, float64 data;
    all little-endian, C order."""
    with open(path, "wb") as fh:
        fh.write(_DUMP_MAGIC)
        fh.write(struct.pack("<q", len(op.level_sizes)))
        for s in op.kernel.shape:
            fh.write(struct.pack("<q", s))
        fh.write(op.kernel.astype("<f8").tobytes(order="C"))


def read_kernel_dump(path) -> np.ndarray:
    with open(path, "rb") as fh:
        if fh.read(4) != _DUMP_MAGIC:
            raise ValueError("not a kernel dump file")
        (d,) = struct.unpack("<q", fh.read(8))
        shape = tuple(struct.unpack("<q", fh.read(8))[0] for _ in range(d))
        data = np.frombuffer(fh.read(), dtype="<f8")
    return data.reshape(shape)
