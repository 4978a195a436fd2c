"""The standard symplectic space R^d x R^d.

Phase vectors are flat arrays ``w = (xi, eta)`` of length ``2d``; maps are
``2d x 2d`` arrays, optionally wrapped in :class:`BlockMap` for access to
the blocks relative to the splitting ``V1 = R^d x {0}``, ``V2 = {0} x R^d``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OddDimension
from .linalg import SYM_TOL


def half_dim(n: int) -> int:
    if n % 2:
        raise OddDimension(f"phase space dimension {n} is odd")
    return n // 2


def phase_vector(xi, eta) -> np.ndarray:
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if xi.shape != eta.shape or xi.ndim != 1:
        raise DimensionMismatch(f"xi {xi.shape} and eta {eta.shape} differ")
    return np.concatenate([xi, eta])


def split(w) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(xi, eta)`` views of a phase vector (or a batch of rows)."""
    w = np.asarray(w, dtype=float)
    d = half_dim(w.shape[-1])
    return w[..., :d], w[..., d:]


def omega_matrix(d: int) -> np.ndarray:
    """Matrix ``J = [[0, I], [-I, 0]]`` with ``omega(w1, w2) = w1 @ J @ w2``."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]])


def omega(w1, w2) -> float:
    """Symplectic form ``<xi1, eta2> - <xi2, eta1>``."""
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    if w1.shape != w2.shape or w1.ndim != 1:
        raise DimensionMismatch(f"shapes {w1.shape} and {w2.shape} differ")
    xi1, eta1 = split(w1)
    xi2, eta2 = split(w2)
    return float(xi1 @ eta2 - xi2 @ eta1)


def q_standard(w):
    """Quadratic form ``<xi, eta>`` of the standard sector.

    Works on a single vector or row-wise on a batch.
    """
    xi, eta = split(w)
    if xi.ndim == 1:
        # same reduction as omega, so Q(w) = omega((xi, 0), (0, eta)) bit for bit
        return float(xi @ eta)
    return np.einsum("...i,...i->...", xi, eta)


@dataclass(frozen=True)
class BlockMap:
    """A ``2d x 2d`` map with its ``d x d`` blocks ``[[A, B], [C, D]]``."""

    full: np.ndarray

    def __post_init__(self):
        m = np.array(self.full, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got {m.shape}")
        half_dim(m.shape[0])
        m.setflags(write=False)
        object.__setattr__(self, "full", m)

    @property
    def dim(self) -> int:
        return self.full.shape[0] // 2

    @property
    def a(self) -> np.ndarray:
        return self.full[: self.dim, : self.dim]

    @property
    def b(self) -> np.ndarray:
        return self.full[: self.dim, self.dim :]

    @property
    def c(self) -> np.ndarray:
        return self.full[self.dim :, : self.dim]

    @property
    def d(self) -> np.ndarray:
        return self.full[self.dim :, self.dim :]

    @classmethod
    def from_blocks(cls, a, b, c, d) -> "BlockMap":
        return cls(np.block([[a, b], [c, d]]))

    def __matmul__(self, other):
        if isinstance(other, BlockMap):
            return BlockMap(self.full @ other.full)
        return self.full @ np.asarray(other, dtype=float)

    def __array__(self, dtype=None, copy=None):
        return self.full if dtype is None else self.full.astype(dtype)


def as_map(m) -> BlockMap:
    return m if isinstance(m, BlockMap) else BlockMap(m)


def blocks(m) -> BlockMap:
    """Split an even-sized square matrix into its four blocks.

    Raises
    ------
    OddDimension
        If the matrix side is odd.
    """
    return as_map(m)


def is_symplectic(m, tol: float = SYM_TOL) -> bool:
    """Check ``L^T J L = J`` entrywise within ``tol * (1 + ||L||_2^2)``."""
    full = as_map(m).full
    j = omega_matrix(full.shape[0] // 2)
    defect = np.max(np.abs(full.T @ j @ full - j))
    return bool(defect <= tol * (1.0 + np.linalg.norm(full, 2) ** 2))


def symplectic_inverse(m) -> BlockMap:
    """Inverse of a symplectic map, ``[[D^T, -B^T], [-C^T, A^T]]``."""
    L = as_map(m)
    return BlockMap.from_blocks(L.d.T, -L.b.T, -L.c.T, L.a.T)


def identity(d: int) -> BlockMap:
    return BlockMap(np.eye(2 * d))


def rotation(d: int) -> BlockMap:
    """``[[0, I], [-I, 0]]``, which takes the standard sector onto the complementary one."""
    return BlockMap(omega_matrix(d))
