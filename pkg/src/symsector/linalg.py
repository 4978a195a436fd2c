"""Tolerance-aware dense linear algebra shared by the rest of the package.

All predicates use one relative tolerance policy: an absolute threshold is
``tol * (1 + scale)`` where ``scale`` is the largest absolute entry (for
symmetry checks) or the largest absolute eigenvalue (for definiteness).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonSymmetricInput, NotPSD

SYM_TOL = 1e-10
DEF_TOL = 1e-9
COND_MAX = 1e12


class DefClass(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"
    NEGATIVE_SEMIDEFINITE = "NegativeSemidefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"

    @property
    def nonnegative(self) -> bool:
        return self in (DefClass.POSITIVE_DEFINITE, DefClass.POSITIVE_SEMIDEFINITE)


@dataclass(frozen=True)
class Definiteness:
    cls: DefClass
    min_eig: float
    max_eig: float

    @property
    def is_pd(self) -> bool:
        return self.cls is DefClass.POSITIVE_DEFINITE

    @property
    def is_psd(self) -> bool:
        return self.cls.nonnegative


def symmetry_defect(m: np.ndarray) -> float:
    """Largest absolute entry of ``m - m.T``."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.T)))


def is_symmetric(m, tol: float = SYM_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    return symmetry_defect(m) <= tol * (1.0 + scale)


def as_symmetric(m, tol: float = SYM_TOL) -> np.ndarray:
    """Validate symmetry and return the symmetrized copy ``(m + m.T) / 2``.

    Raises
    ------
    NonSymmetricInput
        If ``m`` is not square or its asymmetry exceeds the tolerance.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSymmetricInput(f"expected a square matrix, got shape {m.shape}")
    if not is_symmetric(m, tol):
        raise NonSymmetricInput(
            f"matrix is not symmetric (defect {symmetry_defect(m):.3e})"
        )
    return 0.5 * (m + m.T)


def classify_definiteness(m, tol: float = DEF_TOL) -> Definiteness:
    """Classify a symmetric matrix by the signs of its eigenvalues.

    The threshold is ``tau = tol * (1 + max|eig|)``. Positive classes are
    tested first, so the zero matrix is reported as positive semidefinite.

    Parameters
    ----------
    m : array_like, shape (d, d)
        Symmetric matrix (checked with ``SYM_TOL``).
    tol : float
        Relative eigenvalue tolerance.

    Returns
    -------
    Definiteness
    """
    s = as_symmetric(m)
    eig = np.linalg.eigvalsh(s) if s.size else np.zeros(1)
    lo, hi = float(eig[0]), float(eig[-1])
    tau = tol * (1.0 + max(abs(lo), abs(hi)))
    if lo > tau:
        cls = DefClass.POSITIVE_DEFINITE
    elif lo >= -tau:
        cls = DefClass.POSITIVE_SEMIDEFINITE
    elif hi < -tau:
        cls = DefClass.NEGATIVE_DEFINITE
    elif hi <= tau:
        cls = DefClass.NEGATIVE_SEMIDEFINITE
    else:
        cls = DefClass.INDEFINITE
    return Definiteness(cls, lo, hi)


def psd_sqrt(m, tol: float = DEF_TOL) -> np.ndarray:
    """Symmetric positive semidefinite square root.

    Eigenvalues inside the tolerance band around zero are clipped to zero
    before taking roots.

    Raises
    ------
    NotPSD
        If ``m`` has a negative eigenvalue beyond the tolerance.
    """
    s = as_symmetric(m)
    if not classify_definiteness(s, tol).is_psd:
        raise NotPSD("matrix is not positive semidefinite")
    w, v = np.linalg.eigh(s)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


def pd_inv_sqrt(m) -> np.ndarray:
    """Inverse square root of a positive definite matrix."""
    s = as_symmetric(m)
    w, v = np.linalg.eigh(s)
    if w[0] <= 0.0:
        raise NotPSD("matrix is not positive definite")
    r = (v / np.sqrt(w)) @ v.T
    return 0.5 * (r + r.T)


def sym_eigh(m):
    """``numpy.linalg.eigh`` on the symmetrized input, ascending order."""
    s = np.asarray(m, dtype=float)
    return np.linalg.eigh(0.5 * (s + s.T))


def cond(m) -> float:
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 1.0
    c = np.linalg.cond(m)
    return float(c) if np.isfinite(c) else float("inf")
