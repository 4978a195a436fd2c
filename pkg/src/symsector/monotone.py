"""Monotonicity of symplectic maps with respect to the standard sector.

A monotone map factors uniquely as

    L = [[A, 0], [0, A^-T]] @ [[I, 0], [P, I]] @ [[I, R], [0, I]]

with symmetric ``P, R``. Monotonicity is equivalent to ``P, R >= 0`` and
strict monotonicity to ``P, R > 0``; this module reads the class off that
factorization.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    BlockSingular,
    NotStrictlyMonotone,
    NotSymplectic,
    SingularA,
)
from .linalg import (
    COND_MAX,
    DEF_TOL,
    SYM_TOL,
    Definiteness,
    classify_definiteness,
    cond,
    is_symmetric,
    psd_sqrt,
    sym_eigh,
)
from .symplectic import BlockMap, as_map, is_symplectic


class MonotoneClass(enum.IntEnum):
    NOT_MONOTONE = 0
    MONOTONE = 1
    STRICTLY_MONOTONE = 2

    @property
    def label(self) -> str:
        return {0: "NotMonotone", 1: "Monotone", 2: "StrictlyMonotone"}[int(self)]


@dataclass(frozen=True)
class QPRFactorization:
    a: np.ndarray
    p: np.ndarray
    r: np.ndarray
    p_class: Definiteness
    r_class: Definiteness
    cond_a: float

    def reassemble(self) -> np.ndarray:
        d = self.a.shape[0]
        eye, zero = np.eye(d), np.zeros((d, d))
        iso = q_isometry(self.a).full
        lower = np.block([[eye, zero], [self.p, eye]])
        upper = np.block([[eye, self.r], [zero, eye]])
        return iso @ lower @ upper


def q_isometry(a) -> BlockMap:
    """The Q-preserving map ``[[A, 0], [0, A^-T]]``.

    Raises
    ------
    SingularA
        If ``cond(A) > 1e12``.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if cond(a) > COND_MAX:
        raise SingularA("A is numerically singular")
    d = a.shape[0]
    zero = np.zeros((d, d))
    return BlockMap(np.block([[a, zero], [zero, np.linalg.inv(a).T]]))


def _sym_part(m: np.ndarray, what: str) -> np.ndarray:
    if not is_symmetric(m, SYM_TOL):
        raise NotSymplectic(f"{what} is not symmetric; input is not symplectic")
    return 0.5 * (m + m.T)


def factor_qpr(m, tol: float = DEF_TOL) -> QPRFactorization:
    """Factor a symplectic map as ``iso(A) @ lower(P) @ upper(R)``.

    ``R = A^-1 B`` and ``P = A^T C`` are read from
    ``iso(A)^-1 @ L = [[I, R], [P, *]]``.

    Raises
    ------
    NotSymplectic
        If ``L`` fails the symplecticity test or ``P``/``R`` come out
        asymmetric.
    BlockSingular
        If block A or D has condition number above 1e12.
    """
    L = as_map(m)
    if not is_symplectic(L):
        raise NotSymplectic("map is not symplectic")
    cond_a = cond(L.a)
    if cond_a > COND_MAX or cond(L.d) > COND_MAX:
        raise BlockSingular("block A or D is numerically singular")
    r = _sym_part(np.linalg.solve(L.a, L.b), "R")
    p = _sym_part(L.a.T @ L.c, "P")
    return QPRFactorization(
        a=L.a.copy(),
        p=p,
        r=r,
        p_class=classify_definiteness(p, tol),
        r_class=classify_definiteness(r, tol),
        cond_a=cond_a,
    )


def monotonicity_class(m, tol: float = DEF_TOL) -> MonotoneClass:
    """Classify a symplectic map as not monotone, monotone or strictly monotone.

    Maps whose A or D block is singular cannot be monotone and are reported
    as such instead of raising.
    """
    L = as_map(m)
    if not is_symplectic(L):
        raise NotSymplectic("map is not symplectic")
    try:
        f = factor_qpr(L, tol)
    except BlockSingular:
        return MonotoneClass.NOT_MONOTONE
    if f.p_class.is_pd and f.r_class.is_pd:
        return MonotoneClass.STRICTLY_MONOTONE
    if f.p_class.is_psd and f.r_class.is_psd:
        return MonotoneClass.MONOTONE
    return MonotoneClass.NOT_MONOTONE


def core_map(t) -> BlockMap:
    """``[[I, I], [T, I + T]]`` with ``T = diag(t)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    eye = np.eye(t.size)
    T = np.diag(t)
    return BlockMap(np.block([[eye, eye], [T, eye + T]]))


@dataclass(frozen=True)
class CanonicalForm:
    t: np.ndarray
    left_iso: BlockMap
    right_iso: BlockMap
    core: BlockMap
    factorization: QPRFactorization


def canonical_form(m, tol: float = DEF_TOL) -> CanonicalForm:
    """Bring a strictly monotone map to ``[[I, I], [T, I + T]]``.

    The conjugating Q-isometries are composed from three steps: removing
    the A factor, rescaling by ``R^(-1/2)``, and the orthogonal
    diagonalizer ``F`` of ``K = R^(1/2) P R^(1/2)``. The result satisfies
    ``left_iso @ L @ right_iso == core`` and ``t`` is sorted ascending.
    """
    L = as_map(m)
    if monotonicity_class(L, tol) is not MonotoneClass.STRICTLY_MONOTONE:
        raise NotStrictlyMonotone("canonical form needs a strictly monotone map")
    f = factor_qpr(L, tol)
    r_half = psd_sqrt(f.r, tol)
    r_half_inv = np.linalg.inv(r_half)
    k = r_half @ f.p @ r_half
    t, F = sym_eigh(k)

    remove_a = q_isometry(np.linalg.inv(f.a))
    scale = q_isometry(r_half_inv)
    rotate = q_isometry(F)
    left = rotate.full.T @ scale.full @ remove_a.full
    right = np.linalg.inv(scale.full) @ rotate.full
    return CanonicalForm(
        t=t,
        left_iso=BlockMap(left),
        right_iso=BlockMap(right),
        core=core_map(t),
        factorization=f,
    )
