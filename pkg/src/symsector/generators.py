"""Random test objects: symmetric matrices and symplectic maps of known class.

Maps are assembled from the factorization ``iso(A) @ lower(P) @ upper(R)``,
so their monotonicity class is fixed by construction.
"""

from __future__ import annotations

import numpy as np

from .monotone import q_isometry
from .symplectic import BlockMap, rotation

KINDS = ("strict", "monotone", "isometry", "not_monotone", "rotated")


def random_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_sym(rng, d: int, eigs) -> np.ndarray:
    """Symmetric matrix with prescribed eigenvalues and random eigenvectors."""
    q = random_orthogonal(rng, d)
    m = (q * np.asarray(eigs, dtype=float)) @ q.T
    return 0.5 * (m + m.T)


def random_spd(rng, d: int, lo: float = 0.2, hi: float = 3.0) -> np.ndarray:
    return random_sym(rng, d, rng.uniform(lo, hi, d))


def random_invertible(rng, d: int, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    return random_orthogonal(rng, d) @ np.diag(rng.uniform(lo, hi, d)) @ random_orthogonal(rng, d)


def assemble(a, p, r) -> BlockMap:
    d = np.shape(a)[0]
    eye, zero = np.eye(d), np.zeros((d, d))
    lower = np.block([[eye, zero], [p, eye]])
    upper = np.block([[eye, r], [zero, eye]])
    return BlockMap(q_isometry(a).full @ lower @ upper)


def _psd_with_kernel(rng, d: int) -> np.ndarray:
    eigs = rng.uniform(0.2, 3.0, d)
    eigs[rng.integers(d)] = 0.0
    return random_sym(rng, d, eigs)


def _indefinite(rng, d: int) -> np.ndarray:
    eigs = rng.uniform(-2.0, 3.0, d)
    eigs[rng.integers(d)] = -rng.uniform(0.3, 2.0)
    return random_sym(rng, d, eigs)


def random_symplectic(rng: np.random.Generator, d: int, kind: str = "strict") -> BlockMap:
    """Random symplectic map whose monotonicity is fixed by ``kind``.

    ``strict``: ``P, R > 0``. ``monotone``: one of ``P, R`` has a kernel.
    ``isometry``: ``P = R = 0``. ``not_monotone``: ``P`` or ``R`` has an
    eigenvalue at most -0.3. ``rotated``: a strict map composed with
    ``[[0, I], [-I, 0]]``, which reverses the sign of ``Q``.
    """
    a = random_invertible(rng, d)
    if kind == "strict":
        return assemble(a, random_spd(rng, d), random_spd(rng, d))
    if kind == "monotone":
        p, r = random_spd(rng, d), random_spd(rng, d)
        if rng.random() < 0.5:
            p = _psd_with_kernel(rng, d)
        else:
            r = _psd_with_kernel(rng, d)
        return assemble(a, p, r)
    if kind == "isometry":
        return q_isometry(a)
    if kind == "not_monotone":
        p, r = random_spd(rng, d), random_spd(rng, d)
        if rng.random() < 0.5:
            p = _indefinite(rng, d)
        else:
            r = _indefinite(rng, d)
        return assemble(a, p, r)
    if kind == "rotated":
        inner = random_symplectic(rng, d, "strict")
        return BlockMap(rotation(d).full @ inner.full)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
