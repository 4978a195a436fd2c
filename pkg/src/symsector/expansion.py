"""Expansion of the quadratic form under monotone maps.

``beta(w, L) = sqrt(Q(Lw) / Q(w))`` on the interior of the standard
sector. Its infimum ``sigma(L)`` has the closed form
``sqrt(1 + t1) + sqrt(t1)``, where ``t1`` is the smallest eigenvalue of
``C^T B = P R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotInterior, NotMonotone, NotStrictlyMonotone
from .lagrangian import LagrangianSubspace, graph_distance, v1, v2, mobius, image_subspace
from .linalg import DEF_TOL, psd_sqrt, sym_eigh
from .monotone import MonotoneClass, canonical_form, factor_qpr, monotonicity_class
from .symplectic import BlockMap, as_map, q_standard, rotation, symplectic_inverse

ORACLE_EPS = 1e-3
ORACLE_CHUNK = 8192
REFINE_STEPS = 100
REFINE_STEP = 0.05


@dataclass(frozen=True)
class ExpansionResult:
    sigma: float
    t1: float
    witness: np.ndarray | None = None


def sigma_from_t1(t1: float) -> float:
    return math.sqrt(1.0 + t1) + math.sqrt(t1)


def _require_monotone(L: BlockMap, tol: float) -> MonotoneClass:
    cls = monotonicity_class(L, tol)
    if cls is MonotoneClass.NOT_MONOTONE:
        raise NotMonotone("map is not monotone")
    return cls


def beta(w, m, tol: float = DEF_TOL, check: bool = True) -> float:
    """Coefficient of expansion ``sqrt(Q(Lw)/Q(w))`` at an interior vector."""
    L = as_map(m)
    w = np.asarray(w, dtype=float)
    if q_standard(w) <= 0.0:
        raise NotInterior("w is not in the interior of the sector")
    if check:
        _require_monotone(L, tol)
    return math.sqrt(q_standard(L.full @ w) / q_standard(w))


def least_eigenvalue(m, tol: float = DEF_TOL) -> float:
    """Smallest eigenvalue of ``C^T B``, via the symmetric ``R^(1/2) P R^(1/2)``."""
    f = factor_qpr(m, tol)
    r_half = psd_sqrt(f.r, tol)
    lam, _ = sym_eigh(r_half @ f.p @ r_half)
    return float(lam[0])


def sigma(m, tol: float = DEF_TOL) -> ExpansionResult:
    """Least expansion coefficient of a monotone map.

    For strictly monotone maps a witness ``w`` with ``beta(w, L) = sigma``
    is built in canonical coordinates and pulled back to the input ones.
    Non-strict maps get ``t1 = 0``, ``sigma = 1`` and no witness.
    """
    L = as_map(m)
    cls = _require_monotone(L, tol)
    if cls is not MonotoneClass.STRICTLY_MONOTONE:
        return ExpansionResult(sigma=1.0, t1=0.0)
    cf = canonical_form(L, tol)
    t1 = float(cf.t[0])
    if t1 <= tol * (1.0 + abs(float(cf.t[-1]))):
        return ExpansionResult(sigma=1.0, t1=0.0)
    d = L.dim
    wc = np.zeros(2 * d)
    wc[0] = ((1.0 + t1) / t1) ** 0.25
    wc[d] = (t1 / (1.0 + t1)) ** 0.25
    return ExpansionResult(sigma=sigma_from_t1(t1), t1=t1, witness=cf.right_iso.full @ wc)


def complementary_conjugate(m) -> BlockMap:
    """``[[0, -I], [I, 0]] @ L^-1 @ [[0, I], [-I, 0]]``."""
    L = as_map(m)
    rot = rotation(L.dim).full
    return BlockMap(rot.T @ symplectic_inverse(L).full @ rot)


def sigma_complementary(m, tol: float = DEF_TOL) -> float:
    """``sigma`` of ``L^-1`` with respect to the complementary sector.

    Computed as the standard-sector ``sigma`` of the conjugated inverse; it
    agrees with ``sigma(L)``.
    """
    L = as_map(m)
    _require_monotone(L, tol)
    return sigma(complementary_conjugate(L), tol).sigma


def image_subspaces(m) -> tuple[LagrangianSubspace, LagrangianSubspace]:
    """``(L V1, L V2)``: graphs of ``C A^-1`` and ``D B^-1``."""
    L = as_map(m)
    return mobius(L, v1(L.dim)), image_subspace(L, v2(L.dim))


def image_distance(m, tol: float = DEF_TOL) -> float:
    """Distance of ``L V1`` and ``L V2``, ``ln((s^2 + 1)/(s^2 - 1))`` with ``s = sigma(L)``.

    Raises
    ------
    NotStrictlyMonotone
        When ``sigma(L) = 1`` (the images reach the boundary of the sector).
    """
    res = sigma(m, tol)
    if res.t1 <= 0.0:
        raise NotStrictlyMonotone("image distance is infinite for non-strict maps")
    s2 = res.sigma * res.sigma
    return math.log1p(2.0 / (s2 - 1.0))


def image_distance_direct(m) -> float:
    """Metric of :func:`~symsector.lagrangian.distance` evaluated on the image graphs."""
    e1, e2 = image_subspaces(m)
    return graph_distance(e1.graph(), e2.graph())


def _oracle_chunk(L: np.ndarray, d: int, count: int, rng: np.random.Generator) -> tuple[float, np.ndarray]:
    xi = rng.standard_normal((count, d))
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)
    g = rng.standard_normal((count, d, d))
    u = np.einsum("nki,nkj->nij", g, g) + ORACLE_EPS * np.eye(d)
    eta = np.einsum("nij,nj->ni", u, xi)
    w = np.hstack([xi, eta])
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    vals = kernels.beta_sq_batch(L, w)
    k = int(np.argmin(vals))
    return float(vals[k]), w[k]


def mc_inf_beta(
    m,
    samples: int = 100_000,
    seed: int = 0,
    refine_steps: int = REFINE_STEPS,
    tol: float = DEF_TOL,
) -> float:
    """Monte-Carlo estimate of ``inf beta(w, L)`` over the sector interior.

    Samples ``w = (xi, U xi)`` with ``xi`` uniform on the sphere and
    ``U = G^T G + 1e-3 I`` for Gaussian ``G``, then runs coordinate
    descent from the best sample with additive steps starting at 5% of
    its largest coordinate. Samples are
    drawn in fixed-size chunks with seeds spawned from ``seed``, so the
    result does not depend on how chunks are scheduled.

    The estimate is an upper bound on ``sigma(L)`` up to rounding.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    L = as_map(m)
    _require_monotone(L, tol)
    d = L.dim
    full = np.ascontiguousarray(L.full)
    n_chunks = -(-samples // ORACLE_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(n_chunks)
    best, best_w = np.inf, None
    for i, ss in enumerate(seeds):
        count = min(ORACLE_CHUNK, samples - i * ORACLE_CHUNK)
        val, w = _oracle_chunk(full, d, count, np.random.default_rng(ss))
        if val < best:
            best, best_w = val, w
    if refine_steps > 0:
        _, best = kernels.refine(full, best_w, refine_steps, REFINE_STEP)
    return math.sqrt(best)
