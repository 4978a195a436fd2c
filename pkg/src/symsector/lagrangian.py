"""Lagrangian subspaces inside a sector.

A subspace transversal to ``V2 = {0} x R^d`` is stored as the graph
``{(xi, U xi)}`` of a symmetric matrix ``U``; anything else keeps a
``2d x d`` basis. Subspaces strictly inside the standard sector are the
graphs of positive definite ``U`` and carry the order and metric of
symmetric matrices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    DistanceTooLarge,
    ImageNotGraph,
    NotInLagC,
    NotLagrangian,
    NotOrdered,
    NotTransversal,
)
from .linalg import (
    COND_MAX,
    DEF_TOL,
    SYM_TOL,
    DefClass,
    as_symmetric,
    classify_definiteness,
    cond,
    pd_inv_sqrt,
    psd_sqrt,
    sym_eigh,
)
from .monotone import q_isometry
from .symplectic import BlockMap, as_map, omega_matrix, q_standard

SAMPLE_COUNT = 10_000


@dataclass(frozen=True)
class LagrangianSubspace:
    """A Lagrangian subspace in graph form (``u``) or basis form (``b``).

    Use :func:`subspace_from_graph` or :meth:`from_basis` rather than the
    constructor. ``from_basis_form`` records that a basis was converted to
    a graph.
    """

    u: np.ndarray | None = None
    b: np.ndarray | None = None
    from_basis_form: bool = field(default=False, compare=False)

    @property
    def dim(self) -> int:
        return (self.u if self.u is not None else self.b.T).shape[0]

    @property
    def is_graph(self) -> bool:
        return self.u is not None

    def basis(self) -> np.ndarray:
        if self.u is not None:
            return np.vstack([np.eye(self.dim), self.u])
        return self.b

    def graph(self) -> np.ndarray:
        if self.u is None:
            raise ImageNotGraph("subspace is not transversal to V2")
        return self.u

    @classmethod
    def from_basis(cls, b, tol: float = SYM_TOL) -> "LagrangianSubspace":
        """Build from a ``2d x d`` basis, converting to a graph when possible.

        Raises
        ------
        NotLagrangian
            If the columns are rank deficient or ``omega`` does not vanish
            on them.
        """
        b = np.asarray(b, dtype=float)
        if b.ndim != 2 or b.shape[0] != 2 * b.shape[1]:
            raise DimensionMismatch(f"expected a 2d x d basis, got {b.shape}")
        d = b.shape[1]
        # normalize columns so the isotropy check is scale free
        norms = np.linalg.norm(b, axis=0)
        if np.any(norms == 0.0) or np.linalg.matrix_rank(b / norms) < d:
            raise NotLagrangian("basis is rank deficient")
        bn = b / norms
        gram = bn.T @ omega_matrix(d) @ bn
        if np.max(np.abs(gram)) > 1e-10 * (1.0 + cond(bn)):
            raise NotLagrangian("omega does not vanish on the basis")
        x, y = b[:d], b[d:]
        if cond(x) <= COND_MAX:
            u = np.linalg.solve(x.T, y.T).T
            return cls(u=0.5 * (u + u.T), from_basis_form=True)
        return cls(b=b.copy())

    def is_strictly_inside(self, tol: float = DEF_TOL) -> bool:
        return self.u is not None and classify_definiteness(self.u, tol).is_pd


def subspace_from_graph(u) -> LagrangianSubspace:
    """Graph ``{(xi, U xi)}`` of a symmetric matrix.

    Raises
    ------
    NonSymmetricInput
        If ``u`` is not symmetric (the graph would not be Lagrangian).
    """
    return LagrangianSubspace(u=as_symmetric(np.atleast_2d(u)))


def z_subspace(u: float, d: int = 1) -> LagrangianSubspace:
    """Graph of ``e^u I``."""
    return LagrangianSubspace(u=math.exp(u) * np.eye(d))


def v1(d: int) -> LagrangianSubspace:
    return LagrangianSubspace(u=np.zeros((d, d)))


def v2(d: int) -> LagrangianSubspace:
    return LagrangianSubspace(b=np.vstack([np.zeros((d, d)), np.eye(d)]))


def _pd_graph(e: LagrangianSubspace, tol: float) -> np.ndarray:
    if e.u is None or not classify_definiteness(e.u, tol).is_pd:
        raise NotInLagC("subspace is not strictly inside the standard sector")
    return e.u


# -- general sectors ---------------------------------------------------------


@dataclass(frozen=True)
class GeneralSector:
    """The sector ``C(E1, E2)`` of a transversal pair of Lagrangian subspaces.

    ``frame`` is a symplectic map sending ``V1`` onto ``E1`` and ``V2`` onto
    ``E2`` with ``Q_{E1,E2}(frame @ w) = <xi, eta>``.
    """

    e1: LagrangianSubspace
    e2: LagrangianSubspace
    condition: float
    frame: np.ndarray

    @classmethod
    def of(cls, e1: LagrangianSubspace, e2: LagrangianSubspace) -> "GeneralSector":
        b1, b2 = e1.basis(), e2.basis()
        if b1.shape != b2.shape:
            raise DimensionMismatch("subspaces live in different dimensions")
        stacked = np.hstack([b1, b2])
        c = cond(stacked)
        if c > COND_MAX:
            raise NotTransversal("E1 and E2 are not transversal")
        pairing = b1.T @ omega_matrix(b1.shape[1]) @ b2
        b2n = np.linalg.solve(pairing.T, b2.T).T
        return cls(e1, e2, c, np.hstack([b1, b2n]))


def general_sector_q(s: GeneralSector, w) -> float:
    """``omega(e1, e2)`` for the unique splitting ``w = e1 + e2``.

    Accepts one vector or a batch of rows.
    """
    w = np.asarray(w, dtype=float)
    b1 = s.e1.basis()
    d = b1.shape[1]
    coeffs = np.linalg.solve(np.hstack([b1, s.e2.basis()]), np.atleast_2d(w).T)
    part1 = (b1 @ coeffs[:d]).T
    part2 = (s.e2.basis() @ coeffs[d:]).T
    j = omega_matrix(d)
    q = np.einsum("ni,ij,nj->n", part1, j, part2)
    return float(q[0]) if w.ndim == 1 else q


def standard_sector_samples(d: int, n: int = SAMPLE_COUNT, seed: int = 0) -> np.ndarray:
    """Deterministic sample of the standard sector ``{<xi, eta> >= 0}``.

    Rows start with the ``4d`` boundary rays ``+-e_i`` (in ``V1`` and
    ``V2``), followed by Gaussian vectors reflected into the sector by
    flipping ``eta`` where needed.
    """
    eye = np.eye(2 * d)
    rays = np.vstack([eye, -eye])
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((max(n - rays.shape[0], 0), 2 * d))
    flip = q_standard(g) < 0
    g[flip, d:] *= -1.0
    return np.vstack([rays, g])[:n] if n >= rays.shape[0] else rays[:n]


def sector_samples(s: GeneralSector | None, d: int, n: int = SAMPLE_COUNT, seed: int = 0) -> np.ndarray:
    """Deterministic sample of ``C(E1, E2)`` (standard sector if ``s`` is None)."""
    std = standard_sector_samples(d, n, seed)
    return std if s is None else std @ s.frame.T


# -- order and metric --------------------------------------------------------


class Order(enum.Enum):
    LESS = "Less"
    LESS_OR_EQUAL = "LessOrEqual"
    EQUAL = "Equal"
    GREATER_OR_EQUAL = "GreaterOrEqual"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


def order_compare(ea: LagrangianSubspace, eb: LagrangianSubspace, tol: float = DEF_TOL) -> Order:
    """Compare two subspaces of ``Lag(C)`` by the definiteness of ``Ub - Ua``."""
    ua, ub = _pd_graph(ea, tol), _pd_graph(eb, tol)
    diff = classify_definiteness(ub - ua, tol)
    tau = tol * (1.0 + max(abs(diff.min_eig), abs(diff.max_eig)))
    if abs(diff.min_eig) <= tau and abs(diff.max_eig) <= tau:
        return Order.EQUAL
    return {
        DefClass.POSITIVE_DEFINITE: Order.LESS,
        DefClass.POSITIVE_SEMIDEFINITE: Order.LESS_OR_EQUAL,
        DefClass.NEGATIVE_DEFINITE: Order.GREATER,
        DefClass.NEGATIVE_SEMIDEFINITE: Order.GREATER_OR_EQUAL,
        DefClass.INDEFINITE: Order.INCOMPARABLE,
    }[diff.cls]


def _half_max_log_pencil(ua: np.ndarray, ub: np.ndarray) -> float:
    s = pd_inv_sqrt(ua)
    lam, _ = sym_eigh(s @ ub @ s)
    if lam[0] <= 0.0:
        raise NotInLagC("pencil has a nonpositive eigenvalue")
    return 0.5 * float(np.max(np.abs(np.log(lam))))


def graph_distance(ua, ub) -> float:
    """Metric on positive definite matrices, ``max_i |ln lambda_i| / 2``.

    ``lambda_i`` are the eigenvalues of ``Ua^(-1/2) Ub Ua^(-1/2)``. The value
    is symmetrized by evaluating both argument orders.
    """
    ua = np.atleast_2d(np.asarray(ua, dtype=float))
    ub = np.atleast_2d(np.asarray(ub, dtype=float))
    return max(_half_max_log_pencil(ua, ub), _half_max_log_pencil(ub, ua))


def distance(ea: LagrangianSubspace, eb: LagrangianSubspace, tol: float = DEF_TOL) -> float:
    """Distance of two subspaces strictly inside the standard sector."""
    return graph_distance(_pd_graph(ea, tol), _pd_graph(eb, tol))


# -- action of symplectic maps ----------------------------------------------


def mobius(m, e: LagrangianSubspace) -> LagrangianSubspace:
    """Image ``L E`` in graph form, ``U' = (C + D U)(A + B U)^-1``.

    Raises
    ------
    ImageNotGraph
        If the image is not transversal to ``V2``.
    """
    L = as_map(m)
    if e.u is not None:
        den = L.a + L.b @ e.u
        num = L.c + L.d @ e.u
    else:
        img = L.full @ e.b
        den, num = img[: L.dim], img[L.dim :]
    if cond(den) > COND_MAX:
        raise ImageNotGraph("image is not transversal to V2")
    u = np.linalg.solve(den.T, num.T).T
    return LagrangianSubspace(u=0.5 * (u + u.T))


def image_subspace(m, e: LagrangianSubspace) -> LagrangianSubspace:
    """Image ``L E`` in graph form when possible, basis form otherwise."""
    return LagrangianSubspace.from_basis(as_map(m).full @ e.basis())


# -- sector inclusion --------------------------------------------------------


@dataclass(frozen=True)
class InclusionReport:
    order_less: bool
    sector_in_c: bool
    e_between: bool
    e_in_sector: bool


def _in_cone(q, w, tol: float) -> np.ndarray:
    return q >= -tol * np.einsum("ni,ni->n", w, w)


def inclusion_predicates(
    e1: LagrangianSubspace,
    e2: LagrangianSubspace,
    e: LagrangianSubspace,
    n: int = SAMPLE_COUNT,
    seed: int = 0,
    tol: float = DEF_TOL,
) -> InclusionReport:
    """Order relations and sampled sector inclusions for a triple in ``Lag(C)``.

    ``sector_in_c`` tests ``C(e1, e2)`` against the standard sector on ``n``
    deterministic samples (boundary rays plus random interior);
    ``e_in_sector`` tests ``n`` vectors of ``e`` (its basis columns and
    random combinations) against ``C(e1, e2)``.
    """
    for x in (e1, e2, e):
        _pd_graph(x, tol)
    sector = GeneralSector.of(e1, e2)
    d = e1.dim

    cone = sector_samples(sector, d, n, seed)
    sector_in_c = bool(np.all(_in_cone(q_standard(cone), cone, tol)))

    rng = np.random.default_rng(seed + 1)
    coeffs = np.vstack([np.eye(d), rng.standard_normal((max(n - d, 0), d))])
    vecs = coeffs @ e.basis().T
    e_in_sector = bool(np.all(_in_cone(general_sector_q(sector, vecs), vecs, tol)))

    lo = order_compare(e1, e, tol)
    hi = order_compare(e, e2, tol)
    le = {Order.LESS, Order.LESS_OR_EQUAL, Order.EQUAL}
    return InclusionReport(
        order_less=order_compare(e1, e2, tol) is Order.LESS,
        sector_in_c=sector_in_c,
        e_between=lo in le and hi in le,
        e_in_sector=e_in_sector,
    )


# -- normalization to C_rho --------------------------------------------------


def rho_bound(rho: float) -> float:
    """``ln((1 + rho^2) / (1 - rho^2))``, the largest admissible distance."""
    return math.log((1.0 + rho * rho) / (1.0 - rho * rho))


def rho_change(rho: float, d: int) -> BlockMap:
    """The symplectic change taking ``C_(1/rho)`` onto the standard sector.

    ``xi' = (rho^-1/2 xi - rho^1/2 eta)/sqrt 2``,
    ``eta' = (rho^-1/2 xi + rho^1/2 eta)/sqrt 2``; it also takes ``C_rho``
    onto ``C(Z_-u, Z_u)`` with ``u = rho_bound(rho)``.
    """
    a = rho ** -0.5 / math.sqrt(2.0)
    b = rho ** 0.5 / math.sqrt(2.0)
    eye = np.eye(d)
    return BlockMap(np.block([[a * eye, -b * eye], [a * eye, b * eye]]))


def normalize_to_rho(
    e1: LagrangianSubspace, e2: LagrangianSubspace, rho: float, tol: float = DEF_TOL
) -> BlockMap:
    """Symplectic map taking ``C`` onto ``C_(1/rho)`` and ``C(e1, e2)`` into ``C_rho``.

    Built as ``rho_change(rho)^-1 @ G`` where the Q-isometry ``G`` sends
    ``e1`` to ``Z_(-u)``.

    Raises
    ------
    NotOrdered
        Unless ``e1 < e2``.
    DistanceTooLarge
        If ``distance(e1, e2) > ln((1 + rho^2)/(1 - rho^2))``.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if order_compare(e1, e2, tol) is not Order.LESS:
        raise NotOrdered("normalization needs e1 < e2")
    u = rho_bound(rho)
    dist = distance(e1, e2, tol)
    if dist > u * (1.0 + SYM_TOL):
        raise DistanceTooLarge(f"distance {dist:.6g} exceeds {u:.6g}")
    g = q_isometry(math.exp(u / 2.0) * psd_sqrt(e1.u, tol))
    inv_change = np.linalg.inv(rho_change(rho, e1.dim).full)
    return BlockMap(inv_change @ g.full)


def in_c_rho(w, rho: float, slack: float = 1e-9) -> np.ndarray:
    """Row-wise test ``||eta|| <= rho ||xi|| + slack * ||w||``."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    d = w.shape[1] // 2
    nxi = np.linalg.norm(w[:, :d], axis=1)
    neta = np.linalg.norm(w[:, d:], axis=1)
    return neta <= rho * nxi + slack * np.linalg.norm(w, axis=1)
