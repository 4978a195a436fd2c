"""Sequences of monotone maps and their products ``L^n = L_n ... L_1``.

Asymptotic statements are only ever reported as finite-horizon verdicts:
``CertifiedGrowth`` once an explicit threshold is crossed, ``NoVerdict``
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    BlockSingular,
    NoContraction,
    NotMonotoneElement,
    ProbeOnBoundary,
    SpecViolation,
)
from .expansion import sigma
from .lagrangian import (
    LagrangianSubspace,
    graph_distance,
    image_subspace,
    mobius,
    v1,
    v2,
)
from .linalg import DEF_TOL
from .monotone import MonotoneClass, core_map, factor_qpr, monotonicity_class
from .symplectic import BlockMap, as_map, q_standard, symplectic_inverse

GROWTH_THRESHOLD = 10.0
CONDITIONING_LIMIT = 1e8

CERTIFIED = "CertifiedGrowth"
NO_VERDICT = "NoVerdict"
VIOLATION = "Violation"


@dataclass
class MapSequence:
    maps: list[BlockMap]
    provenance: str = "Explicit"

    def __post_init__(self):
        self.maps = [as_map(m) for m in self.maps]

    def __len__(self):
        return len(self.maps)

    def validate(self, tol: float = DEF_TOL) -> None:
        """Raise :class:`NotMonotoneElement` for the first non-monotone map."""
        for i, m in enumerate(self.maps):
            if monotonicity_class(m, tol) is MonotoneClass.NOT_MONOTONE:
                raise NotMonotoneElement(i)

    @classmethod
    def constant(cls, m, n: int) -> "MapSequence":
        m = as_map(m)
        return cls([m] * n)


@dataclass
class StepRecord:
    n: int
    sigma: float
    t1: float
    diameter: float
    diameter_direct: float
    image_v1: LagrangianSubspace
    image_v2: LagrangianSubspace
    q: dict[str, float]
    cond_a: float


@dataclass
class SequenceReport:
    steps: list[StepRecord]
    growth_threshold: float
    strict_at_step: int | None = None
    certified_growth: bool = False
    limit_estimate: LagrangianSubspace | None = None
    limit_diameter_bound: float = math.inf
    conditioning_stop: int | None = None

    @property
    def verdict(self) -> str:
        return CERTIFIED if self.certified_growth else NO_VERDICT


def diameter_from_sigma(s: float) -> float:
    """``ln((s^2 + 1)/(s^2 - 1))``; ``inf`` at ``s = 1``."""
    if s <= 1.0:
        return math.inf
    return math.log1p(2.0 / (s * s - 1.0))


def _pullback_pair(product: BlockMap) -> tuple[np.ndarray, np.ndarray]:
    """Graphs of ``(L^n)^-1 V2`` and ``(L^n)^-1 V1``, the sides of the pulled-back complementary sector."""
    inv = symplectic_inverse(product)
    ea = image_subspace(inv, v2(product.dim))
    eb = image_subspace(inv, v1(product.dim))
    return ea.graph(), eb.graph()


def complementary_distance(ua, ub) -> float:
    """Metric of the complementary sector on negative definite graphs."""
    return graph_distance(-np.asarray(ua), -np.asarray(ub))


def _products(seq: MapSequence, n_max: int, prepend_strict: bool):
    maps = list(seq.maps[:n_max])
    product = None
    if prepend_strict and maps:
        product = core_map(np.ones(maps[0].dim))
    for n, m in enumerate(maps, start=1):
        product = m if product is None else BlockMap(m.full @ product.full)
        yield n, product


def analyze_sequence(
    seq: MapSequence,
    n_max: int,
    probes=(),
    growth_threshold: float = GROWTH_THRESHOLD,
    tol: float = DEF_TOL,
    prepend_strict: bool = False,
) -> SequenceReport:
    """Per-step diagnostics of the products ``L^n`` for ``n <= n_max``.

    Records ``sigma(L^n)``, the diameter of the nested pulled-back sectors
    (closed form and direct metric on ``L^n V1``, ``L^n V2``), the image
    subspaces and ``Q(L^n w)`` for every probe. Stops early, setting
    ``conditioning_stop``, once ``sigma(L^n)`` exceeds 1e8.

    With ``prepend_strict`` the products start from ``[[I, I], [I, 2I]]``,
    which is how sequences whose early products are not strictly monotone
    are certified.
    """
    seq.validate(tol)
    probes = [np.asarray(w, dtype=float) for w in probes]
    for k, w in enumerate(probes):
        if q_standard(w) < 0.0 or not np.any(w):
            raise ProbeOnBoundary(f"probe {k} is not a nonzero vector of the sector")
    report = SequenceReport(steps=[], growth_threshold=growth_threshold)
    last = None
    for n, product in _products(seq, n_max, prepend_strict):
        try:
            cond_a = factor_qpr(product, tol).cond_a
        except BlockSingular:
            report.conditioning_stop = n
            break
        res = sigma(product, tol)
        if res.sigma > CONDITIONING_LIMIT:
            report.conditioning_stop = n
            break
        img1 = mobius(product, v1(product.dim))
        img2 = image_subspace(product, v2(product.dim))
        diam = diameter_from_sigma(res.sigma) if res.t1 > 0.0 else math.inf
        direct = math.inf
        if res.t1 > 0.0 and img2.is_graph:
            direct = graph_distance(img1.graph(), img2.graph())
        report.steps.append(
            StepRecord(
                n=n,
                sigma=res.sigma,
                t1=res.t1,
                diameter=diam,
                diameter_direct=direct,
                image_v1=img1,
                image_v2=img2,
                q={f"probe_{k}": q_standard(product.full @ w) for k, w in enumerate(probes)},
                cond_a=cond_a,
            )
        )
        if report.strict_at_step is None and res.sigma > 1.0 + tol:
            report.strict_at_step = n
        last = product
    if report.steps:
        final = report.steps[-1]
        report.certified_growth = final.sigma >= growth_threshold
        report.limit_diameter_bound = final.diameter
        if final.t1 > 0.0:
            ua, ub = _pullback_pair(last)
            report.limit_estimate = LagrangianSubspace(u=0.5 * (ua + ub))
    return report


@dataclass
class LimitEstimate:
    estimate: LagrangianSubspace
    bound: float
    n: int
    history: list[tuple[int, np.ndarray, float]] = field(default_factory=list)
    conditioning_stop: int | None = None


def limit_subspace(
    seq: MapSequence, n_max: int, tol: float = DEF_TOL, prepend_strict: bool = False
) -> LimitEstimate:
    """Estimate the single subspace left in the nested pulled-back sectors.

    The sectors ``(L^n)^-1 C'`` are bounded by ``(L^n)^-1 V2`` and
    ``(L^n)^-1 V1``, both graphs of negative definite matrices. The
    estimate is the mean of the two graph matrices; it lies between them
    in the order, so it is within ``bound`` (the diameter at step ``n``) of
    the limit, measured in the complementary-sector metric.

    Raises
    ------
    NoContraction
        If ``sigma(L^n)`` never exceeds ``1 + tol``.
    """
    seq.validate(tol)
    history = []
    stop = None
    for n, product in _products(seq, n_max, prepend_strict):
        res = sigma(product, tol)
        if res.sigma > CONDITIONING_LIMIT:
            stop = n
            break
        if res.sigma <= 1.0 + tol:
            continue
        ua, ub = _pullback_pair(product)
        history.append((n, 0.5 * (ua + ub), diameter_from_sigma(res.sigma)))
    if not history:
        raise NoContraction("products never became strictly monotone")
    n, u, bound = history[-1]
    return LimitEstimate(
        estimate=LagrangianSubspace(u=u), bound=bound, n=n, history=history, conditioning_stop=stop
    )


# -- the nonexpanding example family -----------------------------------------


@dataclass
class Example69Spec:
    """Parameters of ``L_n = iso(A_n) @ lower(P_n) @ upper(R_n)``.

    Arrays are stacked along the first axis: ``a``, ``p``, ``r`` have shape
    ``(N, d, d)`` and ``tau`` has shape ``(N, 2)`` holding ``(tau_n, tau'_n)``.
    """

    a: np.ndarray
    p: np.ndarray
    tau: np.ndarray
    r: np.ndarray
    c_bound: float

    def __len__(self):
        return self.tau.shape[0]

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    @classmethod
    def build(cls, a, p, tau, r=None, c_bound=None, n: int | None = None) -> "Example69Spec":
        """Assemble a spec, broadcasting single matrices over the sequence.

        ``tau`` may be a list of pairs or of scalars (``tau' = tau``). When
        ``r`` is omitted each ``R_n`` is diagonal with entries spread evenly
        from ``tau_n`` to ``tau'_n``.
        """
        tau = np.asarray(tau, dtype=float)
        if tau.ndim == 1:
            tau = np.stack([tau, tau], axis=1)
        if n is None:
            n = tau.shape[0]
        tau = np.broadcast_to(tau, (n, 2)).copy()
        a = _stack(a, n)
        d = a.shape[1]
        p = _stack(p, n, d)
        if r is None:
            frac = np.linspace(0.0, 1.0, d) if d > 1 else np.zeros(1)
            diag = tau[:, :1] + (tau[:, 1:] - tau[:, :1]) * frac
            r = np.einsum("ni,ij->nij", diag, np.eye(d))
        else:
            r = _stack(r, n, d)
        if c_bound is None:
            with np.errstate(divide="ignore"):
                c_bound = float(np.max(tau[:, 1] / tau[:, 0]))
        return cls(a=a, p=p, tau=tau, r=r, c_bound=float(c_bound))

    def validate(self, tol: float = DEF_TOL) -> None:
        """Check the family's hypotheses, raising :class:`SpecViolation`."""
        n, d = len(self), self.dim
        for name, arr in (("A", self.a), ("P", self.p), ("R", self.r)):
            if arr.shape != (n, d, d):
                raise SpecViolation(f"{name} has shape {arr.shape}, expected {(n, d, d)}")
        lo, hi = self.tau[:, 0], self.tau[:, 1]
        if np.any(lo <= 0.0) or np.any(hi < lo):
            raise SpecViolation("need 0 < tau_n <= tau'_n")
        if np.any(hi / lo > self.c_bound * (1.0 + tol)):
            raise SpecViolation("tau'_n / tau_n exceeds the bound C")
        norms = np.linalg.norm(self.a, ord=2, axis=(1, 2))
        if np.any(norms > 1.0 + tol):
            raise SpecViolation(f"A_{int(np.argmax(norms)) + 1} is expanding")
        for name, arr in (("P", self.p), ("R", self.r)):
            if np.max(np.abs(arr - arr.transpose(0, 2, 1))) > tol * (1.0 + np.max(np.abs(arr))):
                raise SpecViolation(f"{name}_n must be symmetric")
        p_eig = np.linalg.eigvalsh(self.p)
        if np.any(p_eig[:, 0] < -tol * (1.0 + np.abs(p_eig).max(axis=1))):
            raise SpecViolation("P_n must be positive semidefinite")
        r_eig = np.linalg.eigvalsh(self.r)
        slack = tol * (1.0 + hi)
        if np.any(r_eig[:, 0] < lo - slack) or np.any(r_eig[:, -1] > hi + slack):
            raise SpecViolation("eigenvalues of R_n leave [tau_n, tau'_n]")

    def maps_array(self) -> np.ndarray:
        """All ``L_n`` stacked as an ``(N, 2d, 2d)`` array."""
        n, d = len(self), self.dim
        eye = np.broadcast_to(np.eye(d), (n, d, d))
        a_inv_t = np.linalg.inv(self.a).transpose(0, 2, 1)
        # iso(A) @ [[I, R], [P, I + P R]]
        pr = self.p @ self.r
        top = np.concatenate([self.a, self.a @ self.r], axis=2)
        bottom = np.concatenate([a_inv_t @ self.p, a_inv_t @ (eye + pr)], axis=2)
        return np.concatenate([top, bottom], axis=1)


def _stack(x, n: int, d: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 and d is not None:
        x = x * np.eye(d)
    if x.ndim == 2:
        x = np.broadcast_to(x, (n,) + x.shape)
    if x.ndim != 3 or x.shape[0] != n:
        raise SpecViolation(f"expected {n} matrices, got shape {x.shape}")
    return np.array(x)


def build_example69(spec: Example69Spec, tol: float = DEF_TOL) -> MapSequence:
    """Assemble the sequence ``L_n`` and check each map is monotone."""
    spec.validate(tol)
    seq = MapSequence([BlockMap(m) for m in spec.maps_array()], provenance="Example69")
    seq.validate(tol)
    return seq


@dataclass
class Criterion69Report:
    series_partial: float
    verdict: str
    q_trajectory: np.ndarray
    ratio_ok: np.ndarray
    nondecreasing: bool
    prefix_ratio_sum: float
    certified_at: int | None
    growth_threshold: float

    @property
    def ratio_bound_holds(self) -> bool:
        return bool(np.all(self.ratio_ok))


def prefix_ratio_sum(a) -> float:
    """``sum_{n>=1} a_n / sum_{i<n} a_i`` for positive ``a_0, a_1, ...``."""
    a = np.asarray(a, dtype=float)
    prefix = np.cumsum(a)[:-1]
    return float(np.sum(a[1:] / prefix))


def check_criterion69(
    spec: Example69Spec,
    horizon: int,
    probe,
    growth_threshold: float = GROWTH_THRESHOLD,
    tol: float = DEF_TOL,
) -> Criterion69Report:
    """Simulate ``w_(n+1) = L_n w_n`` and check the growth estimates along the way.

    Verifies that ``q_n = Q(w_n)`` never decreases and that every step obeys
    ``q_(n+1)/q_n >= 1 + tau_n |eta_n| / (|xi_1| + sum_(i<n) tau'_i |eta_i|)``
    (within 1e-8). The verdict is ``CertifiedGrowth`` when both hold and
    ``q_n / q_1`` reaches ``growth_threshold`` by the horizon, ``NoVerdict``
    when they hold without reaching it, and ``Violation`` otherwise.
    """
    if horizon > len(spec):
        raise SpecViolation(f"horizon {horizon} exceeds the {len(spec)} maps given")
    probe = np.asarray(probe, dtype=float)
    if q_standard(probe) <= 0.0:
        raise ProbeOnBoundary("probe must lie in the interior of the sector")
    spec.validate(tol)
    d = spec.dim
    traj = kernels.propagate(spec.maps_array()[:horizon], probe)
    q = q_standard(traj)
    nondecreasing = bool(np.all(q[1:] >= q[:-1] - tol * (1.0 + np.abs(q[:-1]))))

    eta_norm = np.linalg.norm(traj[:horizon, d:], axis=1)
    lo, hi = spec.tau[:horizon, 0], spec.tau[:horizon, 1]
    weighted = hi * eta_norm
    denom = np.linalg.norm(probe[:d]) + np.concatenate([[0.0], np.cumsum(weighted)[:-1]])
    rhs = 1.0 + lo * eta_norm / denom
    lhs = q[1:] / q[:-1]
    ratio_ok = lhs >= rhs - 1e-8

    growth = q / q[0]
    hit = np.nonzero(growth >= growth_threshold)[0]
    certified_at = int(hit[0]) + 1 if hit.size else None
    if not (nondecreasing and ratio_ok.all()):
        verdict = VIOLATION
    elif certified_at is not None:
        verdict = CERTIFIED
    else:
        verdict = NO_VERDICT
    return Criterion69Report(
        series_partial=float(np.sum(lo)),
        verdict=verdict,
        q_trajectory=q,
        ratio_ok=ratio_ok,
        nondecreasing=nondecreasing,
        prefix_ratio_sum=prefix_ratio_sum(np.concatenate([[np.linalg.norm(probe[:d])], weighted])),
        certified_at=certified_at,
        growth_threshold=growth_threshold,
    )
