"""Numpy implementations of the hot loops.

These define the reference semantics; ``_ckernels.pyx`` mirrors them
loop for loop.
"""

import numpy as np

REFINE_MARGIN = 1e-4


def beta_sq_batch(L, W):
    """Row-wise ``Q(L w) / Q(w)``; ``inf`` where ``Q(w) <= 0``."""
    L = np.asarray(L, dtype=float)
    W = np.atleast_2d(np.asarray(W, dtype=float))
    d = L.shape[0] // 2
    img = W @ L.T
    q0 = np.einsum("ni,ni->n", W[:, :d], W[:, d:])
    q1 = np.einsum("ni,ni->n", img[:, :d], img[:, d:])
    out = np.full(W.shape[0], np.inf)
    ok = q0 > 0.0
    out[ok] = q1[ok] / q0[ok]
    return out


def _beta_sq(L, w, d, margin=0.0):
    lw = L @ w
    q0 = float(w[:d] @ w[d:])
    if q0 <= margin * float(w @ w):
        return np.inf
    return float(lw[:d] @ lw[d:]) / q0


def refine(L, w0, steps, rel_step):
    """Coordinate descent on ``Q(L w)/Q(w)`` with additive steps.

    Moves that bring ``Q(w)`` below ``1e-4 |w|^2`` are rejected: near the
    boundary of the sector the ratio is dominated by rounding.

    The step starts at ``rel_step * max|w0_k|``. Each sweep visits the
    coordinates in order and tries ``+step`` then ``-step``, keeping the
    first move that lowers the objective; a sweep without improvement
    halves the step. Additive moves let a coordinate change sign, which
    pure rescaling cannot. Runs ``steps`` sweeps or until the step is
    negligible.

    Returns
    -------
    w : ndarray
    value : float
        The final ``Q(L w)/Q(w)``.
    """
    L = np.asarray(L, dtype=float)
    w = np.array(w0, dtype=float)
    n = w.size
    d = n // 2
    best = _beta_sq(L, w, d, REFINE_MARGIN)
    h = rel_step * float(np.max(np.abs(w)))
    floor = 1e-16 * float(np.max(np.abs(w)))
    for _ in range(steps):
        if h <= floor:
            break
        improved = False
        for k in range(n):
            old = w[k]
            for delta in (h, -h):
                w[k] = old + delta
                val = _beta_sq(L, w, d, REFINE_MARGIN)
                if val < best:
                    best = val
                    improved = True
                    break
                w[k] = old
        if not improved:
            h *= 0.5
    return w, best


def propagate(maps, w0):
    """Trajectory ``w_(k+1) = maps[k] @ w_k``; returns ``len(maps) + 1`` rows."""
    maps = np.asarray(maps, dtype=float)
    out = np.empty((maps.shape[0] + 1, maps.shape[1]))
    out[0] = w0
    for k in range(maps.shape[0]):
        out[k + 1] = maps[k] @ out[k]
    return out
