# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counterparts of ``_pykernels``; same signatures and semantics."""

import numpy as np
from libc.math cimport INFINITY, fabs


cdef double REFINE_MARGIN = 1e-4


cdef double _beta_sq(const double[:, ::1] L, double[::1] w, double[::1] lw, Py_ssize_t d, double margin) noexcept nogil:
    cdef Py_ssize_t n = 2 * d, i, j
    cdef double q0 = 0.0, q1 = 0.0, acc, nrm = 0.0
    for i in range(d):
        q0 += w[i] * w[d + i]
    if margin > 0.0:
        for i in range(n):
            nrm += w[i] * w[i]
    if q0 <= margin * nrm:
        return INFINITY
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += L[i, j] * w[j]
        lw[i] = acc
    for i in range(d):
        q1 += lw[i] * lw[d + i]
    return q1 / q0


def beta_sq_batch(L, W):
    cdef const double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[:, ::1] Wv = np.array(np.atleast_2d(W), dtype=np.float64, order="C")
    cdef Py_ssize_t m = Wv.shape[0], n = Lv.shape[0], d = n // 2, k
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef double[::1] lw = np.empty(n)
    with nogil:
        for k in range(m):
            ov[k] = _beta_sq(Lv, Wv[k], lw, d, 0.0)
    return out


def refine(L, w0, int steps, double rel_step):
    cdef const double[:, ::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    w = np.array(w0, dtype=np.float64)
    cdef double[::1] wv = w
    cdef Py_ssize_t n = wv.shape[0], d = n // 2, k, s, t
    cdef double[::1] lw = np.empty(n)
    cdef double best, val, old, scale = 0.0, h, floor
    cdef double deltas[2]
    cdef bint improved
    with nogil:
        for k in range(n):
            if fabs(wv[k]) > scale:
                scale = fabs(wv[k])
        h = rel_step * scale
        floor = 1e-16 * scale
        best = _beta_sq(Lv, wv, lw, d, REFINE_MARGIN)
        for s in range(steps):
            if h <= floor:
                break
            improved = False
            deltas[0] = h
            deltas[1] = -h
            for k in range(n):
                old = wv[k]
                for t in range(2):
                    wv[k] = old + deltas[t]
                    val = _beta_sq(Lv, wv, lw, d, REFINE_MARGIN)
                    if val < best:
                        best = val
                        improved = True
                        break
                    wv[k] = old
            if not improved:
                h *= 0.5
    return w, best


def propagate(maps, w0):
    cdef const double[:, :, ::1] M = np.ascontiguousarray(maps, dtype=np.float64)
    cdef Py_ssize_t N = M.shape[0], n = M.shape[1], k, i, j
    out = np.empty((N + 1, n))
    cdef double[:, ::1] o = out
    cdef double acc
    cdef const double[::1] w = np.ascontiguousarray(w0, dtype=np.float64)
    for i in range(n):
        o[0, i] = w[i]
    with nogil:
        for k in range(N):
            for i in range(n):
                acc = 0.0
                for j in range(n):
                    acc += M[k, i, j] * o[k, j]
                o[k + 1, i] = acc
    return out
