# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels (see pykernels.py for semantics)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def count_windows(target_rows, context_cols, Py_ssize_t n_targets,
                  Py_ssize_t n_contexts, Py_ssize_t side_length,
                  Py_ssize_t gap):
    cdef cnp.int32_t[::1] trow = np.ascontiguousarray(target_rows, dtype=np.int32)
    cdef cnp.int32_t[::1] ccol = np.ascontiguousarray(context_cols, dtype=np.int32)
    counts_arr = np.zeros((n_targets, n_contexts), dtype=np.int64)
    positions_arr = np.zeros(n_targets, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    cdef cnp.int64_t[::1] positions = positions_arr
    cdef Py_ssize_t n = trow.shape[0]
    cdef Py_ssize_t p, off, q, lo, hi
    cdef cnp.int32_t t, c
    lo = gap + 1
    hi = gap + side_length
    with nogil:
        for p in range(n):
            t = trow[p]
            if t < 0:
                continue
            for off in range(lo, hi + 1):
                q = p - off
                if q >= 0:
                    positions[t] += 1
                    c = ccol[q]
                    if c >= 0:
                        counts[t, c] += 1
                q = p + off
                if q < n:
                    positions[t] += 1
                    c = ccol[q]
                    if c >= 0:
                        counts[t, c] += 1
    return counts_arr, positions_arr


cdef inline double _learning_rate(long long step, long long total_steps,
                                  double eta_initial, double eta_final) noexcept nogil:
    cdef double frac
    cdef long long t
    if total_steps <= 1:
        return eta_initial
    t = step
    if t > total_steps - 1:
        t = total_steps - 1
    frac = t / <double>(total_steps - 1)
    return eta_initial + (eta_final - eta_initial) * frac


def train_stream(cnp.float64_t[:, ::1] weights, indptr, indices, data,
                 double eta_initial, double eta_final, double loser_rate,
                 long long step_start, long long total_steps):
    cdef cnp.int64_t[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int32_t[::1] cols = np.ascontiguousarray(indices, dtype=np.int32)
    cdef cnp.float64_t[::1] vals = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t n = iptr.shape[0] - 1
    cdef Py_ssize_t K = weights.shape[0]
    cdef Py_ssize_t dim = weights.shape[1]
    winners_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] winners = winners_arr
    # Exact squared norms; an updated row's norm is recomputed after every
    # update, so no rounding drift accumulates across steps.
    sqnorms_arr = np.einsum("kd,kd->k", np.asarray(weights), np.asarray(weights))
    cdef cnp.float64_t[::1] sqnorms = np.ascontiguousarray(sqnorms_arr, dtype=np.float64)
    xbuf_arr = np.zeros(dim, dtype=np.float64)
    cdef cnp.float64_t[::1] xbuf = xbuf_arr
    cdef Py_ssize_t o, k, ii, d, win
    cdef double score, best, eta, rate, sn, xd
    with nogil:
        for o in range(n):
            for ii in range(iptr[o], iptr[o + 1]):
                xbuf[cols[ii]] = vals[ii]
            # winner: argmin ||w_k||^2 - 2 w_k.x (+ ||x||^2, constant in k)
            win = 0
            best = 0.0
            for k in range(K):
                score = sqnorms[k]
                for ii in range(iptr[o], iptr[o + 1]):
                    score -= 2.0 * weights[k, cols[ii]] * vals[ii]
                if k == 0 or score < best:
                    best = score
                    win = k
            eta = _learning_rate(step_start + o, total_steps,
                                 eta_initial, eta_final)
            if loser_rate > 0.0:
                for k in range(K):
                    rate = eta if k == win else loser_rate * eta
                    sn = 0.0
                    for d in range(dim):
                        xd = xbuf[d]
                        weights[k, d] = weights[k, d] + rate * (xd - weights[k, d])
                        sn += weights[k, d] * weights[k, d]
                    sqnorms[k] = sn
            else:
                sn = 0.0
                for d in range(dim):
                    xd = xbuf[d]
                    weights[win, d] = weights[win, d] + eta * (xd - weights[win, d])
                    sn += weights[win, d] * weights[win, d]
                sqnorms[win] = sn
            winners[o] = win
            for ii in range(iptr[o], iptr[o + 1]):
                xbuf[cols[ii]] = 0.0
    return winners_arr


def classify_stream(cnp.float64_t[:, ::1] weights, indptr, indices, data):
    cdef cnp.int64_t[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int32_t[::1] cols = np.ascontiguousarray(indices, dtype=np.int32)
    cdef cnp.float64_t[::1] vals = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t n = iptr.shape[0] - 1
    cdef Py_ssize_t K = weights.shape[0]
    winners_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] winners = winners_arr
    sqnorms_arr = np.einsum("kd,kd->k", np.asarray(weights), np.asarray(weights))
    cdef cnp.float64_t[::1] sqnorms = np.ascontiguousarray(sqnorms_arr, dtype=np.float64)
    cdef Py_ssize_t o, k, ii, win
    cdef double score, best
    with nogil:
        for o in range(n):
            win = 0
            best = 0.0
            for k in range(K):
                score = sqnorms[k]
                for ii in range(iptr[o], iptr[o + 1]):
                    score -= 2.0 * weights[k, cols[ii]] * vals[ii]
                if k == 0 or score < best:
                    best = score
                    win = k
            winners[o] = win
    return winners_arr
