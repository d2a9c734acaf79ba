"""Numpy implementations of the hot kernels.

These are the reference implementations and the fallback used when the
compiled extension (``wordgroups._kernels._speedups``) is unavailable.
Both backends take the same arguments and return the same values; the
counting kernel is exact in integers, so its results are identical across
backends.
"""

import numpy as np


def count_windows(target_rows, context_cols, n_targets, n_contexts,
                  side_length, gap):
    """Accumulate moving-window co-occurrence counts.

    ``target_rows[p]`` is the target row index of the word at corpus
    position ``p`` (or -1 if it is not a target); ``context_cols[p]`` is
    its context column index (or -1).  For every target occurrence, every
    in-corpus position at offset ``gap < |k| <= gap + side_length`` counts
    toward ``positions``, and toward ``counts[row, col]`` when the word
    there is a context word.

    Returns ``(counts, positions)`` as int64 arrays of shapes
    ``(n_targets, n_contexts)`` and ``(n_targets,)``.
    """
    target_rows = np.ascontiguousarray(target_rows, dtype=np.int32)
    context_cols = np.ascontiguousarray(context_cols, dtype=np.int32)
    n = target_rows.shape[0]
    counts = np.zeros((n_targets, n_contexts), dtype=np.int64)
    positions = np.zeros(n_targets, dtype=np.int64)
    flat = counts.reshape(-1)
    for off in range(gap + 1, gap + side_length + 1):
        if off >= n:
            break
        # neighbour at p+off (and, symmetrically, p-off seen from the right)
        for t, c in ((target_rows[:n - off], context_cols[off:]),
                     (target_rows[off:], context_cols[:n - off])):
            mask = t >= 0
            if not mask.any():
                continue
            positions += np.bincount(t[mask], minlength=n_targets)
            both = mask & (c >= 0)
            if both.any():
                idx = t[both].astype(np.int64) * n_contexts + c[both]
                flat += np.bincount(idx, minlength=n_targets * n_contexts)
    return counts, positions


def _learning_rate(step, total_steps, eta_initial, eta_final):
    if total_steps is None or total_steps <= 1:
        return eta_initial
    frac = min(step, total_steps - 1) / (total_steps - 1)
    return eta_initial + (eta_final - eta_initial) * frac


def train_stream(weights, indptr, indices, data, eta_initial, eta_final,
                 loser_rate, step_start, total_steps):
    """One pass of online leaky competitive training over a sparse stream.

    ``weights`` (K, dim) is updated in place; occurrence ``o`` occupies
    ``indices[indptr[o]:indptr[o+1]]`` / ``data[...]``.  The winner is the
    unit at minimum Euclidean distance (ties to the lowest unit id); it
    moves by ``w += eta * (x - w)`` and the losing units by ``loser_rate``
    times that, with ``eta`` decaying linearly from ``eta_initial`` to
    ``eta_final`` across ``total_steps`` global steps.  Returns the
    per-occurrence winner ids (int32).
    """
    n = len(indptr) - 1
    num_units, dim = weights.shape
    winners = np.empty(n, dtype=np.int32)
    x = np.zeros(dim)
    for o in range(n):
        lo, hi = indptr[o], indptr[o + 1]
        cols = indices[lo:hi]
        x[cols] = data[lo:hi]
        k = int(np.argmin(((weights - x) ** 2).sum(axis=1)))
        eta = _learning_rate(step_start + o, total_steps,
                             eta_initial, eta_final)
        if loser_rate > 0.0:
            rates = np.full(num_units, loser_rate * eta)
            rates[k] = eta
            weights += rates[:, None] * (x - weights)
        else:
            weights[k] += eta * (x - weights[k])
        winners[o] = k
        x[cols] = 0.0
    return winners


def classify_stream(weights, indptr, indices, data):
    """Winner ids for every occurrence in the stream; no weight updates."""
    n = len(indptr) - 1
    dim = weights.shape[1]
    winners = np.empty(n, dtype=np.int32)
    x = np.zeros(dim)
    for o in range(n):
        lo, hi = indptr[o], indptr[o + 1]
        cols = indices[lo:hi]
        x[cols] = data[lo:hi]
        winners[o] = int(np.argmin(((weights - x) ** 2).sum(axis=1)))
        x[cols] = 0.0
    return winners
