"""Dissimilarity functions between context vectors.

Two metrics are offered: plain Euclidean distance and a Spearman rank
correlation dissimilarity (1 - rho).  Rank ties are resolved with average
ranks and rho is computed as the Pearson correlation of the ranks, which
stays exact for the zero-heavy vectors this package produces.
"""

from dataclasses import dataclass

import numpy as np

METRICS = ("euclidean", "spearman")


def _as_vector(u) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a 1-d vector")
    return arr


def euclidean(u, v) -> float:
    """sqrt of the summed squared component differences."""
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} != {v.shape[0]}")
    if u.shape[0] < 1:
        raise ValueError("vectors must have dimension >= 1")
    return float(np.sqrt(((u - v) ** 2).sum()))


def average_ranks(u) -> np.ndarray:
    """1-based ranks with tied values sharing the average of their ranks."""
    u = _as_vector(u)
    order = np.argsort(u, kind="stable")
    sorted_u = u[order]
    new_run = np.r_[True, sorted_u[1:] != sorted_u[:-1]]
    run_start = np.flatnonzero(new_run)
    run_end = np.r_[run_start[1:], len(u)]
    run_rank = (run_start + run_end + 1) / 2.0
    ranks = np.empty(len(u))
    ranks[order] = run_rank[np.cumsum(new_run) - 1]
    return ranks


def spearman_rho(u, v) -> float:
    """Spearman rank correlation with average-rank tie handling.

    Raises ``ValueError`` for vectors of dimension < 2 or with no two
    distinct values (rank variance zero).
    """
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} != {v.shape[0]}")
    if u.shape[0] < 2:
        raise ValueError("vectors must have dimension >= 2")
    ru = average_ranks(u) - (u.shape[0] + 1) / 2.0
    rv = average_ranks(v) - (v.shape[0] + 1) / 2.0
    nu = float(ru @ ru)
    nv = float(rv @ rv)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("constant vector has zero rank variance")
    return float(ru @ rv) / np.sqrt(nu * nv)


def spearman_distance(u, v) -> float:
    """1 - spearman_rho, a dissimilarity in [0, 2]."""
    return 1.0 - spearman_rho(u, v)


@dataclass
class DistanceMatrix:
    """Symmetric dissimilarities over an ordered label list."""

    labels: list[str]
    values: np.ndarray

    def __post_init__(self):
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise ValueError("matrix shape does not match labels")

    def save_tsv(self, path) -> None:
        """Square TSV: header row and leading column carry the labels,
        values at 17 significant digits."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\t" + "\t".join(self.labels) + "\n")
            for label, row in zip(self.labels, self.values):
                cells = "\t".join(f"{x:.17g}" for x in row)
                fh.write(f"{label}\t{cells}\n")


def _pairwise_euclidean(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        d = np.sqrt(((rows[i + 1:] - rows[i]) ** 2).sum(axis=1))
        out[i, i + 1:] = d
        out[i + 1:, i] = d
    return out


def _pairwise_spearman(rows: np.ndarray) -> np.ndarray:
    m = rows.shape[1]
    ranks = np.empty_like(rows)
    for i, row in enumerate(rows):
        ranks[i] = average_ranks(row)
    ranks -= (m + 1) / 2.0
    norms = np.sqrt((ranks ** 2).sum(axis=1))
    if (norms == 0.0).any():
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise ValueError(f"constant vector at row {bad} has zero rank variance")
    rho = (ranks @ ranks.T) / np.outer(norms, norms)
    dist = 1.0 - rho
    dist = np.triu(dist, 1)
    return dist + dist.T


def pairwise(vectors, metric: str = "euclidean") -> DistanceMatrix:
    """Full symmetric distance matrix over the unflagged targets of a
    :class:`~wordgroups.cooccur.ContextVectorSet` (or any ``(rows, labels)``
    pair via keyword-free duck typing).

    Raises ``ValueError`` when fewer than two usable rows remain.
    """
    if hasattr(vectors, "rows"):
        keep = ~vectors.flagged
        rows = np.asarray(vectors.rows, dtype=np.float64)[keep]
        labels = [t for t, ok in zip(vectors.targets, keep) if ok]
    else:
        rows = np.asarray(vectors, dtype=np.float64)
        labels = [str(i) for i in range(rows.shape[0])]
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise ValueError("need at least 2 usable rows")
    if metric == "euclidean":
        values = _pairwise_euclidean(rows)
    elif metric == "spearman":
        values = _pairwise_spearman(rows)
    else:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    return DistanceMatrix(labels, values)
