"""Moving-window co-occurrence counts and context-probability vectors.

Each target word is represented by a vector whose component for context
word ``j`` is the probability that a window position around an occurrence
of the target is occupied by ``j``.  The window covers ``side_length``
positions on each side of the target, optionally skipping ``gap`` positions
immediately adjacent to it; positions before and after the target are
pooled, so no ordering information is kept.
"""

from dataclasses import dataclass, field

import numpy as np

from wordgroups import _kernels


@dataclass(frozen=True)
class WindowConfig:
    """Window geometry: context offsets are ``gap+1 .. gap+side_length``
    on each side of the target."""

    side_length: int = 1
    gap: int = 0

    def __post_init__(self):
        if self.side_length < 1:
            raise ValueError("side_length must be >= 1")
        if self.gap < 0:
            raise ValueError("gap must be >= 0")

    @property
    def offsets(self) -> range:
        return range(self.gap + 1, self.gap + self.side_length + 1)


@dataclass
class CooccurrenceTable:
    """Raw window counts for an ordered target set against an ordered
    context set.

    ``counts[i, j]`` is the number of window positions of target ``i``
    occupied by context word ``j``; ``positions[i]`` is the total number of
    in-corpus window positions over all occurrences of target ``i``
    (boundary-truncated windows contribute fewer positions).
    """

    targets: list[str]
    contexts: list[str]
    counts: np.ndarray
    positions: np.ndarray
    config: WindowConfig = field(default_factory=WindowConfig)

    def save_tsv(self, path) -> None:
        """Write per-target position totals followed by the nonzero count
        triplets, both sorted lexicographically."""
        t_order = sorted(range(len(self.targets)), key=self.targets.__getitem__)
        c_order = sorted(range(len(self.contexts)), key=self.contexts.__getitem__)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i in t_order:
                fh.write(f"#positions\t{self.targets[i]}\t{self.positions[i]}\n")
            for i in t_order:
                row = self.counts[i]
                for j in c_order:
                    if row[j]:
                        fh.write(f"{self.targets[i]}\t{self.contexts[j]}\t{row[j]}\n")


@dataclass
class ContextVectorSet:
    """Per-target context-probability rows; ``rows[i, j] = counts / positions``.

    Targets that never had an in-corpus window position get an all-zero row
    and are flagged so downstream consumers can skip them.
    """

    targets: list[str]
    contexts: list[str]
    rows: np.ndarray
    positions: np.ndarray

    @property
    def flagged(self) -> np.ndarray:
        """Boolean mask of targets with no valid window positions."""
        return self.positions == 0

    def save_tsv(self, path) -> None:
        """Write nonzero ``target<TAB>context<TAB>probability`` triplets,
        sorted lexicographically, at 17 significant digits."""
        t_order = sorted(range(len(self.targets)), key=self.targets.__getitem__)
        c_order = sorted(range(len(self.contexts)), key=self.contexts.__getitem__)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i in t_order:
                row = self.rows[i]
                for j in c_order:
                    if row[j] != 0.0:
                        fh.write(f"{self.targets[i]}\t{self.contexts[j]}"
                                 f"\t{row[j]:.17g}\n")


def _word_index_array(tokens, words) -> np.ndarray:
    index = {w: i for i, w in enumerate(words)}
    if len(index) != len(words):
        raise ValueError("word set contains duplicates")
    arr = np.fromiter((index.get(t, -1) for t in tokens), dtype=np.int32,
                      count=len(tokens))
    return arr


def count(tokens, targets, contexts, config: WindowConfig = WindowConfig()) -> CooccurrenceTable:
    """Slide the window over ``tokens`` and count context occupancy.

    ``targets`` and ``contexts`` are ordered word lists; rows/columns of the
    result follow their order.  An empty token stream yields an all-zero
    table.
    """
    tokens = list(tokens)
    target_rows = _word_index_array(tokens, targets)
    context_cols = _word_index_array(tokens, contexts)
    counts, positions = _kernels.count_windows(
        target_rows, context_cols, len(targets), len(contexts),
        config.side_length, config.gap)
    return CooccurrenceTable(list(targets), list(contexts), counts,
                             positions, config)


def to_vectors(table: CooccurrenceTable) -> ContextVectorSet:
    """Normalize counts to probabilities; zero-position targets yield
    all-zero rows (flagged, not an error)."""
    positions = table.positions.astype(np.float64)
    safe = np.where(positions == 0, 1.0, positions)
    rows = table.counts / safe[:, None]
    return ContextVectorSet(list(table.targets), list(table.contexts),
                            rows, table.positions.copy())
