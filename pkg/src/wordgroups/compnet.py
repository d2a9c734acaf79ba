"""Online leaky competitive network over per-occurrence inputs.

Every occurrence of a target word is encoded as a one-hot word block
concatenated with an L1-normalized bag of the context words inside its
window, so the same word can land in different clusters depending on
context.  Training is strictly sequential: the unit closest to the input
(Euclidean distance, ties to the lowest unit id) moves toward it by a
learning rate that decays linearly over the scheduled number of steps,
while the losing units move by the same rate scaled down by
``loser_rate`` (leaky learning; ``loser_rate=0`` recovers pure
winner-take-all).  The leak keeps units from locking onto single inputs
early, which plain winner-take-all is prone to do at high learning rates.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from wordgroups import _kernels
from wordgroups.cooccur import WindowConfig


@dataclass(frozen=True)
class NetworkConfig:
    num_units: int
    learning_rate_initial: float = 0.3
    learning_rate_final: float = 0.01
    loser_rate: float = 0.1
    epochs: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.num_units < 2:
            raise ValueError("num_units must be >= 2")
        if not 0.0 < self.learning_rate_initial <= 1.0:
            raise ValueError("learning_rate_initial must be in (0, 1]")
        if not 0.0 <= self.learning_rate_final <= self.learning_rate_initial:
            raise ValueError("learning_rate_final must be in [0, initial]")
        if not 0.0 <= self.loser_rate < 1.0:
            raise ValueError("loser_rate must be in [0, 1)")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass
class OccurrenceBatch:
    """Sparse (CSR-style) per-occurrence input vectors, in corpus order.

    Occurrence ``o`` occupies ``indices[indptr[o]:indptr[o+1]]`` with values
    ``data[...]``; ``positions[o]`` is its corpus position and ``words[o]``
    its surface form.
    """

    dim: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    positions: np.ndarray
    words: list[str]

    def __len__(self):
        return len(self.indptr) - 1

    def dense_row(self, o: int) -> np.ndarray:
        x = np.zeros(self.dim)
        lo, hi = self.indptr[o], self.indptr[o + 1]
        x[self.indices[lo:hi]] = self.data[lo:hi]
        return x

    def dense(self) -> np.ndarray:
        out = np.zeros((len(self), self.dim))
        for o in range(len(self)):
            lo, hi = self.indptr[o], self.indptr[o + 1]
            out[o, self.indices[lo:hi]] = self.data[lo:hi]
        return out


def encode_occurrences(tokens, targets, contexts,
                       config: WindowConfig = WindowConfig()) -> OccurrenceBatch:
    """Encode every occurrence of a target word as word-one-hot + context bag.

    The context block counts context-set words at the window offsets of
    ``config`` and is normalized to sum to 1 (all-zero when no context word
    is in range).
    """
    tokens = list(tokens)
    target_idx = {w: i for i, w in enumerate(targets)}
    context_idx = {w: i for i, w in enumerate(contexts)}
    if len(target_idx) != len(targets) or len(context_idx) != len(contexts):
        raise ValueError("word set contains duplicates")
    n_targets = len(targets)
    dim = n_targets + len(contexts)
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    positions = []
    words = []
    n = len(tokens)
    for p, token in enumerate(tokens):
        t = target_idx.get(token)
        if t is None:
            continue
        bag: dict[int, int] = {}
        hits = 0
        for off in config.offsets:
            for q in (p - off, p + off):
                if 0 <= q < n:
                    c = context_idx.get(tokens[q])
                    if c is not None:
                        bag[c] = bag.get(c, 0) + 1
                        hits += 1
        indices.append(t)
        data.append(1.0)
        for c in sorted(bag):
            indices.append(n_targets + c)
            data.append(bag[c] / hits)
        indptr.append(len(indices))
        positions.append(p)
        words.append(token)
    return OccurrenceBatch(
        dim=dim,
        indptr=np.asarray(indptr, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int32),
        data=np.asarray(data, dtype=np.float64),
        positions=np.asarray(positions, dtype=np.int64),
        words=words,
    )


@dataclass
class CompetitiveNetwork:
    config: NetworkConfig
    weights: np.ndarray
    step: int = 0
    total_steps: int | None = None

    @property
    def num_units(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def learning_rate(self, step: int | None = None) -> float:
        """Rate for the given (default: current) global step: linear decay
        from the initial to the final rate across ``total_steps``; constant
        at the initial rate while no schedule is set, and clamped at the
        final rate beyond the schedule."""
        t = self.step if step is None else step
        total = self.total_steps or 0
        initial = self.config.learning_rate_initial
        final = self.config.learning_rate_final
        if total <= 1:
            return initial
        frac = min(t, total - 1) / (total - 1)
        return initial + (final - initial) * frac


def _sample_matrix(samples) -> np.ndarray:
    if isinstance(samples, OccurrenceBatch):
        return samples.dense()
    return np.asarray(samples, dtype=np.float64)


def init(config: NetworkConfig, input_dim: int, samples) -> CompetitiveNetwork:
    """Seeded initialization: each unit starts at a distinct randomly chosen
    sample input.  Raises ``ValueError`` with fewer samples than units."""
    mat = _sample_matrix(samples)
    if mat.ndim != 2 or mat.shape[1] != input_dim:
        raise ValueError(f"samples must be (n, {input_dim})")
    if mat.shape[0] < config.num_units:
        raise ValueError(f"need at least {config.num_units} samples, "
                         f"got {mat.shape[0]}")
    rng = np.random.default_rng(config.seed)
    chosen = rng.choice(mat.shape[0], size=config.num_units, replace=False)
    weights = mat[chosen].astype(np.float64).copy()
    return CompetitiveNetwork(config=config, weights=weights)


def winner(net: CompetitiveNetwork, x) -> int:
    """Unit id at minimum Euclidean distance from ``x`` (ties -> lowest id)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.dim,):
        raise ValueError(f"input dimension {x.shape} != ({net.dim},)")
    return int(np.argmin(((net.weights - x) ** 2).sum(axis=1)))


def train_step(net: CompetitiveNetwork, x) -> int:
    """One online update: the winning unit moves toward ``x`` by the current
    learning rate, losing units by ``loser_rate`` times that."""
    x = np.asarray(x, dtype=np.float64)
    k = winner(net, x)
    eta = net.learning_rate()
    leak = net.config.loser_rate
    if leak > 0.0:
        rates = np.full(net.num_units, leak * eta)
        rates[k] = eta
        net.weights += rates[:, None] * (x - net.weights)
    else:
        net.weights[k] += eta * (x - net.weights[k])
    net.step += 1
    return k


@dataclass
class TrainingLog:
    """Per-epoch winner histograms and weight snapshots."""

    winner_counts: np.ndarray            # (epochs, K) int64
    snapshots: list[np.ndarray] = field(default_factory=list)

    def save_tsv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for epoch, row in enumerate(self.winner_counts):
                for unit, count in enumerate(row):
                    fh.write(f"{epoch}\t{unit}\t{count}\n")


def train(net: CompetitiveNetwork, batch: OccurrenceBatch,
          epochs: int | None = None) -> TrainingLog:
    """Run ``epochs`` sequential passes over the occurrence stream.

    The learning-rate schedule is fixed by the first call (epochs x stream
    length); training past it continues at the final rate.  Raises
    ``ValueError`` on an empty stream.
    """
    if epochs is None:
        epochs = net.config.epochs
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if len(batch) == 0:
        raise ValueError("cannot train on an empty occurrence stream")
    if batch.dim != net.dim:
        raise ValueError(f"input dimension {batch.dim} != {net.dim}")
    if net.total_steps is None:
        net.total_steps = epochs * len(batch)
    counts = np.zeros((epochs, net.num_units), dtype=np.int64)
    snapshots = []
    for epoch in range(epochs):
        winners = _kernels.train_stream(
            net.weights, batch.indptr, batch.indices, batch.data,
            net.config.learning_rate_initial, net.config.learning_rate_final,
            net.config.loser_rate, net.step, net.total_steps or 0)
        net.step += len(batch)
        counts[epoch] = np.bincount(winners, minlength=net.num_units)
        snapshots.append(net.weights.copy())
    return TrainingLog(counts, snapshots)


def classify(net: CompetitiveNetwork, batch: OccurrenceBatch) -> np.ndarray:
    """Winner per occurrence, without weight updates (empty in, empty out)."""
    if batch.dim != net.dim:
        raise ValueError(f"input dimension {batch.dim} != {net.dim}")
    return _kernels.classify_stream(net.weights, batch.indptr, batch.indices,
                                    batch.data)


def save_snapshot(net: CompetitiveNetwork, path) -> None:
    """Write the weight state as JSON with 17-significant-digit reals."""
    rows = []
    for row in net.weights:
        rows.append("[" + ", ".join(f"{x:.17g}" for x in row) + "]")
    text = (
        "{\n"
        f'  "dims": {net.dim},\n'
        f'  "K": {net.num_units},\n'
        f'  "seed": {net.config.seed},\n'
        f'  "step": {net.step},\n'
        '  "weights": [\n    '
        + ",\n    ".join(rows)
        + "\n  ]\n}\n"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_snapshot(path, config: NetworkConfig | None = None) -> CompetitiveNetwork:
    """Rebuild a network from :func:`save_snapshot` output.

    The snapshot stores no learning-rate schedule, so the returned network
    is ready for classification; pass ``config`` to resume training.
    """
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    weights = np.asarray(doc["weights"], dtype=np.float64)
    if weights.shape != (doc["K"], doc["dims"]):
        raise ValueError("snapshot weight shape does not match dims/K")
    if config is None:
        config = NetworkConfig(num_units=int(doc["K"]), seed=int(doc["seed"]))
    return CompetitiveNetwork(config=config, weights=weights,
                              step=int(doc["step"]))
