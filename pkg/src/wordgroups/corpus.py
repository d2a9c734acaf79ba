"""Corpus ingestion: tokenization, vocabulary building, frequent-word selection.

Tokens are lowercase runs of letters and digits, with apostrophes kept when
they sit inside a run ("o'clock" is one token, "'tis" becomes "tis").
Everything else is a separator, so the corpus becomes a single flat token
stream with no sentence structure.
"""

import re
from collections import Counter

# A run of word characters (letters/digits, underscore excluded) and
# apostrophes; leading/trailing apostrophes are stripped afterwards.
_RUN_RE = re.compile(r"(?:[^\W_]|')+")


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercase tokens.

    Every maximal run of letters, digits and apostrophes becomes one token;
    apostrophes at either end of a run are stripped and runs that were only
    apostrophes are dropped.
    """
    out = []
    for match in _RUN_RE.finditer(text.lower()):
        token = match.group().strip("'")
        if token:
            out.append(token)
    return out


def tokenize_file(path) -> list[str]:
    """Tokenize a UTF-8 text file, skipping undecodable byte sequences."""
    tokens = []
    with open(path, encoding="utf-8", errors="ignore") as fh:
        for line in fh:
            tokens.extend(tokenize(line))
    return tokens


class Vocabulary:
    """Word <-> dense-id map with frequency counts.

    Entries are ordered by descending count, ties broken by ascending word,
    and ids are assigned densely in that order (id 0 = most frequent word).
    """

    def __init__(self, words: list[str], counts: list[int]):
        if len(words) != len(counts):
            raise ValueError("words and counts must have equal length")
        if any(c <= 0 for c in counts):
            raise ValueError("all counts must be positive")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in vocabulary")
        order = sorted(range(len(words)), key=lambda i: (-counts[i], words[i]))
        self.words = [words[i] for i in order]
        self.counts = [counts[i] for i in order]
        self._index = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def __iter__(self):
        """Yield ``(word, id, count)`` entries in vocabulary order."""
        for i, (word, count) in enumerate(zip(self.words, self.counts)):
            yield word, i, count

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.words == other.words and self.counts == other.counts

    def id_of(self, word: str) -> int:
        return self._index[word]

    def count_of(self, word: str) -> int:
        return self.counts[self._index[word]]

    @property
    def total(self) -> int:
        """Total number of corpus tokens the vocabulary was built from."""
        return sum(self.counts)

    def top(self, n: int) -> list[str]:
        if n < 1:
            raise ValueError("n must be >= 1")
        return self.words[:n]

    def save_tsv(self, path) -> None:
        """Write ``word<TAB>count`` lines in vocabulary order (LF endings)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word, count in zip(self.words, self.counts):
                fh.write(f"{word}\t{count}\n")

    @classmethod
    def load_tsv(cls, path) -> "Vocabulary":
        words, counts = [], []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                word, count = line.rstrip("\n").split("\t")
                words.append(word)
                counts.append(int(count))
        return cls(words, counts)


def build_vocabulary(tokens) -> Vocabulary:
    """Count distinct tokens and return the ordered :class:`Vocabulary`."""
    counter = Counter(tokens)
    return Vocabulary(list(counter.keys()), list(counter.values()))


def select_top(vocab: Vocabulary, n: int) -> list[str]:
    """The ``min(n, len(vocab))`` most frequent words, in vocabulary order."""
    return vocab.top(n)
