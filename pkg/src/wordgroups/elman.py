"""Tiny template-grammar corpus with known word categories.

Sentences are drawn from templates over disjoint word categories (by
default two-word and three-word noun/verb frames), giving a token stream
where every token's category is known.  That makes it a convenient ground
truth for checking that context-based grouping separates nouns from verbs.
"""

from dataclasses import dataclass

import numpy as np

BOUNDARY_CATEGORY = "BOUNDARY"


@dataclass(frozen=True)
class Grammar:
    """Named disjoint word categories plus sentence templates over them."""

    categories: dict[str, tuple[str, ...]]
    templates: tuple[tuple[str, ...], ...]
    seed: int = 0

    def __post_init__(self):
        if not self.categories or not self.templates:
            raise ValueError("grammar needs categories and templates")
        seen: set[str] = set()
        for name, words in self.categories.items():
            if not words:
                raise ValueError(f"category {name!r} is empty")
            overlap = seen.intersection(words)
            if overlap:
                raise ValueError(f"categories overlap on {sorted(overlap)}")
            seen.update(words)
        for template in self.templates:
            for name in template:
                if name not in self.categories:
                    raise ValueError(f"template references unknown category "
                                     f"{name!r}")


def default_grammar() -> Grammar:
    return Grammar(
        categories={
            "NOUN": ("man", "woman", "boy", "girl", "cat", "dog", "book",
                     "rock"),
            "VERB": ("see", "chase", "eat", "like", "break", "move"),
        },
        templates=(("NOUN", "VERB"), ("NOUN", "VERB", "NOUN")),
    )


@dataclass
class LabeledCorpus:
    """Token stream with a category label per token."""

    tokens: list[str]
    labels: list[str]
    sentence_lengths: list[int]

    def __post_init__(self):
        if len(self.tokens) != len(self.labels):
            raise ValueError("tokens and labels must have equal length")
        if sum(self.sentence_lengths) != len(self.tokens):
            raise ValueError("sentence lengths do not cover the token stream")

    def sentences(self):
        start = 0
        for length in self.sentence_lengths:
            yield self.tokens[start:start + length]
            start += length

    def save_corpus(self, path) -> None:
        """Plain text, one sentence per line."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for sentence in self.sentences():
                fh.write(" ".join(sentence) + "\n")

    def save_labels(self, path) -> None:
        """TSV ``token<TAB>category``, one line per token, in order."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for token, label in zip(self.tokens, self.labels):
                fh.write(f"{token}\t{label}\n")


def load_labels(path) -> list[tuple[str, str]]:
    """Read a labels TSV back as ``(token, category)`` pairs."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            token, label = line.rstrip("\n").split("\t")
            out.append((token, label))
    return out


def generate(grammar: Grammar, num_sentences: int,
             seed: int | None = None, boundary: str | None = None) -> LabeledCorpus:
    """Sample ``num_sentences`` sentences: template uniform, then each slot
    filled uniformly from its category.  Sentences are concatenated with no
    boundary tokens unless ``boundary`` is given (those tokens get the
    reserved category ``BOUNDARY``).
    """
    if num_sentences < 1:
        raise ValueError("num_sentences must be >= 1")
    rng = np.random.default_rng(grammar.seed if seed is None else seed)
    tokens: list[str] = []
    labels: list[str] = []
    lengths: list[int] = []
    for _ in range(num_sentences):
        template = grammar.templates[rng.integers(len(grammar.templates))]
        length = len(template)
        for name in template:
            words = grammar.categories[name]
            tokens.append(words[rng.integers(len(words))])
            labels.append(name)
        if boundary is not None:
            tokens.append(boundary)
            labels.append(BOUNDARY_CATEGORY)
            length += 1
        lengths.append(length)
    return LabeledCorpus(tokens, labels, lengths)
