"""Score flat partitions and per-occurrence unit labelings against gold
word groups.

All metrics are computed over gold words only, ignore cluster/unit id
permutations, and are reported together (purity alone is trivially gamed by
singleton clusters, so per-group F1 and the cluster count belong next to it).
"""

import json
import warnings
from importlib import resources


def load_gold_groups(path) -> dict[str, set[str]]:
    """Read a ``{group name: [words]}`` JSON file."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return {name: set(words) for name, words in doc.items()}


def bundled_groups() -> dict[str, set[str]]:
    """The example gold groups shipped with the package (table1.json)."""
    text = resources.files("wordgroups").joinpath("data/table1.json").read_text(
        encoding="utf-8")
    return {name: set(words) for name, words in json.loads(text).items()}


def _assignment(partition) -> dict[str, int]:
    return getattr(partition, "assignment", partition)


def _filter_gold(gold: dict[str, set[str]], present) -> dict[str, set[str]]:
    """Drop gold words (and then empty groups) missing from ``present``,
    warning about each drop."""
    present = set(present)
    filtered = {}
    for name, words in gold.items():
        keep = words & present
        missing = words - present
        if missing:
            warnings.warn(f"gold group {name!r}: ignoring absent words "
                          f"{sorted(missing)}")
        if keep:
            filtered[name] = keep
        else:
            warnings.warn(f"gold group {name!r} has no words left; dropped")
    return filtered


def _gold_clusters(assignment, gold):
    """Partition clusters restricted to the gold-word union."""
    gold_words = set().union(*gold.values())
    clusters: dict[int, set[str]] = {}
    for word in gold_words:
        clusters.setdefault(assignment[word], set()).add(word)
    return clusters


def purity(partition, gold: dict[str, set[str]]) -> float:
    """Fraction of gold words whose cluster's dominant gold group is theirs.

    For each cluster, the best-matching group's overlap counts as correct;
    the denominator is the number of gold words in the partition.
    """
    assignment = _assignment(partition)
    gold = _filter_gold(gold, assignment)
    if not gold:
        raise ValueError("no gold words present in the partition")
    clusters = _gold_clusters(assignment, gold)
    correct = 0
    total = 0
    for members in clusters.values():
        correct += max(len(members & group) for group in gold.values())
        total += len(members)
    return correct / total


def group_f1(partition, gold: dict[str, set[str]]):
    """Best-match F1 per gold group plus the macro average.

    Clusters are restricted to the union of gold words, so precision is not
    washed out by non-gold vocabulary.  Returns ``(per_group, macro)``.
    """
    assignment = _assignment(partition)
    gold = _filter_gold(gold, assignment)
    if not gold:
        raise ValueError("no gold words present in the partition")
    clusters = list(_gold_clusters(assignment, gold).values())
    per_group = {}
    for name, group in gold.items():
        best = 0.0
        for members in clusters:
            overlap = len(members & group)
            if overlap == 0:
                continue
            precision = overlap / len(members)
            recall = overlap / len(group)
            best = max(best, 2 * precision * recall / (precision + recall))
        per_group[name] = best
    macro = sum(per_group.values()) / len(per_group)
    return per_group, macro


def majority_map(unit_ids, gold_labels) -> dict[int, str]:
    """Map each unit to its majority gold category (ties to the
    lexicographically first category)."""
    tallies: dict[int, dict[str, int]] = {}
    for unit, label in zip(unit_ids, gold_labels):
        tallies.setdefault(int(unit), {}).setdefault(label, 0)
        tallies[int(unit)][label] += 1
    return {unit: min(counts, key=lambda cat: (-counts[cat], cat))
            for unit, counts in tallies.items()}


def category_accuracy(unit_ids, gold_labels) -> float:
    """Fraction of occurrences whose unit's majority category matches their
    own gold category."""
    unit_ids = list(unit_ids)
    gold_labels = list(gold_labels)
    if len(unit_ids) != len(gold_labels):
        raise ValueError(f"length mismatch: {len(unit_ids)} unit ids vs "
                         f"{len(gold_labels)} labels")
    if not unit_ids:
        raise ValueError("need at least one occurrence")
    mapping = majority_map(unit_ids, gold_labels)
    hits = sum(1 for unit, label in zip(unit_ids, gold_labels)
               if mapping[int(unit)] == label)
    return hits / len(unit_ids)
