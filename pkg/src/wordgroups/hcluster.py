"""Agglomerative hierarchical clustering with dendrogram export.

The merge tree uses dense node ids: leaves are ``0 .. L-1`` in label order
and internal nodes are ``L .. 2L-2`` in merge order.  Ties between
equally-close pairs go to the pair with the smallest ``(min id, max id)``,
so results are byte-for-byte reproducible.
"""

import json
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LINKAGES = ("single", "complete", "average")

_SAFE_LABEL_RE = re.compile(r"[A-Za-z0-9_.-]+")


class Merge(NamedTuple):
    left: int
    right: int
    height: float
    node_id: int


@dataclass
class Dendrogram:
    """Binary merge tree over an ordered leaf-label list."""

    leaves: list[str]
    merges: list[Merge]

    def __post_init__(self):
        n = len(self.leaves)
        if len(set(self.leaves)) != n:
            raise ValueError("leaf labels must be unique")
        if len(self.merges) != max(n - 1, 0):
            raise ValueError(f"expected {n - 1} merges, got {len(self.merges)}")
        seen_child = set()
        for step, merge in enumerate(self.merges):
            if merge.node_id != n + step:
                raise ValueError("internal node ids must be dense in merge order")
            for child in (merge.left, merge.right):
                if not 0 <= child < merge.node_id:
                    raise ValueError(f"child {child} of node {merge.node_id} "
                                     "does not exist yet")
                if child in seen_child:
                    raise ValueError(f"node {child} appears as a child twice")
                seen_child.add(child)
        if self.merges and len(seen_child) != 2 * n - 2:
            raise ValueError("every node except the root must be merged once")

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    @property
    def root(self) -> int:
        return 2 * len(self.leaves) - 2

    def height_of(self, node: int) -> float:
        if node < len(self.leaves):
            return 0.0
        return self.merges[node - len(self.leaves)].height


@dataclass
class Partition:
    """Flat clustering; ids are dense ``0 .. k-1``."""

    assignment: dict[str, int]
    k: int

    def __post_init__(self):
        ids = set(self.assignment.values())
        if ids != set(range(self.k)):
            raise ValueError(f"cluster ids must be exactly 0..{self.k - 1}")

    def clusters(self) -> list[set[str]]:
        out = [set() for _ in range(self.k)]
        for word, cid in self.assignment.items():
            out[cid].add(word)
        return out


def _merged_row(D, i, j, m, size, linkage):
    if linkage == "single":
        return np.minimum(D[i, :m], D[j, :m])
    if linkage == "complete":
        return np.maximum(D[i, :m], D[j, :m])
    return (size[i] * D[i, :m] + size[j] * D[j, :m]) / (size[i] + size[j])


def agglomerate(d, linkage: str = "average") -> Dendrogram:
    """Repeatedly merge the closest pair of clusters under the linkage rule.

    ``d`` is a :class:`~wordgroups.metrics.DistanceMatrix`; the recorded
    merge height is the inter-cluster distance at merge time (Lance-Williams
    updates, so heights never decrease for the offered linkages).
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; choose from {LINKAGES}")
    base = np.asarray(d.values, dtype=np.float64)
    labels = list(d.labels)
    n = len(labels)
    if n < 2:
        raise ValueError("need at least 2 labels to cluster")
    if not np.isfinite(base).all():
        raise ValueError("distance matrix contains non-finite values")
    if not np.array_equal(base, base.T):
        raise ValueError("distance matrix is not symmetric")

    # Active clusters live in slots 0..m-1; merged clusters are compacted
    # away so the scanned matrix keeps shrinking.
    D = base.copy()
    np.fill_diagonal(D, np.inf)
    node_id = np.arange(n)
    size = np.ones(n)
    min_leaf = np.arange(n)
    merges = []
    m = n
    for step in range(n - 1):
        sub = D[:m, :m]
        height = float(sub.min())
        # ties: smallest (min node id, max node id) among minimal pairs
        locs = np.argwhere(sub == height)
        low = np.minimum(node_id[locs[:, 0]], node_id[locs[:, 1]])
        high = np.maximum(node_id[locs[:, 0]], node_id[locs[:, 1]])
        best = np.lexsort((high, low))[0]
        i, j = sorted(int(s) for s in locs[best])
        # children ordered by smallest contained leaf id
        if min_leaf[j] < min_leaf[i]:
            left, right = int(node_id[j]), int(node_id[i])
        else:
            left, right = int(node_id[i]), int(node_id[j])
        merges.append(Merge(left, right, height, n + step))

        row = _merged_row(D, i, j, m, size, linkage)
        D[i, :m] = row
        D[:m, i] = row
        D[i, i] = np.inf
        size[i] += size[j]
        min_leaf[i] = min(min_leaf[i], min_leaf[j])
        node_id[i] = n + step
        last = m - 1
        if j != last:
            D[j, :m] = D[last, :m]
            D[:m, j] = D[:m, last]
            D[j, j] = np.inf
            node_id[j] = node_id[last]
            size[j] = size[last]
            min_leaf[j] = min_leaf[last]
        m -= 1
    return Dendrogram(labels, merges)


def cut(tree: Dendrogram, k: int) -> Partition:
    """Undo the last ``k - 1`` merges; the surviving subtrees become the
    clusters, with ids assigned by smallest contained leaf id."""
    n = tree.n_leaves
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    members = {i: [i] for i in range(n)}
    for merge in tree.merges[:n - k]:
        members[merge.node_id] = members.pop(merge.left) + members.pop(merge.right)
    clusters = sorted(members.values(), key=min)
    assignment = {}
    for cid, leaf_ids in enumerate(clusters):
        for leaf in leaf_ids:
            assignment[tree.leaves[leaf]] = cid
    return Partition(assignment, k)


def _fmt_number(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(float(x))


def _newick_label(label: str) -> str:
    if _SAFE_LABEL_RE.fullmatch(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def to_newick(tree: Dendrogram) -> str:
    """Newick text; a child's branch length is the parent merge height minus
    the child's own height (leaves sit at height 0)."""
    frag = {i: _newick_label(label) for i, label in enumerate(tree.leaves)}
    height = {i: 0.0 for i in range(tree.n_leaves)}
    if not tree.merges:
        return frag[0] + ";"
    for merge in tree.merges:
        left_branch = _fmt_number(merge.height - height[merge.left])
        right_branch = _fmt_number(merge.height - height[merge.right])
        frag[merge.node_id] = (f"({frag.pop(merge.left)}:{left_branch},"
                               f"{frag.pop(merge.right)}:{right_branch})")
        height[merge.node_id] = merge.height
    return frag[tree.root] + ";"


def to_json(tree: Dendrogram) -> str:
    """Nested JSON tree; every node carries its id and height, leaves their
    label, internal nodes their two children."""
    node = {i: {"id": i, "label": label, "height": 0.0}
            for i, label in enumerate(tree.leaves)}
    for merge in tree.merges:
        node[merge.node_id] = {
            "id": merge.node_id,
            "height": merge.height,
            "children": [node.pop(merge.left), node.pop(merge.right)],
        }
    return json.dumps(node[max(node)], indent=2) + "\n"


def from_json(text: str) -> Dendrogram:
    """Parse :func:`to_json` output back into an identical Dendrogram."""
    root = json.loads(text)
    leaves = {}
    internals = {}
    stack = [root]
    while stack:
        item = stack.pop()
        if "children" in item:
            children = item["children"]
            if len(children) != 2:
                raise ValueError("internal nodes must have exactly 2 children")
            internals[int(item["id"])] = (int(children[0]["id"]),
                                          int(children[1]["id"]),
                                          float(item["height"]))
            stack.extend(children)
        else:
            leaves[int(item["id"])] = str(item["label"])
    n = len(leaves)
    if sorted(leaves) != list(range(n)):
        raise ValueError("leaf ids must be dense 0..L-1")
    if sorted(internals) != list(range(n, 2 * n - 1)):
        raise ValueError("internal ids must be dense L..2L-2")
    merges = [Merge(*internals[node_id], node_id)
              for node_id in sorted(internals)]
    return Dendrogram([leaves[i] for i in range(n)], merges)


def to_ascii(tree: Dendrogram) -> str:
    """Indented text rendering for terminal inspection (not contract-stable)."""
    def _attach(block, head, cont):
        return [head + block[0]] + [cont + line for line in block[1:]]

    frag = {i: [label] for i, label in enumerate(tree.leaves)}
    for merge in tree.merges:
        frag[merge.node_id] = (
            [_fmt_number(merge.height)]
            + _attach(frag.pop(merge.left), "+-- ", "|   ")
            + _attach(frag.pop(merge.right), "\\-- ", "    "))
    return "\n".join(frag[max(frag)]) + "\n"


_EXPORTERS = {"newick": to_newick, "json": to_json, "ascii": to_ascii}


def export(tree: Dendrogram, format: str = "newick") -> str:
    try:
        exporter = _EXPORTERS[format]
    except KeyError:
        raise ValueError(f"unknown format {format!r}; "
                         f"choose from {tuple(_EXPORTERS)}") from None
    return exporter(tree)
