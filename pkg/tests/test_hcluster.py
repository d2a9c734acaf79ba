import json

import numpy as np
import pytest

from wordgroups import hcluster, metrics
from wordgroups.hcluster import Dendrogram, Merge

from oracles import brute_agglomerate


def simple_matrix():
    return metrics.DistanceMatrix(
        ["A", "B", "C"],
        np.array([[0.0, 1.0, 4.0], [1.0, 0.0, 5.0], [4.0, 5.0, 0.0]]))


def random_distance_matrix(rng, n):
    values = rng.random((n, n)) * 10
    values = np.triu(values, 1)
    values = values + values.T
    labels = [f"L{i}" for i in range(n)]
    return metrics.DistanceMatrix(labels, values)


class TestAgglomerate:
    def test_average_linkage_heights(self):
        tree = hcluster.agglomerate(simple_matrix(), "average")
        assert tree.merges == [Merge(0, 1, 1.0, 3), Merge(3, 2, 4.5, 4)]

    def test_single_linkage_uses_minimum(self):
        tree = hcluster.agglomerate(simple_matrix(), "single")
        assert tree.merges[1].height == 4.0

    def test_complete_linkage_uses_maximum(self):
        tree = hcluster.agglomerate(simple_matrix(), "complete")
        assert tree.merges[1].height == 5.0

    def test_two_leaves(self):
        d = metrics.DistanceMatrix(["X", "Y"],
                                   np.array([[0.0, 2.0], [2.0, 0.0]]))
        for linkage in hcluster.LINKAGES:
            tree = hcluster.agglomerate(d, linkage)
            assert tree.merges == [Merge(0, 1, 2.0, 2)]

    def test_matches_from_scratch_recompute(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            n = int(rng.integers(2, 13))
            d = random_distance_matrix(rng, n)
            for linkage in hcluster.LINKAGES:
                tree = hcluster.agglomerate(d, linkage)
                expected = brute_agglomerate(d.values.tolist(), linkage)
                assert len(tree.merges) == len(expected)
                for merge, (a, b, height, node_id) in zip(tree.merges,
                                                          expected):
                    assert {merge.left, merge.right} == {a, b}
                    assert merge.node_id == node_id
                    assert merge.height == pytest.approx(height, abs=1e-9)

    def test_heights_nondecreasing(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            d = random_distance_matrix(rng, int(rng.integers(2, 20)))
            for linkage in hcluster.LINKAGES:
                heights = [m.height for m in
                           hcluster.agglomerate(d, linkage).merges]
                assert all(a <= b for a, b in zip(heights, heights[1:]))

    def test_label_permutation_preserves_cut_partitions(self):
        rng = np.random.default_rng(33)
        d = random_distance_matrix(rng, 9)
        perm = rng.permutation(9)
        permuted = metrics.DistanceMatrix(
            [d.labels[i] for i in perm], d.values[np.ix_(perm, perm)])
        for linkage in hcluster.LINKAGES:
            tree_a = hcluster.agglomerate(d, linkage)
            tree_b = hcluster.agglomerate(permuted, linkage)
            for k in range(1, 10):
                parts_a = {frozenset(c) for c in
                           hcluster.cut(tree_a, k).clusters()}
                parts_b = {frozenset(c) for c in
                           hcluster.cut(tree_b, k).clusters()}
                assert parts_a == parts_b

    def test_deterministic_tie_break(self):
        # all pairs at distance 1: merges must pick (0,1), then (3,2), ...
        d = metrics.DistanceMatrix(["a", "b", "c"], np.ones((3, 3)) - np.eye(3))
        tree = hcluster.agglomerate(d, "single")
        assert tree.merges[0] == Merge(0, 1, 1.0, 3)
        assert {tree.merges[1].left, tree.merges[1].right} == {2, 3}

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            hcluster.agglomerate(
                metrics.DistanceMatrix(["a"], np.zeros((1, 1))))
        with pytest.raises(ValueError):
            hcluster.agglomerate(metrics.DistanceMatrix(
                ["a", "b"], np.array([[0.0, np.inf], [np.inf, 0.0]])))
        with pytest.raises(ValueError):
            hcluster.agglomerate(metrics.DistanceMatrix(
                ["a", "b"], np.array([[0.0, 1.0], [2.0, 0.0]])))
        with pytest.raises(ValueError):
            hcluster.agglomerate(simple_matrix(), "median")


class TestCut:
    def test_single_cluster(self):
        tree = hcluster.agglomerate(simple_matrix())
        partition = hcluster.cut(tree, 1)
        assert set(partition.assignment.values()) == {0}

    def test_all_singletons(self):
        tree = hcluster.agglomerate(simple_matrix())
        partition = hcluster.cut(tree, 3)
        assert partition.assignment == {"A": 0, "B": 1, "C": 2}

    def test_two_clusters(self):
        tree = hcluster.agglomerate(simple_matrix())
        partition = hcluster.cut(tree, 2)
        assert partition.assignment == {"A": 0, "B": 0, "C": 1}

    def test_ids_follow_smallest_leaf(self):
        d = metrics.DistanceMatrix(
            ["p", "q", "r", "s"],
            np.array([[0.0, 9.0, 9.0, 1.0],
                      [9.0, 0.0, 2.0, 9.0],
                      [9.0, 2.0, 0.0, 9.0],
                      [1.0, 9.0, 9.0, 0.0]]))
        partition = hcluster.cut(hcluster.agglomerate(d), 2)
        # cluster containing leaf 0 ("p") gets id 0
        assert partition.assignment == {"p": 0, "s": 0, "q": 1, "r": 1}

    def test_each_cut_refines_the_next(self):
        rng = np.random.default_rng(34)
        d = random_distance_matrix(rng, 12)
        tree = hcluster.agglomerate(d)
        for k in range(2, 13):
            fine = hcluster.cut(tree, k).clusters()
            coarse = hcluster.cut(tree, k - 1).clusters()
            for cluster in fine:
                assert any(cluster <= c for c in coarse)

    def test_k_out_of_range(self):
        tree = hcluster.agglomerate(simple_matrix())
        with pytest.raises(ValueError):
            hcluster.cut(tree, 0)
        with pytest.raises(ValueError):
            hcluster.cut(tree, 4)


class TestNewick:
    def test_three_leaf_average_tree(self):
        tree = hcluster.agglomerate(simple_matrix(), "average")
        assert hcluster.to_newick(tree) == "((A:1,B:1):3.5,C:4.5);"

    def test_single_merge(self):
        d = metrics.DistanceMatrix(["X", "Y"],
                                   np.array([[0.0, 2.0], [2.0, 0.0]]))
        tree = hcluster.agglomerate(d)
        assert hcluster.to_newick(tree) == "(X:2,Y:2);"

    def test_label_quoting(self):
        d = metrics.DistanceMatrix(["o'clock", "two words"],
                                   np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert hcluster.to_newick(hcluster.agglomerate(d)) == \
            "('o''clock':1,'two words':1);"


class TestJsonExport:
    def test_round_trip_worked_example(self):
        tree = hcluster.agglomerate(simple_matrix())
        assert hcluster.from_json(hcluster.to_json(tree)) == tree

    def test_round_trip_random_trees(self):
        rng = np.random.default_rng(35)
        for _ in range(25):
            d = random_distance_matrix(rng, int(rng.integers(2, 40)))
            linkage = hcluster.LINKAGES[rng.integers(3)]
            tree = hcluster.agglomerate(d, linkage)
            assert hcluster.from_json(hcluster.to_json(tree)) == tree

    def test_document_shape(self):
        tree = hcluster.agglomerate(simple_matrix())
        doc = json.loads(hcluster.to_json(tree))
        assert doc["height"] == 4.5
        assert [child["height"] for child in doc["children"]] == [1.0, 0.0]
        assert doc["children"][1]["label"] == "C"

    def test_rejects_malformed_documents(self):
        with pytest.raises(ValueError):
            hcluster.from_json(json.dumps(
                {"id": 2, "height": 1.0,
                 "children": [{"id": 0, "label": "a", "height": 0.0},
                              {"id": 3, "label": "b", "height": 0.0}]}))


class TestAsciiExport:
    def test_contains_all_labels_and_heights(self):
        tree = hcluster.agglomerate(simple_matrix())
        text = hcluster.to_ascii(tree)
        for label in "ABC":
            assert label in text
        assert "4.5" in text and "1" in text


class TestExportDispatch:
    def test_formats(self):
        tree = hcluster.agglomerate(simple_matrix())
        assert hcluster.export(tree, "newick") == hcluster.to_newick(tree)
        assert hcluster.export(tree, "json") == hcluster.to_json(tree)
        assert hcluster.export(tree, "ascii") == hcluster.to_ascii(tree)
        with pytest.raises(ValueError):
            hcluster.export(tree, "svg")


class TestDendrogramValidation:
    def test_merge_count(self):
        with pytest.raises(ValueError):
            Dendrogram(["a", "b"], [])

    def test_child_used_twice(self):
        with pytest.raises(ValueError):
            Dendrogram(["a", "b", "c"],
                       [Merge(0, 1, 1.0, 3), Merge(0, 3, 2.0, 4)])

    def test_duplicate_leaf_labels(self):
        with pytest.raises(ValueError):
            Dendrogram(["a", "a"], [Merge(0, 1, 1.0, 2)])

    def test_partition_ids_must_be_dense(self):
        with pytest.raises(ValueError):
            hcluster.Partition({"a": 0, "b": 2}, 2)
