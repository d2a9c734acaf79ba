import json

import numpy as np
import pytest

from wordgroups import compnet
from wordgroups.compnet import NetworkConfig
from wordgroups.cooccur import WindowConfig


def dense_batch(rows):
    """Wrap a dense (n, dim) matrix as an OccurrenceBatch (every component
    stored, including zeros, so the sparse path sees exact values)."""
    rows = np.asarray(rows, dtype=np.float64)
    n, dim = rows.shape
    return compnet.OccurrenceBatch(
        dim=dim,
        indptr=np.arange(0, (n + 1) * dim, dim, dtype=np.int64),
        indices=np.tile(np.arange(dim, dtype=np.int32), n),
        data=rows.reshape(-1).copy(),
        positions=np.arange(n, dtype=np.int64),
        words=[f"w{i}" for i in range(n)],
    )


def plain_config(**kw):
    defaults = dict(num_units=2, learning_rate_initial=0.5,
                    learning_rate_final=0.5, loser_rate=0.0, epochs=1, seed=0)
    defaults.update(kw)
    return NetworkConfig(**defaults)


class TestNetworkConfig:
    def test_defaults_valid(self):
        config = NetworkConfig(num_units=2)
        assert config.learning_rate_initial == 0.3
        assert config.learning_rate_final == 0.01

    @pytest.mark.parametrize("kw", [
        dict(num_units=1),
        dict(num_units=2, learning_rate_initial=0.0),
        dict(num_units=2, learning_rate_initial=1.5),
        dict(num_units=2, learning_rate_final=0.4,
             learning_rate_initial=0.3),
        dict(num_units=2, learning_rate_final=-0.1),
        dict(num_units=2, loser_rate=1.0),
        dict(num_units=2, loser_rate=-0.2),
        dict(num_units=2, epochs=0),
    ])
    def test_rejects_bad_values(self, kw):
        with pytest.raises(ValueError):
            NetworkConfig(**kw)

    def test_final_rate_zero_allowed(self):
        NetworkConfig(num_units=2, learning_rate_final=0.0)


class TestEncodeOccurrences:
    def test_word_one_hot_plus_context_bag(self):
        batch = compnet.encode_occurrences(
            ["a", "b", "a"], ["a", "b"], ["a", "b"], WindowConfig(1, 0))
        assert len(batch) == 3
        assert batch.dim == 4
        rows = batch.dense()
        # a@0: context {b}; b@1: context {a, a}; a@2: context {b}
        assert rows[0].tolist() == [1, 0, 0, 1]
        assert rows[1].tolist() == [0, 1, 1, 0]
        assert rows[2].tolist() == [1, 0, 0, 1]
        assert batch.positions.tolist() == [0, 1, 2]
        assert batch.words == ["a", "b", "a"]

    def test_context_bag_normalized(self):
        batch = compnet.encode_occurrences(
            ["x", "a", "y"], ["a"], ["x", "y"], WindowConfig(1, 0))
        row = batch.dense_row(0)
        assert row[0] == 1.0
        assert row[1:].tolist() == [0.5, 0.5]

    def test_no_context_in_range_gives_zero_block(self):
        batch = compnet.encode_occurrences(["a"], ["a"], ["a"],
                                           WindowConfig(1, 0))
        assert batch.dense_row(0).tolist() == [1.0, 0.0]

    def test_non_target_tokens_skipped(self):
        batch = compnet.encode_occurrences(
            ["z", "a", "z"], ["a"], ["z"], WindowConfig(1, 0))
        assert len(batch) == 1
        assert batch.positions.tolist() == [1]

    def test_gap_excludes_adjacent_positions(self):
        batch = compnet.encode_occurrences(
            ["x", "q", "a", "q", "y"], ["a"], ["x", "y", "q"],
            WindowConfig(1, 1))
        row = batch.dense_row(0)
        assert row[1:].tolist() == [0.5, 0.5, 0.0]

    def test_word_block_exactly_one_hot(self):
        rng = np.random.default_rng(0)
        words = [f"w{i}" for i in range(6)]
        tokens = list(rng.choice(words, 200))
        batch = compnet.encode_occurrences(tokens, words[:4], words,
                                           WindowConfig(2, 1))
        rows = batch.dense()
        word_block = rows[:, :4]
        assert ((word_block == 1.0).sum(axis=1) == 1).all()
        ctx_sums = rows[:, 4:].sum(axis=1)
        assert np.all((np.abs(ctx_sums - 1.0) < 1e-12) | (ctx_sums == 0.0))


class TestInit:
    def test_weights_are_permutation_of_samples(self):
        samples = np.array([[1.0, 0.0], [0.0, 1.0]])
        net = compnet.init(plain_config(), 2, samples)
        assert {tuple(w) for w in net.weights} == {(1.0, 0.0), (0.0, 1.0)}

    def test_same_seed_same_network(self):
        rng = np.random.default_rng(1)
        samples = rng.random((10, 4))
        net_a = compnet.init(plain_config(seed=9), 4, samples)
        net_b = compnet.init(plain_config(seed=9), 4, samples)
        assert net_a.weights.tobytes() == net_b.weights.tobytes()

    def test_distinct_samples_chosen(self):
        samples = np.arange(20.0).reshape(10, 2)
        for seed in range(10):
            net = compnet.init(plain_config(num_units=5, seed=seed), 2,
                               samples)
            assert len({tuple(w) for w in net.weights}) == 5

    def test_fewer_samples_than_units(self):
        with pytest.raises(ValueError):
            compnet.init(plain_config(num_units=3), 2, np.zeros((2, 2)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            compnet.init(plain_config(), 3, np.zeros((5, 2)))

    def test_accepts_occurrence_batch(self):
        batch = compnet.encode_occurrences(["a", "b", "a", "b"], ["a", "b"],
                                           ["a", "b"], WindowConfig(1, 0))
        net = compnet.init(plain_config(), batch.dim, batch)
        assert net.weights.shape == (2, 4)


class TestWinner:
    def test_exact_match_wins(self):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[0.0, 0.0], [1.0, 2.0]]))
        assert compnet.winner(net, [1.0, 2.0]) == 1

    def test_distance_comparison(self):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[0.0, 0.0], [1.0, 1.0]]))
        assert compnet.winner(net, [0.9, 0.9]) == 1

    def test_tie_goes_to_lowest_id(self):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[0.0, 1.0], [0.0, 1.0], [5.0, 5.0]]))
        assert compnet.winner(net, [0.0, 0.0]) == 0

    def test_dimension_mismatch(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 3)))
        with pytest.raises(ValueError):
            compnet.winner(net, [1.0, 2.0])


class TestTrainStep:
    def test_input_equal_to_weights_is_fixed_point(self):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[0.25, 0.75], [5.0, 5.0]]))
        before = net.weights.copy()
        k = compnet.train_step(net, [0.25, 0.75])
        assert k == 0
        assert np.array_equal(net.weights, before)

    def test_full_rate_lands_on_input(self):
        net = compnet.CompetitiveNetwork(
            plain_config(learning_rate_initial=1.0, learning_rate_final=1.0),
            np.array([[0.0, 0.0], [9.0, 9.0]]))
        compnet.train_step(net, [1.0, 2.0])
        assert net.weights[0].tolist() == [1.0, 2.0]

    def test_half_rate_moves_halfway(self):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[0.0, 0.0], [9.0, 9.0]]))
        compnet.train_step(net, [1.0, 0.0])
        assert net.weights[0].tolist() == [0.5, 0.0]

    def test_losers_bitwise_unchanged_without_leak(self):
        rng = np.random.default_rng(2)
        net = compnet.CompetitiveNetwork(plain_config(num_units=4),
                                         rng.random((4, 6)))
        x = rng.random(6)
        before = net.weights.copy()
        k = compnet.train_step(net, x)
        for unit in range(4):
            if unit != k:
                assert net.weights[unit].tobytes() == before[unit].tobytes()

    def test_losers_move_by_scaled_rate_with_leak(self):
        rng = np.random.default_rng(3)
        config = plain_config(num_units=3, loser_rate=0.1)
        net = compnet.CompetitiveNetwork(config, rng.random((3, 5)))
        x = rng.random(5)
        before = net.weights.copy()
        k = compnet.train_step(net, x)
        for unit in range(3):
            rate = 0.5 if unit == k else 0.05
            expected = before[unit] + rate * (x - before[unit])
            assert np.allclose(net.weights[unit], expected, atol=1e-15)

    def test_winner_distance_contracts_by_one_minus_eta(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            eta = float(rng.uniform(0.05, 1.0))
            config = plain_config(learning_rate_initial=eta,
                                  learning_rate_final=eta)
            net = compnet.CompetitiveNetwork(config, rng.random((2, 8)))
            x = rng.random(8)
            k = compnet.winner(net, x)
            before = np.sqrt(((net.weights[k] - x) ** 2).sum())
            compnet.train_step(net, x)
            after = np.sqrt(((net.weights[k] - x) ** 2).sum())
            assert after == pytest.approx((1 - eta) * before, rel=1e-12,
                                          abs=1e-15)

    def test_step_counter_increments(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 2)))
        compnet.train_step(net, [1.0, 1.0])
        assert net.step == 1


class TestLearningRateSchedule:
    def test_constant_without_schedule(self):
        net = compnet.CompetitiveNetwork(
            NetworkConfig(num_units=2, learning_rate_initial=0.3,
                          learning_rate_final=0.01), np.zeros((2, 2)))
        assert net.learning_rate(0) == 0.3
        assert net.learning_rate(100) == 0.3

    def test_linear_decay_endpoints_and_midpoint(self):
        net = compnet.CompetitiveNetwork(
            NetworkConfig(num_units=2, learning_rate_initial=0.3,
                          learning_rate_final=0.1), np.zeros((2, 2)),
            total_steps=5)
        assert net.learning_rate(0) == 0.3
        assert net.learning_rate(2) == pytest.approx(0.2)
        assert net.learning_rate(4) == pytest.approx(0.1)
        assert net.learning_rate(9) == pytest.approx(0.1)  # clamped


class TestTrain:
    def test_empty_stream_rejected(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            compnet.train(net, dense_batch(np.zeros((0, 2))))

    def test_bad_epochs_rejected(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            compnet.train(net, dense_batch(np.ones((3, 2))), epochs=0)

    def test_single_occurrence_single_epoch(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.eye(2))
        log = compnet.train(net, dense_batch([[1.0, 0.0]]), epochs=1)
        assert log.winner_counts.shape == (1, 2)
        assert log.winner_counts.sum() == 1
        assert len(log.snapshots) == 1

    def test_winner_counts_sum_to_stream_length(self):
        rng = np.random.default_rng(5)
        batch = dense_batch(rng.random((40, 3)))
        net = compnet.init(plain_config(epochs=2), 3, batch)
        log = compnet.train(net, batch)
        assert (log.winner_counts.sum(axis=1) == 40).all()

    def test_zero_final_rate_freezes_extra_epochs(self):
        rng = np.random.default_rng(6)
        batch = dense_batch(rng.random((25, 4)))
        config = plain_config(learning_rate_initial=0.5,
                              learning_rate_final=0.0, epochs=2)
        net = compnet.init(config, 4, batch)
        compnet.train(net, batch, epochs=2)  # schedule ends at rate 0
        frozen = net.weights.copy()
        log = compnet.train(net, batch, epochs=1)
        assert net.weights.tobytes() == frozen.tobytes()
        assert log.snapshots[0].tobytes() == frozen.tobytes()

    def test_determinism(self):
        rng = np.random.default_rng(7)
        rows = rng.random((60, 5))
        outputs = []
        for _ in range(2):
            batch = dense_batch(rows)
            net = compnet.init(plain_config(seed=3, epochs=3), 5, batch)
            log = compnet.train(net, batch)
            outputs.append((net.weights.tobytes(),
                            log.winner_counts.tobytes(),
                            compnet.classify(net, batch).tobytes()))
        assert outputs[0] == outputs[1]

    def test_separates_well_separated_clusters(self):
        rng = np.random.default_rng(8)
        centers = np.array([[0.0] * 6, [10.0] * 6])
        labels = rng.integers(0, 2, size=120)
        rows = centers[labels] + rng.normal(0, 0.3, size=(120, 6))
        batch = dense_batch(rows)
        config = NetworkConfig(num_units=2, learning_rate_initial=0.3,
                               learning_rate_final=0.01, loser_rate=0.1,
                               epochs=3, seed=0)
        net = compnet.init(config, 6, batch)
        compnet.train(net, batch)
        ids = np.asarray(compnet.classify(net, batch))
        # nearest-centroid oracle, up to unit relabeling
        oracle = ((rows - centers[0]) ** 2).sum(1) > \
            ((rows - centers[1]) ** 2).sum(1)
        agreement = (ids == oracle).mean()
        assert agreement in (0.0, 1.0)

    def test_dimension_mismatch(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 3)))
        with pytest.raises(ValueError):
            compnet.train(net, dense_batch(np.ones((4, 2))))


class TestClassify:
    def test_no_updates_and_stable(self):
        rng = np.random.default_rng(9)
        batch = dense_batch(rng.random((30, 4)))
        net = compnet.init(plain_config(), 4, batch)
        compnet.train(net, batch)
        weights = net.weights.copy()
        first = compnet.classify(net, batch)
        second = compnet.classify(net, batch)
        assert np.array_equal(first, second)
        assert net.weights.tobytes() == weights.tobytes()

    def test_centroid_units_match_nearest_centroid(self):
        rng = np.random.default_rng(10)
        centers = np.array([[0.0, 0.0], [4.0, 4.0]])
        rows = np.vstack([center + rng.normal(0, 0.5, size=(20, 2))
                          for center in centers])
        net = compnet.CompetitiveNetwork(plain_config(), centers.copy())
        ids = compnet.classify(net, dense_batch(rows))
        oracle = ((rows - centers[0]) ** 2).sum(1) > \
            ((rows - centers[1]) ** 2).sum(1)
        assert np.array_equal(np.asarray(ids, dtype=bool), oracle)

    def test_empty_stream(self):
        net = compnet.CompetitiveNetwork(plain_config(), np.zeros((2, 2)))
        assert len(compnet.classify(net, dense_batch(np.zeros((0, 2))))) == 0


class TestSnapshot:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(11)
        net = compnet.CompetitiveNetwork(plain_config(seed=42),
                                         rng.random((2, 7)), step=19)
        path = tmp_path / "snapshot.json"
        compnet.save_snapshot(net, path)
        loaded = compnet.load_snapshot(path)
        assert loaded.weights.tobytes() == net.weights.tobytes()
        assert loaded.step == 19
        assert loaded.config.seed == 42
        assert loaded.num_units == 2 and loaded.dim == 7

    def test_file_is_json_with_17_digit_reals(self, tmp_path):
        net = compnet.CompetitiveNetwork(
            plain_config(), np.array([[1 / 3, 0.25], [1.0, 2.0]]))
        path = tmp_path / "snapshot.json"
        compnet.save_snapshot(net, path)
        doc = json.loads(path.read_text())
        assert doc["dims"] == 2 and doc["K"] == 2
        assert "0.33333333333333331" in path.read_text()

    def test_shape_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"dims": 3, "K": 2, "seed": 0, "step": 0, '
                        '"weights": [[1.0, 2.0], [3.0, 4.0]]}')
        with pytest.raises(ValueError):
            compnet.load_snapshot(path)
