import json

import numpy as np
import pytest

from mlzoom.cart import (
    Internal,
    fit,
    load_model,
    predict,
    prediction_table,
    save_model,
    score_r2,
)
from mlzoom.errors import ModelFormatError
from mlzoom.pyramid import TrainingSet


def make_ts(features, labels) -> TrainingSet:
    features = np.asarray(features, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8).reshape(len(features), 4)
    return TrainingSet(
        features=features,
        labels=labels,
        levels=np.ones(len(features), dtype=np.int32),
    )


def random_ts(rng: np.random.Generator, n: int, alphabet: int) -> TrainingSet:
    values = rng.integers(0, 256, size=alphabet)
    features = rng.choice(values, size=n)
    labels = rng.integers(0, 256, size=(n, 4))
    return make_ts(features, labels)


def grouped_mean_oracle(ts: TrainingSet) -> dict[int, np.ndarray]:
    """Reference model: per distinct feature value, the mean label vector."""
    out = {}
    for v in np.unique(ts.features):
        out[int(v)] = ts.labels[ts.features == v].astype(np.float64).mean(axis=0)
    return out


def tree_sse(tree, ts: TrainingSet) -> float:
    preds = prediction_table(tree)[ts.features.astype(np.intp)]
    return float(((ts.labels.astype(np.float64) - preds) ** 2).sum())


class TestFit:
    def test_single_pair_gives_one_leaf(self):
        ts = make_ts([25], [[10, 20, 30, 40]])
        tree = fit(ts)
        assert tree.n_leaves == 1 and tree.depth == 0 and tree.n_samples == 1
        for g in (0, 25, 255):
            assert np.array_equal(predict(tree, g), [10.0, 20.0, 30.0, 40.0])

    def test_two_extremes_split_at_midpoint(self):
        ts = make_ts([0, 255], [[0] * 4, [255] * 4])
        tree = fit(ts)
        assert isinstance(tree.root, Internal)
        assert tree.root.threshold == 127.5
        assert tree.n_leaves == 2
        assert np.array_equal(predict(tree, 100), [0.0] * 4)
        assert np.array_equal(predict(tree, 200), [255.0] * 4)
        assert np.array_equal(predict(tree, 127.5), [0.0] * 4)  # <= routes left

    def test_distinct_features_grow_to_singleton_leaves(self):
        rng = np.random.default_rng(81)
        features = rng.permutation(256)[:40]
        labels = rng.integers(0, 256, size=(40, 4))
        tree = fit(make_ts(features, labels))
        assert tree.n_leaves == 40
        for f, row in zip(features, labels):
            assert np.array_equal(predict(tree, int(f)), row.astype(np.float64))

    def test_min_samples_split_limits_growth(self):
        ts = make_ts([0, 10, 20, 30], [[0] * 4, [10] * 4, [20] * 4, [30] * 4])
        tree = fit(ts, {"min_samples_split": 4})
        assert tree.n_leaves == 2 and tree.depth == 1
        assert np.array_equal(predict(tree, 0), [5.0] * 4)
        assert np.array_equal(predict(tree, 25), [25.0] * 4)

    def test_rejects_empty_and_bad_params(self):
        with pytest.raises(ValueError):
            fit(make_ts([], np.zeros((0, 4))))
        with pytest.raises(ValueError):
            fit(make_ts([1], [[1] * 4]), {"min_samples_split": 1})
        with pytest.raises(ValueError):
            fit(make_ts([1], [[1] * 4]), {"max_depth": 3})

    def test_deterministic_fit_serializes_identically(self, tmp_path):
        rng = np.random.default_rng(82)
        ts = random_ts(rng, 500, 24)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_model(fit(ts), p1)
        save_model(fit(ts), p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestPredictOracle:
    def test_matches_grouped_means_on_duplicate_heavy_sets(self):
        rng = np.random.default_rng(83)
        for _ in range(10):
            ts = random_ts(rng, 300, int(rng.integers(2, 33)))
            tree = fit(ts)
            oracle = grouped_mean_oracle(ts)
            for value, mean in oracle.items():
                assert np.abs(predict(tree, value) - mean).max() <= 1e-9

    def test_leaf_regions_are_contiguous_intervals(self):
        rng = np.random.default_rng(84)
        ts = random_ts(rng, 400, 20)
        tree = fit(ts)
        table = prediction_table(tree)
        # walking g = 0..255, the predicted vector changes exactly
        # n_leaves - 1 times when every leaf interval is contiguous
        changes = sum(
            1 for g in range(1, 256) if not np.array_equal(table[g], table[g - 1])
        )
        assert changes == tree.n_leaves - 1

    def test_predictions_stay_inside_label_range(self):
        rng = np.random.default_rng(85)
        ts = random_ts(rng, 200, 16)
        tree = fit(ts)
        table = prediction_table(tree)
        lo = ts.labels.min(axis=0).astype(np.float64)
        hi = ts.labels.max(axis=0).astype(np.float64)
        assert np.all(table >= lo[None, :] - 1e-12)
        assert np.all(table <= hi[None, :] + 1e-12)

    def test_split_never_increases_training_sse(self):
        rng = np.random.default_rng(86)
        for _ in range(5):
            ts = random_ts(rng, 150, 10)
            tree = fit(ts)
            mean = ts.labels.astype(np.float64).mean(axis=0)
            single_leaf_sse = float(((ts.labels.astype(np.float64) - mean) ** 2).sum())
            assert tree_sse(tree, ts) <= single_leaf_sse + 1e-9

    def test_concurrent_predict_is_safe(self):
        from concurrent.futures import ThreadPoolExecutor

        rng = np.random.default_rng(99)
        ts = random_ts(rng, 400, 28)
        tree = fit(ts)
        expected = prediction_table(tree)

        def worker(_):
            return prediction_table(tree)

        with ThreadPoolExecutor(max_workers=8) as pool:
            tables = list(pool.map(worker, range(16)))
        for table in tables:
            assert np.array_equal(table, expected)


class TestScore:
    def test_perfect_fit_when_features_distinct(self):
        rng = np.random.default_rng(87)
        features = rng.permutation(256)[:30]
        labels = rng.integers(0, 256, size=(30, 4))
        ts = make_ts(features, labels)
        report = score_r2(fit(ts), ts)
        assert report.r2_uniform == 1.0
        assert report.r2_per_output == (1.0, 1.0, 1.0, 1.0)

    def test_constant_labels_score_one_by_convention(self):
        ts = make_ts([5, 9, 200], [[70] * 4] * 3)
        report = score_r2(fit(ts), ts)
        assert report.r2_uniform == 1.0

    def test_constant_labels_score_zero_when_not_reproduced(self):
        mismatched = fit(make_ts([5], [[10, 10, 10, 10]]))
        constant = make_ts([5, 9], [[70] * 4] * 2)
        assert score_r2(mismatched, constant).r2_uniform == 0.0

    def test_duplicate_conflict_hand_computed(self):
        # features {25, 25, 50}: the 25-leaf predicts (10,10,10,10), so per
        # output SSE = 100 + 100 = 200 and SST = (0-20)^2 + (20-20)^2 +
        # (40-20)^2 = 800, giving R^2 = 0.75 for each output.
        ts = make_ts([25, 25, 50], [[0] * 4, [20] * 4, [40] * 4])
        tree = fit(ts)
        assert np.array_equal(predict(tree, 25), [10.0] * 4)
        report = score_r2(tree, ts)
        assert report.r2_per_output == (0.75, 0.75, 0.75, 0.75)
        assert report.r2_uniform == 0.75

    def test_uniform_is_mean_of_outputs(self):
        rng = np.random.default_rng(88)
        ts = random_ts(rng, 250, 12)
        report = score_r2(fit(ts), ts)
        assert report.r2_uniform == pytest.approx(np.mean(report.r2_per_output), abs=1e-12)
        assert max(report.r2_per_output) <= 1.0
        assert report.fit_time >= 0.0

    def test_empty_set_rejected(self):
        tree = fit(make_ts([1], [[1] * 4]))
        with pytest.raises(ValueError):
            score_r2(tree, make_ts([], np.zeros((0, 4))))


class TestSerialization:
    def test_one_leaf_file_has_one_node(self, tmp_path):
        path = tmp_path / "leaf.json"
        save_model(fit(make_ts([25], [[10, 20, 30, 40]])), path)
        doc = json.loads(path.read_text())
        assert doc["format_version"] == 1
        assert doc["n_samples"] == 1
        assert doc["nodes"] == [{"kind": "leaf", "mean": [10.0, 20.0, 30.0, 40.0], "count": 1}]

    def test_round_trip_preserves_all_256_predictions(self, tmp_path):
        rng = np.random.default_rng(89)
        ts = random_ts(rng, 400, 30)
        tree = fit(ts)
        path = tmp_path / "model.json"
        save_model(tree, path)
        back = load_model(path)
        assert back.n_samples == tree.n_samples
        assert back.n_leaves == tree.n_leaves
        assert back.depth == tree.depth
        assert np.array_equal(prediction_table(back), prediction_table(tree))

    def test_tampered_kind_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        save_model(fit(make_ts([25], [[1, 2, 3, 4]])), path)
        doc = json.loads(path.read_text())
        doc["nodes"][0]["kind"] = "gremlin"
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelFormatError, match="kind"):
            load_model(path)

    def test_version_mismatch_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        save_model(fit(make_ts([25], [[1, 2, 3, 4]])), path)
        doc = json.loads(path.read_text())
        doc["format_version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelFormatError, match="format_version"):
            load_model(path)

    def test_truncated_node_array_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        save_model(fit(make_ts([0, 255], [[0] * 4, [255] * 4])), path)
        doc = json.loads(path.read_text())
        doc["nodes"] = doc["nodes"][:2]
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelFormatError):
            load_model(path)

    def test_sample_count_mismatch_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        save_model(fit(make_ts([25], [[1, 2, 3, 4]])), path)
        doc = json.loads(path.read_text())
        doc["n_samples"] = 5
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelFormatError, match="counts"):
            load_model(path)

    def test_not_json_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("not json {")
        with pytest.raises(ModelFormatError):
            load_model(path)

    def test_leaf_counts_sum_to_n_samples(self, tmp_path):
        rng = np.random.default_rng(90)
        ts = random_ts(rng, 123, 9)
        tree = fit(ts)
        path = tmp_path / "model.json"
        save_model(tree, path)
        doc = json.loads(path.read_text())
        counted = sum(n["count"] for n in doc["nodes"] if n["kind"] == "leaf")
        assert counted == 123 == tree.n_samples
