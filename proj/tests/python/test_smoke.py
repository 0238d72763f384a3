"""End-to-end smoke tests for the python bindings."""

import json
import math

import pytest

import driftbench as db


def sudden_stream():
    sc = db.DriftScenario()
    sc.pattern = "sudden"
    sc.n_windows = 10
    sc.samples_per_window = 300
    sc.n_features = 6
    sc.n_classes = 3
    sc.informative_features = 4
    sc.drift_at = 6
    sc.magnitude = 5.0
    sc.seed = 9
    return db.generate_stream(sc)


def single_window(seed, separation):
    sc = db.DriftScenario()
    sc.pattern = "none"
    sc.n_windows = 1
    sc.samples_per_window = 300
    sc.n_features = 6
    sc.n_classes = 3
    sc.informative_features = 4
    sc.class_separation = separation
    sc.seed = seed
    return db.generate_stream(sc)


def test_version_string():
    assert isinstance(db.__version__, str) and db.__version__


def test_two_sample_statistics():
    ks = db.ks_two_sample([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.0])
    assert ks["statistic"] == pytest.approx(0.25, abs=1e-12)
    assert 0.0 <= ks["p_value"] <= 1.0

    assert db.wasserstein_1d([0.0, 1.0], [0.0, 1.0, 2.0]) == pytest.approx(0.5, abs=1e-12)

    nw = db.normalized_wasserstein([0.0, 2.0], [3.0, 5.0])
    assert nw["statistic"] == pytest.approx(3.0, abs=1e-12)
    assert nw["drifted"] and not nw["degenerate_scale"]

    lam = 1.358 * math.sqrt(200.0 / 10000.0)
    assert db.ks_p_value(lam, 100, 100) == pytest.approx(0.050, abs=0.001)


def test_generate_shape():
    data = sudden_stream()
    assert len(data) == 3000
    assert data.schema == [f"f{i}" for i in range(6)]
    assert data.class_list() == ["c0", "c1", "c2"]
    assert len(data.feature_matrix()) == 3000
    assert set(data.labels()) == {"c0", "c1", "c2"}


def test_train_predict_f1():
    data = sudden_stream()
    model = db.train(data, tree_count=20, seed=3)
    assert model.schema == data.schema
    assert model.classes == ["c0", "c1", "c2"]

    preds = model.predict(data.feature_matrix())
    scores = db.f1_scores(data.labels(), preds)
    assert scores["macro_f1"] > 0.9
    assert set(scores["per_class"]) == {"c0", "c1", "c2"}

    weights = model.importances()
    assert set(weights) == set(data.schema)
    assert sum(weights.values()) == pytest.approx(1.0, abs=1e-9)


def test_model_json_round_trip():
    data = single_window(seed=4, separation=3.0)
    model = db.train(data, tree_count=10, seed=4)
    text = model.to_json()
    clone = db.TrainedModel.from_json(text)
    matrix = data.feature_matrix()
    assert clone.predict(matrix) == model.predict(matrix)
    assert clone.to_json() == text


def test_detect_identical_and_shifted():
    same = single_window(seed=9, separation=3.0)
    report = db.detect(same, same)
    assert report["scope"] == "global"
    assert not report["drifted"]
    assert report["overall_severity"] == 0.0
    assert len(report["per_feature"]) == 6

    moved = single_window(seed=10, separation=9.0)
    shifted = db.detect(same, moved)
    assert shifted["drifted"]
    assert shifted["overall_severity"] > 0.0


def test_csv_round_trip(tmp_path):
    data = sudden_stream()
    path = str(tmp_path / "stream.csv")
    db.write_csv(data, path)
    back = db.ingest(path, label_column="label", time_column="ts")
    assert back.schema == data.schema
    assert len(back) == len(data)
    assert back.labels() == data.labels()


def test_run_benchmark_log():
    data = sudden_stream()
    log = db.run_benchmark(
        data, train_windows=3, window_by="count:300", tau=0.12, tree_count=20, seed=9
    )
    assert log["log_version"] == 1
    assert log["header"]["schema"] == data.schema
    assert log["header"]["classes"] == ["c0", "c1", "c2"]

    rows = log["rows"]
    assert [row["window_id"] for row in rows] == list(range(3, 10))
    assert all(not row["gap"] for row in rows)
    assert any(row["retrained"] for row in rows)
    for row in rows:
        assert 0.0 <= row["f1_ref"]["macro_f1"] <= 1.0
        assert set(row["per_class_reports"]) == {"ref", "retrain"}


def test_benchmark_file_and_report_bundle(tmp_path):
    data = sudden_stream()
    log_path = str(tmp_path / "log.json")
    out_dir = str(tmp_path / "bundle")
    db.run_benchmark_to_file(
        data, log_path, train_windows=3, window_by="count:300", tau=0.12,
        tree_count=20, seed=9,
    )
    db.write_report_bundle(log_path, out_dir, top_k=2)

    summary = json.loads((tmp_path / "bundle" / "summary.json").read_text())
    assert "reference" in summary and "retraining" in summary
    for name in ("per_class.json", "per_feature.json", "global.svg"):
        assert (tmp_path / "bundle" / name).exists()
    svg = (tmp_path / "bundle" / "global.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
