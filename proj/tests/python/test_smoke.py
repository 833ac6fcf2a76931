"""Smoke tests for the bandgrid Python module."""

import json
import os
from pathlib import Path

import pytest

bandgrid = pytest.importorskip("bandgrid")

FEATURES = [[0.1, 0.9], [0.2, 0.8], [0.9, 0.1], [0.8, 0.2]]
LABELS = [0, 0, 1, 1]


def data_root() -> Path:
    return Path(os.environ.get("BANDGRID_DATA_ROOT", "data"))


def descriptor_path(name: str) -> Path:
    return Path(os.environ.get("BANDGRID_DESCRIPTOR_DIR", "descriptors")) / f"{name}.json"


def dataset_available(name: str) -> bool:
    descriptor = descriptor_path(name)
    if not descriptor.exists():
        return False
    files = json.loads(descriptor.read_text())["files"]
    return all((data_root() / path).exists() for path in files.values())


def fit_toy():
    return bandgrid.Classifier.fit(FEATURES, LABELS, bands=2)


def test_fit_and_predict():
    clf = fit_toy()
    assert clf.variables == 2
    assert clf.bands == 2
    assert clf.categories == 2
    assert clf.predict(FEATURES) == LABELS
    assert clf.predict_one([0.15, 0.85]) == 0
    assert clf.update_count == len(FEATURES) * 2


def test_scores_and_weights():
    clf = fit_toy()
    assert len(clf.scores([0.1, 0.9])) == 2
    assert len(clf.scale_weights(0)) == 2
    assert len(clf.output_weights(1)) == 2
    assert "per_category" in clf.policy


def test_evaluate_report():
    clf = fit_toy()
    report = clf.evaluate(FEATURES, LABELS)
    assert report["correct"] == 4
    assert report["total"] == 4
    assert report["accuracy"] == 1.0
    assert report["confusion"] == [[2, 0], [0, 2]]


def test_save_load_roundtrip(tmp_path):
    clf = fit_toy()
    path = tmp_path / "toy.model.json"
    clf.save(str(path))
    loaded = bandgrid.Classifier.load(str(path))
    assert loaded.predict(FEATURES) == clf.predict(FEATURES)
    assert loaded.bands == clf.bands

    with pytest.raises(bandgrid.ConfigError):
        clf.save(str(path))
    clf.save(str(path), force=True)


def test_error_types():
    assert issubclass(bandgrid.UsageError, ValueError)
    assert issubclass(bandgrid.DataError, ValueError)
    assert issubclass(bandgrid.ConfigError, ValueError)

    with pytest.raises(bandgrid.DataError):
        bandgrid.Classifier.fit([[0.1]], [0, 1], bands=2)
    with pytest.raises(bandgrid.ConfigError):
        bandgrid.Classifier.fit(FEATURES, LABELS, bands=2, strategy="nonsense")


def test_inspect_dump():
    clf = fit_toy()
    dump = clf.inspect()
    assert "Variable 1:" in dump and "Variable 2:" in dump
    assert "Variable 2:" not in clf.inspect(variable=1)


def test_sweep_list():
    entries = bandgrid.sweep(FEATURES, LABELS, 2, 3)
    assert [e["bands"] for e in entries] == [2, 3]
    assert all("correct" in e for e in entries)


def test_descriptor_hash():
    descriptor = descriptor_path("iris")
    if not descriptor.exists():
        pytest.skip("iris descriptor not present")
    digest = bandgrid.descriptor_hash(str(descriptor))
    assert len(digest) == 16
    assert digest == bandgrid.descriptor_hash(str(descriptor))


def test_iris_end_to_end():
    if not dataset_available("iris"):
        pytest.skip("iris data not fetched")
    data = bandgrid.load_dataset(str(descriptor_path("iris")), data_root=str(data_root()))
    assert data["name"] == "iris"
    features = data["train"]["features"]
    labels = data["train"]["labels"]
    assert len(features) == 150

    clf = bandgrid.Classifier.fit(features, labels, bands=12)
    assert clf.update_count == 600
    assert clf.evaluate(features, labels)["correct"] == 145

    corrections = clf.adjust(features, labels, eta=0.01)
    assert corrections == 2
    assert clf.evaluate(features, labels)["correct"] == 145
