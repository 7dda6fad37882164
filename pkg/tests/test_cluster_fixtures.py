"""Whole-pipeline clustering against stored reference partitions.

The fixtures were produced by scikit-learn's HDBSCAN (an independent
implementation) on datasets screened to have unambiguous spanning trees,
then frozen to JSON. Every fixture must reproduce exactly — identical noise
set and an identical partition of the clustered points — on both the
compiled and the pure-Python kernel backends.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from napkit import _kernels
from napkit._kernels import fallback
from napkit.cluster import ClusterParams, Selection, cluster_rows

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "clustering"
FIXTURES = sorted(FIXTURE_DIR.glob("*.json"))


def load_fixture(path):
    doc = json.loads(path.read_text(encoding="utf-8"))
    points = np.asarray(doc["points"], dtype=np.float64)
    labels = np.asarray(doc["labels"], dtype=np.int64)
    params = ClusterParams(
        min_cluster_size=doc["min_cluster_size"],
        min_samples=doc["min_samples"],
        selection=Selection.from_flag(doc["selection"]),
    )
    return points, labels, params


def assert_same_partition(got, want):
    got, want = np.asarray(got), np.asarray(want)
    assert got.shape == want.shape
    np.testing.assert_array_equal(got < 0, want < 0), "noise sets differ"
    # bijective label mapping over the clustered points
    forward, backward = {}, {}
    for g, w in zip(got, want):
        if g < 0:
            continue
        assert forward.setdefault(int(g), int(w)) == int(w)
        assert backward.setdefault(int(w), int(g)) == int(g)


def test_enough_fixtures_exist():
    assert len(FIXTURES) >= 10


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_matches_reference(path):
    points, want, params = load_fixture(path)
    assert points.shape[0] <= 300 and 2 <= points.shape[1] <= 32
    out = cluster_rows(points, params)
    assert_same_partition(out.labels, want)
    # strengths are valid memberships
    assert out.strengths.min() >= 0.0 and out.strengths.max() <= 1.0
    assert (out.strengths[out.labels < 0] == 0).all()


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_matches_on_fallback_backend(path, monkeypatch):
    monkeypatch.setattr(_kernels, "_impl", fallback)
    points, want, params = load_fixture(path)
    out = cluster_rows(points, params)
    assert_same_partition(out.labels, want)


@pytest.mark.parametrize("path", FIXTURES[:4], ids=lambda p: p.stem)
def test_fixture_labels_are_numbered_consistently_across_backends(path, monkeypatch):
    points, _, params = load_fixture(path)
    compiled = cluster_rows(points, params)
    monkeypatch.setattr(_kernels, "_impl", fallback)
    pure = cluster_rows(points, params)
    np.testing.assert_array_equal(compiled.labels, pure.labels)
    np.testing.assert_allclose(compiled.strengths, pure.strengths, atol=1e-9)
