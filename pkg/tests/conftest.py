"""Shared fixtures: a small end-to-end analysis run reused across tests."""

from __future__ import annotations

import numpy as np
import pytest

from napkit import (
    Aggregation,
    ClusterParams,
    MetadataTable,
    SampleMetadata,
    analyze_model,
    export_run,
    fingerprint_tensors,
    make_bars_dataset,
    make_bars_model,
)


@pytest.fixture(scope="session")
def bars_small():
    """A 160-image synthetic dataset with its planted model."""
    inputs, meta = make_bars_dataset(160, seed=11)
    model = make_bars_model()
    return inputs, meta, model


@pytest.fixture(scope="session")
def layer_runs_small(bars_small):
    """Analysis results for two layers of the small dataset."""
    inputs, meta, model = bars_small
    return analyze_model(
        model,
        inputs,
        ["relu1", "dense"],
        method=Aggregation.AMOUNT,
        params=ClusterParams(),
        meta=meta,
    )


@pytest.fixture(scope="session")
def export_dir_session(tmp_path_factory, bars_small, layer_runs_small, monkeypatch_session):
    """A fully exported run directory, written once per session."""
    inputs, meta, model = bars_small
    out = tmp_path_factory.mktemp("export") / "run"
    monkeypatch_session.setenv("SOURCE_DATE_EPOCH", "1700000000")
    export_run(
        out,
        model_id="bars",
        layer_runs=layer_runs_small,
        metadata=meta,
        input_fingerprint=fingerprint_tensors([inputs]),
    )
    return out


@pytest.fixture(scope="session")
def monkeypatch_session():
    patcher = pytest.MonkeyPatch()
    yield patcher
    patcher.undo()


@pytest.fixture()
def tiny_meta():
    """Six hand-written metadata records with one misprediction."""
    records = {
        i: SampleMetadata(
            sample_id=i,
            label=("cat" if i % 2 == 0 else "dog"),
            prediction=("cat" if i != 3 else "bird"),
            image_ref=f"{i}.png",
        )
        for i in range(6)
    }
    return MetadataTable(records)


def assert_f32(array: np.ndarray) -> None:
    assert array.dtype == np.float32
