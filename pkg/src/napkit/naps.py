"""Activation patterns: clustered sample groups with statistics and metadata.

A Nap is one cluster of samples that activate a layer similarly: its members
(ordered by how strongly they belong), its persistence (the cluster's
stability score), five-number statistics per feature over the members'
normalized rows, and a summary of the joined sample metadata. A NapSet is
one layer's full result: patterns sorted by descending persistence plus the
leftover noise samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from napkit.cluster import ClusterParams, Labeling
from napkit.errors import LookupError, ParamError, ShapeError
from napkit.metadata import MetadataTable
from napkit.normalize import NormalizedRows


def quartiles(values) -> tuple[float, float, float]:
    """(q1, median, q3) with linear interpolation on the sorted values."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ShapeError(f"expected a flat list of values, got rank {values.ndim}")
    if values.size == 0:
        raise ParamError("cannot take quartiles of an empty list")
    q1, med, q3 = np.quantile(values, [0.25, 0.5, 0.75], method="linear")
    return float(q1), float(med), float(q3)


@dataclass(frozen=True)
class FeatureStats:
    """Per-feature five-number summary plus mean, over a Nap's member rows."""

    mean: tuple[float, ...]
    minimum: tuple[float, ...]
    maximum: tuple[float, ...]
    q1: tuple[float, ...]
    median: tuple[float, ...]
    q3: tuple[float, ...]

    @classmethod
    def from_rows(cls, rows: np.ndarray) -> "FeatureStats":
        if rows.ndim != 2 or rows.shape[0] == 0:
            raise ShapeError(f"need a non-empty rank-2 member matrix, got {rows.shape}")
        q1, med, q3 = np.quantile(rows, [0.25, 0.5, 0.75], axis=0, method="linear")
        as_tuple = lambda a: tuple(float(x) for x in a)  # noqa: E731
        return cls(
            mean=as_tuple(rows.mean(axis=0)),
            minimum=as_tuple(rows.min(axis=0)),
            maximum=as_tuple(rows.max(axis=0)),
            q1=as_tuple(q1),
            median=as_tuple(med),
            q3=as_tuple(q3),
        )


@dataclass(frozen=True)
class Nap:
    nap_id: str
    layer_id: str
    cluster_label: int
    member_sample_ids: tuple[int, ...]
    member_strengths: tuple[float, ...]  # aligned with member_sample_ids
    persistence: float
    stats: FeatureStats
    label_histogram: dict[str, int]
    prediction_histogram: dict[str, int]
    misprediction_count: int

    @property
    def n_members(self) -> int:
        return len(self.member_sample_ids)


@dataclass(frozen=True)
class NapSet:
    model_id: str
    layer_id: str
    aggregation: str  # flag form, e.g. "mean"
    params: ClusterParams
    feature_names: tuple[str, ...]
    naps: tuple[Nap, ...]
    noise_sample_ids: tuple[int, ...]
    n_samples: int

    def nap_by_id(self, nap_id: str) -> Nap:
        for nap in self.naps:
            if nap.nap_id == nap_id:
                return nap
        raise LookupError(f"no pattern with id {nap_id!r} in layer {self.layer_id!r}")

    def membership(self, sample_id: int) -> Nap | None:
        """The Nap containing the sample, or None when it is noise."""
        for nap in self.naps:
            if sample_id in nap.member_sample_ids:
                return nap
        return None


def assemble(
    labeling: Labeling,
    norm: NormalizedRows,
    meta: MetadataTable,
    params: ClusterParams,
    *,
    model_id: str,
    layer_id: str,
    aggregation: str,
    feature_names: tuple[str, ...] | list[str],
) -> NapSet:
    """Join clustering output with normalized rows and metadata into a NapSet.

    Patterns are sorted by descending persistence (ties: ascending cluster
    label); within each pattern, members sort by descending membership
    strength (ties: ascending sample id).
    """
    n = len(labeling.labels)
    if norm.rows.shape[0] != n:
        raise ShapeError(f"{n} labels for {norm.rows.shape[0]} rows")
    if len(feature_names) != norm.rows.shape[1]:
        raise ShapeError(
            f"{len(feature_names)} feature names for {norm.rows.shape[1]} columns"
        )
    naps = []
    for label in range(labeling.n_clusters):
        member_idx = labeling.members(label)
        strengths = labeling.strengths[member_idx]
        order = np.lexsort((member_idx, -strengths))  # strength desc, then id asc
        member_idx = member_idx[order]
        label_hist: dict[str, int] = {}
        pred_hist: dict[str, int] = {}
        mispredictions = 0
        for sid in member_idx:
            record = meta.get(int(sid))
            if record is None:
                continue
            if record.label is not None:
                label_hist[record.label] = label_hist.get(record.label, 0) + 1
            if record.prediction is not None:
                pred_hist[record.prediction] = pred_hist.get(record.prediction, 0) + 1
            if record.mispredicted:
                mispredictions += 1
        naps.append(
            Nap(
                nap_id=f"{model_id}/{layer_id}/{label}",
                layer_id=layer_id,
                cluster_label=label,
                member_sample_ids=tuple(int(s) for s in member_idx),
                member_strengths=tuple(float(s) for s in labeling.strengths[member_idx]),
                persistence=float(labeling.stabilities[label]),
                stats=FeatureStats.from_rows(norm.rows[member_idx]),
                label_histogram=dict(sorted(label_hist.items())),
                prediction_histogram=dict(sorted(pred_hist.items())),
                misprediction_count=mispredictions,
            )
        )
    naps.sort(key=lambda nap: (-nap.persistence, nap.cluster_label))
    return NapSet(
        model_id=model_id,
        layer_id=layer_id,
        aggregation=aggregation,
        params=params,
        feature_names=tuple(feature_names),
        naps=tuple(naps),
        noise_sample_ids=tuple(int(s) for s in np.flatnonzero(labeling.labels < 0)),
        n_samples=n,
    )


def filter_naps(
    nap_set: NapSet,
    *,
    label: str | None = None,
    prediction: str | None = None,
    mispredicted: bool | None = None,
) -> NapSet:
    """A view keeping only patterns with at least one member matching all
    given criteria. Ordering is preserved; the underlying set is untouched."""

    def keep(nap: Nap) -> bool:
        if label is not None and nap.label_histogram.get(label, 0) < 1:
            return False
        if prediction is not None and nap.prediction_histogram.get(prediction, 0) < 1:
            return False
        if mispredicted is True and nap.misprediction_count < 1:
            return False
        if mispredicted is False and nap.misprediction_count >= nap.n_members:
            return False
        return True

    return NapSet(
        model_id=nap_set.model_id,
        layer_id=nap_set.layer_id,
        aggregation=nap_set.aggregation,
        params=nap_set.params,
        feature_names=nap_set.feature_names,
        naps=tuple(nap for nap in nap_set.naps if keep(nap)),
        noise_sample_ids=nap_set.noise_sample_ids,
        n_samples=nap_set.n_samples,
    )


def trace_sample(sample_id: int, nap_sets: list[NapSet]) -> list[tuple[str, str]]:
    """(layer_id, nap_id) per layer where the sample is a pattern member.

    ``nap_sets`` must be in model layer order; layers where the sample is
    noise are omitted. A sample unknown to every layer raises LookupError.
    """
    if not any(0 <= sample_id < s.n_samples for s in nap_sets):
        raise LookupError(f"sample {sample_id} not present in any layer")
    trace = []
    for nap_set in nap_sets:
        nap = nap_set.membership(sample_id)
        if nap is not None:
            trace.append((nap_set.layer_id, nap.nap_id))
    return trace
