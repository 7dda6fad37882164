"""End-to-end pipeline orchestration: activations -> patterns, plus studies.

One layer's journey: aggregate spatial locations away, normalize per
feature, cluster the rows, join metadata, and wrap the result (with the
scales that produced it) ready for export. Studies rerun that pipeline over
input subsets of growing size to show how pattern counts respond.
"""

from __future__ import annotations

import numpy as np

from napkit.aggregate import Aggregation, aggregate, feature_names
from napkit.cluster import ClusterParams, cluster_rows
from napkit.errors import LookupError, ParamError
from napkit.export import LayerRun
from napkit.metadata import MetadataTable, SampleMetadata
from napkit.micromodel import MicroModel, run_model
from napkit.naps import assemble
from napkit.normalize import normalize_rows
from napkit.tensors import ActivationTensor


def analyze_layer(
    tensor: ActivationTensor,
    *,
    model_id: str,
    method: Aggregation,
    params: ClusterParams,
    meta: MetadataTable | None = None,
) -> LayerRun:
    """Run aggregate -> normalize -> cluster -> assemble for one layer.

    ``meta`` may be omitted when no labels, predictions, or image refs are
    known; histograms come out empty in that case.
    """
    if meta is None:
        meta = MetadataTable(())
    rows = aggregate(tensor, method)
    norm = normalize_rows(rows)
    labeling = cluster_rows(norm.rows, params)
    nap_set = assemble(
        labeling,
        norm,
        meta,
        params,
        model_id=model_id,
        layer_id=tensor.layer_id,
        aggregation=method.value,
        feature_names=feature_names(tensor, method),
    )
    return LayerRun(nap_set=nap_set, scales=norm.scales)


def analyze_model(
    model: MicroModel,
    inputs: ActivationTensor,
    layer_names: list[str],
    *,
    method: Aggregation,
    params: ClusterParams,
    meta: MetadataTable | None = None,
) -> list[LayerRun]:
    """Analyze the named layers of a model, returned in model order."""
    order = {name: i for i, name in enumerate(model.layer_names())}
    for name in layer_names:
        if name not in order:
            raise LookupError(
                f"model '{model.model_id}' has no layer {name!r}; has {model.layer_names()}"
            )
    runs = []
    for name in sorted(set(layer_names), key=order.__getitem__):
        activations = run_model(model, inputs, name)
        runs.append(
            analyze_layer(
                activations, model_id=model.model_id, method=method, params=params, meta=meta
            )
        )
    return runs


def stratified_subset(
    n_total: int, size: int, meta: MetadataTable, seed: int
) -> np.ndarray:
    """Deterministic subset of row indices, proportional per label group.

    Samples without a label form their own group. Group quotas follow the
    largest-remainder rule so they sum exactly to ``size``; indices come back
    sorted for reproducible row order.
    """
    if size > n_total:
        raise ParamError(f"subset size {size} exceeds available samples {n_total}")
    if size < 1:
        raise ParamError(f"subset size must be >= 1, got {size}")
    rng = np.random.default_rng(seed)
    groups: dict[str, list[int]] = {}
    for i in range(n_total):
        record = meta.get(i)
        label = record.label if record is not None and record.label is not None else ""
        groups.setdefault(label, []).append(i)
    names = sorted(groups)
    exact = {g: size * len(groups[g]) / n_total for g in names}
    quota = {g: int(exact[g]) for g in names}
    leftover = size - sum(quota.values())
    by_remainder = sorted(names, key=lambda g: (-(exact[g] - quota[g]), g))
    for g in by_remainder[:leftover]:
        quota[g] += 1
    chosen: list[int] = []
    for g in names:
        members = np.asarray(groups[g], dtype=np.int64)
        take = min(quota[g], len(members))
        chosen.extend(rng.permutation(members)[:take].tolist())
    # Rounding can under-fill when tiny groups cap out; top up from the rest.
    if len(chosen) < size:
        pool = np.asarray(sorted(set(range(n_total)) - set(chosen)), dtype=np.int64)
        chosen.extend(rng.permutation(pool)[: size - len(chosen)].tolist())
    return np.asarray(sorted(chosen), dtype=np.int64)


def subset_metadata(meta: MetadataTable, indices: np.ndarray) -> MetadataTable:
    """Re-key metadata records onto subset row positions."""
    records = []
    for new_id, old_id in enumerate(indices.tolist()):
        old = meta.get(int(old_id))
        if old is not None:
            records.append(
                SampleMetadata(
                    sample_id=new_id,
                    label=old.label,
                    prediction=old.prediction,
                    image_ref=old.image_ref,
                )
            )
    return MetadataTable(records)


def run_study(
    model: MicroModel,
    inputs: ActivationTensor,
    layer_names: list[str],
    methods: list[Aggregation],
    sizes: list[int],
    *,
    params: ClusterParams,
    meta: MetadataTable | None = None,
    seed: int,
) -> list[dict]:
    """Pattern counts per (layer, aggregation, subset size).

    Every size uses one fixed subset (shared across layers and methods) so
    the cells are comparable; rows come out in layer -> method -> size order.
    """
    if meta is None:
        meta = MetadataTable(())
    n_total = inputs.n_samples
    subsets = {size: stratified_subset(n_total, size, meta, seed) for size in sizes}
    order = {name: i for i, name in enumerate(model.layer_names())}
    rows = []
    for layer_name in sorted(set(layer_names), key=order.__getitem__):
        full_activations = run_model(model, inputs, layer_name)
        for method in methods:
            for size in sizes:
                idx = subsets[size]
                sub_tensor = ActivationTensor(
                    layer_id=layer_name, values=full_activations.values[idx]
                )
                run = analyze_layer(
                    sub_tensor,
                    model_id=model.model_id,
                    method=method,
                    params=params,
                    meta=subset_metadata(meta, idx),
                )
                rows.append(
                    {
                        "layer": layer_name,
                        "agg": method.value,
                        "n_inputs": size,
                        "n_naps": len(run.nap_set.naps),
                        "n_noise": len(run.nap_set.noise_sample_ids),
                    }
                )
    return rows
