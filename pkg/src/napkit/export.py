"""On-disk run layout: manifest, per-layer pattern files, scales, metadata.

Layout under the export root:

    manifest.json        run manifest (model, layer order, params, fingerprint)
    naps/{layer}.json    one NapSet per analyzed layer
    scales/{layer}.bin   normalization divisors, raw little-endian float32
    metadata.jsonl       sample metadata records
    assets/...           optional opaque image files served by reference

All JSON is written canonically (sorted keys, two-space indent, trailing
newline), so identical runs export byte-identical trees. The manifest's
created_at honors the SOURCE_DATE_EPOCH environment variable; set it to make
the manifest reproducible as well. Non-finite persistence scores (possible
when duplicate rows collapse at zero distance) are stored as null and read
back as infinity.
"""

from __future__ import annotations

import json
import math
import os
import shutil
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from napkit.cluster import ClusterParams, Selection
from napkit.errors import FormatError, IoError
from napkit.metadata import MetadataTable, load_metadata, save_metadata
from napkit.naps import FeatureStats, Nap, NapSet

FORMAT_NAME = "napkit-export"
FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, 2-space indent, one trailing
    newline, non-finite numbers as null."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


@dataclass(frozen=True)
class LayerRun:
    """One analyzed layer: its NapSet plus the scales that normalized it."""

    nap_set: NapSet
    scales: np.ndarray  # float32 (n_features,)


def nap_record(nap: Nap) -> dict:
    return {
        "nap_id": nap.nap_id,
        "layer_id": nap.layer_id,
        "cluster_label": nap.cluster_label,
        "member_sample_ids": list(nap.member_sample_ids),
        "member_strengths": list(nap.member_strengths),
        "n_members": nap.n_members,
        "persistence": nap.persistence,
        "stats": {
            "mean": list(nap.stats.mean),
            "min": list(nap.stats.minimum),
            "max": list(nap.stats.maximum),
            "q1": list(nap.stats.q1),
            "median": list(nap.stats.median),
            "q3": list(nap.stats.q3),
        },
        "label_histogram": nap.label_histogram,
        "prediction_histogram": nap.prediction_histogram,
        "misprediction_count": nap.misprediction_count,
    }


def _params_record(params: ClusterParams) -> dict:
    return {
        "min_cluster_size": params.min_cluster_size,
        "min_samples": params.min_samples,
        "selection": params.selection.value,
    }


def nap_set_record(nap_set: NapSet) -> dict:
    return {
        "model_id": nap_set.model_id,
        "layer_id": nap_set.layer_id,
        "aggregation": nap_set.aggregation,
        "params": _params_record(nap_set.params),
        "feature_names": list(nap_set.feature_names),
        "n_samples": nap_set.n_samples,
        "naps": [nap_record(nap) for nap in nap_set.naps],
        "noise_sample_ids": list(nap_set.noise_sample_ids),
    }


def _created_at() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    stamp = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(stamp))


def export_run(
    out_dir: str | Path,
    *,
    model_id: str,
    layer_runs: list[LayerRun],
    metadata: MetadataTable,
    input_fingerprint: str,
    assets_dir: str | Path | None = None,
) -> Path:
    """Write a full run to disk; returns the export root."""
    out = Path(out_dir)
    try:
        (out / "naps").mkdir(parents=True, exist_ok=True)
        (out / "scales").mkdir(parents=True, exist_ok=True)
        layer_entries = []
        for order, run in enumerate(layer_runs):
            layer_id = run.nap_set.layer_id
            naps_file = f"naps/{layer_id}.json"
            scales_file = f"scales/{layer_id}.bin"
            (out / naps_file).write_text(
                canonical_json(nap_set_record(run.nap_set)), encoding="utf-8"
            )
            scales = np.ascontiguousarray(run.scales, dtype="<f4")
            (out / scales_file).write_bytes(scales.tobytes())
            layer_entries.append(
                {
                    "layer_id": layer_id,
                    "order": order,
                    "aggregation": run.nap_set.aggregation,
                    "params": _params_record(run.nap_set.params),
                    "naps_file": naps_file,
                    "scales_file": scales_file,
                    "n_features": len(run.nap_set.feature_names),
                    "n_samples": run.nap_set.n_samples,
                    "n_naps": len(run.nap_set.naps),
                    "n_noise": len(run.nap_set.noise_sample_ids),
                }
            )
        manifest = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "model_id": model_id,
            "created_at": _created_at(),
            "input_fingerprint": input_fingerprint,
            "layers": layer_entries,
        }
        (out / "manifest.json").write_text(canonical_json(manifest), encoding="utf-8")
        save_metadata(metadata, out / "metadata.jsonl")
        if assets_dir is not None:
            src = Path(assets_dir)
            dst = out / "assets"
            if src.resolve() != dst.resolve():
                shutil.copytree(src, dst, dirs_exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot write export to {out}: {exc}") from exc
    return out


def _nap_from_record(record: dict) -> Nap:
    try:
        stats = record["stats"]
        persistence = record["persistence"]
        return Nap(
            nap_id=record["nap_id"],
            layer_id=record["layer_id"],
            cluster_label=int(record["cluster_label"]),
            member_sample_ids=tuple(int(s) for s in record["member_sample_ids"]),
            member_strengths=tuple(float(s) for s in record["member_strengths"]),
            persistence=float("inf") if persistence is None else float(persistence),
            stats=FeatureStats(
                mean=tuple(stats["mean"]),
                minimum=tuple(stats["min"]),
                maximum=tuple(stats["max"]),
                q1=tuple(stats["q1"]),
                median=tuple(stats["median"]),
                q3=tuple(stats["q3"]),
            ),
            label_histogram=dict(record["label_histogram"]),
            prediction_histogram=dict(record["prediction_histogram"]),
            misprediction_count=int(record["misprediction_count"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed pattern record: {exc}") from exc


def nap_set_from_record(record: dict) -> NapSet:
    try:
        params = record["params"]
        return NapSet(
            model_id=record["model_id"],
            layer_id=record["layer_id"],
            aggregation=record["aggregation"],
            params=ClusterParams(
                min_cluster_size=int(params["min_cluster_size"]),
                min_samples=int(params["min_samples"]),
                selection=Selection.from_flag(params["selection"]),
            ),
            feature_names=tuple(record["feature_names"]),
            naps=tuple(_nap_from_record(r) for r in record["naps"]),
            noise_sample_ids=tuple(int(s) for s in record["noise_sample_ids"]),
            n_samples=int(record["n_samples"]),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed pattern file: {exc}") from exc


@dataclass(frozen=True)
class ExportStore:
    """An export directory loaded into memory (immutable, safe to share)."""

    root: Path
    manifest: dict
    nap_sets: dict[str, NapSet]  # by layer_id, in manifest order
    scales: dict[str, np.ndarray]
    metadata: MetadataTable

    @property
    def model_id(self) -> str:
        return self.manifest["model_id"]

    @property
    def layer_ids(self) -> tuple[str, ...]:
        return tuple(entry["layer_id"] for entry in self.manifest["layers"])

    def ordered_nap_sets(self) -> list[NapSet]:
        return [self.nap_sets[layer_id] for layer_id in self.layer_ids]


def load_export(root: str | Path) -> ExportStore:
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise FormatError(f"{root} is not an export directory (no manifest.json)")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest_path}: invalid manifest: {exc}") from exc
    if not isinstance(manifest, dict) or manifest.get("format") != FORMAT_NAME:
        raise FormatError(f"{manifest_path}: not a {FORMAT_NAME} manifest")
    if manifest.get("version") != FORMAT_VERSION:
        raise FormatError(f"{manifest_path}: unsupported version {manifest.get('version')!r}")
    nap_sets: dict[str, NapSet] = {}
    scales: dict[str, np.ndarray] = {}
    for entry in manifest.get("layers", []):
        layer_id = entry["layer_id"]
        naps_path = root / entry["naps_file"]
        scales_path = root / entry["scales_file"]
        if not naps_path.is_file() or not scales_path.is_file():
            raise FormatError(f"manifest references missing files for layer {layer_id!r}")
        try:
            record = json.loads(naps_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{naps_path}: invalid pattern file: {exc}") from exc
        nap_sets[layer_id] = nap_set_from_record(record)
        scales[layer_id] = np.frombuffer(scales_path.read_bytes(), dtype="<f4")
    meta_path = root / "metadata.jsonl"
    metadata = load_metadata(meta_path) if meta_path.is_file() else MetadataTable([])
    return ExportStore(
        root=root, manifest=manifest, nap_sets=nap_sets, scales=scales, metadata=metadata
    )
