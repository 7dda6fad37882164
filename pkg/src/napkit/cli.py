"""Command-line interface: extract, study, serve, convert, synth.

Every command exits 0 on success; failures print the error class name and
message on stderr and exit with that class's distinct code (see errors.py).
"""

from __future__ import annotations

import csv
import functools
import sys
from pathlib import Path

import click

from napkit.aggregate import Aggregation
from napkit.cluster import ClusterParams, Selection
from napkit.errors import NapkitError, ParamError
from napkit.export import export_run
from napkit.metadata import MetadataTable, load_metadata, save_metadata
from napkit.micromodel import load_model, save_model
from napkit.run import analyze_layer, analyze_model, run_study
from napkit.server import make_server
from napkit.synth import make_bars_dataset, make_bars_model, write_assets
from napkit.tensors import fingerprint_tensors, load_tensor, save_tensor, tensor_from_npy
from napkit.version import __version__

_AGG_FLAGS = [m.value for m in Aggregation]
_SELECTION_FLAGS = [s.value for s in Selection]


def napkit_errors(func):
    """Translate package errors into stderr lines + per-class exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except NapkitError as exc:
            click.echo(f"{type(exc).__name__}: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _cluster_params(min_cluster_size: int, min_samples: int, selection: str) -> ClusterParams:
    return ClusterParams(
        min_cluster_size=min_cluster_size,
        min_samples=min_samples,
        selection=Selection.from_flag(selection),
    )


def _load_meta(path: str | None) -> MetadataTable:
    return load_metadata(path) if path else MetadataTable([])


@click.group()
@click.version_option(version=__version__, prog_name="napkit")
def main():
    """Discover groups of inputs that activate network layers alike."""


@main.command()
@click.option("--model", "model_path", default=None, help="Model document (JSON).")
@click.option("--inputs", "inputs_path", default=None, help="Input tensor file (NAPT).")
@click.option("--layer", "layers", multiple=True, help="Layer to analyze (repeatable).")
@click.option("--tensor", "tensor_paths", multiple=True,
              help="Pre-extracted activation tensor file; repeatable, replaces --model mode.")
@click.option("--model-id", default="activations", show_default=True,
              help="Model id when running from --tensor files.")
@click.option("--metadata", "metadata_path", default=None, help="Sample metadata (JSONL).")
@click.option("--agg", default="mean", show_default=True,
              help=f"Spatial aggregation method: one of {', '.join(_AGG_FLAGS)}.")
@click.option("--min-cluster-size", default=5, show_default=True)
@click.option("--min-samples", default=5, show_default=True)
@click.option("--selection", default="leaf", show_default=True,
              help=f"Cluster selection: one of {', '.join(_SELECTION_FLAGS)}.")
@click.option("--assets-dir", default=None, help="Directory of sample images to copy into the export.")
@click.option("--out", "out_dir", required=True, help="Export directory to write.")
@napkit_errors
def extract(model_path, inputs_path, layers, tensor_paths, model_id, metadata_path,
            agg, min_cluster_size, min_samples, selection, assets_dir, out_dir):
    """Extract activation patterns and export them."""
    method = Aggregation.from_flag(agg)
    params = _cluster_params(min_cluster_size, min_samples, selection)
    meta = _load_meta(metadata_path)
    if tensor_paths and (model_path or inputs_path or layers):
        raise ParamError("--tensor mode and --model mode are mutually exclusive")
    if tensor_paths:
        tensors = [load_tensor(p) for p in tensor_paths]
        seen = set()
        for tensor in tensors:
            if tensor.layer_id in seen:
                raise ParamError(f"duplicate layer id {tensor.layer_id!r} across --tensor files")
            seen.add(tensor.layer_id)
        fingerprint = fingerprint_tensors(tensors)
        runs = [
            analyze_layer(t, model_id=model_id, method=method, params=params, meta=meta)
            for t in tensors
        ]
    else:
        if not model_path or not inputs_path or not layers:
            raise ParamError("provide either --tensor files or --model, --inputs and --layer")
        model = load_model(model_path)
        inputs = load_tensor(inputs_path, layer_id="input")
        fingerprint = fingerprint_tensors([inputs])
        model_id = model.model_id
        runs = analyze_model(model, inputs, list(layers),
                             method=method, params=params, meta=meta)
    out = export_run(
        out_dir,
        model_id=model_id,
        layer_runs=runs,
        metadata=meta,
        input_fingerprint=fingerprint,
        assets_dir=assets_dir,
    )
    for run in runs:
        nap_set = run.nap_set
        click.echo(
            f"layer {nap_set.layer_id}: {len(nap_set.naps)} patterns, "
            f"{len(nap_set.noise_sample_ids)} noise / {nap_set.n_samples} samples"
        )
    click.echo(f"export written to {out}")


@main.command()
@click.option("--model", "model_path", required=True, help="Model document (JSON).")
@click.option("--inputs", "inputs_path", required=True, help="Input tensor file (NAPT).")
@click.option("--layer", "layers", multiple=True, required=True, help="Layer (repeatable).")
@click.option("--metadata", "metadata_path", default=None, help="Sample metadata (JSONL).")
@click.option("--agg", "aggs", multiple=True, default=("mean",), show_default=True,
              help=f"Aggregation method (repeatable): one of {', '.join(_AGG_FLAGS)}.")
@click.option("--sizes", default="200,2000", show_default=True,
              help="Comma-separated input subset sizes.")
@click.option("--seed", default=0, show_default=True, help="Subset sampling seed.")
@click.option("--min-cluster-size", default=5, show_default=True)
@click.option("--min-samples", default=5, show_default=True)
@click.option("--selection", default="leaf", show_default=True,
              help=f"Cluster selection: one of {', '.join(_SELECTION_FLAGS)}.")
@click.option("--out", "out_csv", required=True, help="CSV file to write.")
@napkit_errors
def study(model_path, inputs_path, layers, metadata_path, aggs, sizes, seed,
          min_cluster_size, min_samples, selection, out_csv):
    """Count patterns across aggregations and input sizes; write a CSV."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s.strip() != ""]
    except ValueError:
        raise ParamError(f"--sizes must be comma-separated integers, got {sizes!r}") from None
    if not size_list:
        raise ParamError("--sizes must name at least one size")
    model = load_model(model_path)
    inputs = load_tensor(inputs_path, layer_id="input")
    meta = _load_meta(metadata_path)
    rows = run_study(
        model,
        inputs,
        list(layers),
        [Aggregation.from_flag(a) for a in aggs],
        size_list,
        params=_cluster_params(min_cluster_size, min_samples, selection),
        meta=meta,
        seed=seed,
    )
    fields = ["layer", "agg", "n_inputs", "n_naps", "n_noise"]
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    click.echo(f"{len(rows)} study rows written to {out_csv}")


@main.command()
@click.argument("export_dir")
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", default=None, help="Directory of static UI files to serve at /.")
@napkit_errors
def serve(export_dir, port, host, ui_dir):
    """Serve an export directory over HTTP."""
    server = make_server(export_dir, port, host, ui_dir)
    bound_host, bound_port = server.server_address[:2]
    click.echo(f"serving {export_dir} at http://{bound_host}:{bound_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


@main.command()
@click.argument("src")
@click.argument("dst")
@napkit_errors
def convert(src, dst):
    """Convert an NPY v1.0 array file (float32) to the tensor format.

    The format stores no layer name; loaders derive it from the destination
    filename stem, so name DST after the layer.
    """
    tensor = tensor_from_npy(src)
    save_tensor(tensor, dst)
    click.echo(f"wrote {dst} shape {tuple(tensor.shape)}")


@main.command()
@click.option("--out", "out_dir", required=True, help="Directory for the generated files.")
@click.option("--n", "n_samples", default=2000, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--assets/--no-assets", default=False, show_default=True,
              help="Also render per-sample PNGs (requires Pillow).")
@napkit_errors
def synth(out_dir, n_samples, seed, assets):
    """Generate the synthetic bars dataset and its planted toy model."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    images, meta = make_bars_dataset(n_samples, seed, image_refs=assets)
    save_tensor(images, out / "inputs.napt")
    save_metadata(meta, out / "metadata.jsonl")
    save_model(make_bars_model(), out / "model.json")
    click.echo(f"wrote {out / 'inputs.napt'} ({n_samples} samples)")
    click.echo(f"wrote {out / 'metadata.jsonl'}")
    click.echo(f"wrote {out / 'model.json'}")
    if assets:
        count = write_assets(images, out / "assets")
        click.echo(f"wrote {count} images to {out / 'assets'}")


if __name__ == "__main__":
    main()
