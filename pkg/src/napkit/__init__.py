"""napkit: find groups of inputs that activate a network layer alike.

The pipeline: load or compute layer activations, collapse spatial location,
normalize each feature by its largest absolute value, cluster the rows with
a density-based hierarchy, and package each cluster as an activation
pattern — its member samples, persistence score, per-feature statistics, and
joined metadata — ready to export, serve over HTTP, and explore.
"""

from napkit.aggregate import Aggregation, aggregate, feature_names
from napkit.cluster import ClusterParams, Labeling, Selection, cluster_rows
from napkit.errors import (
    DataError,
    FormatError,
    IoError,
    LookupError,
    NapkitError,
    ParamError,
    ShapeError,
)
from napkit.export import ExportStore, LayerRun, export_run, load_export
from napkit.metadata import MetadataTable, SampleMetadata, load_metadata, save_metadata
from napkit.micromodel import MicroModel, load_model, run_model, save_model
from napkit.naps import Nap, NapSet, assemble, filter_naps, quartiles, trace_sample
from napkit.normalize import NormalizedRows, apply_scales, normalize_rows
from napkit.run import analyze_layer, analyze_model, run_study
from napkit.server import make_server, serve_background
from napkit.synth import make_bars_dataset, make_bars_model
from napkit.tensors import (
    ActivationTensor,
    fingerprint_tensors,
    load_tensor,
    save_tensor,
    tensor_from_npy,
)

from napkit.version import __version__

__all__ = [
    "ActivationTensor",
    "Aggregation",
    "ClusterParams",
    "DataError",
    "ExportStore",
    "FormatError",
    "IoError",
    "Labeling",
    "LayerRun",
    "LookupError",
    "MetadataTable",
    "MicroModel",
    "Nap",
    "NapSet",
    "NapkitError",
    "NormalizedRows",
    "ParamError",
    "SampleMetadata",
    "Selection",
    "ShapeError",
    "aggregate",
    "analyze_layer",
    "analyze_model",
    "apply_scales",
    "assemble",
    "cluster_rows",
    "export_run",
    "feature_names",
    "filter_naps",
    "fingerprint_tensors",
    "load_export",
    "load_metadata",
    "load_model",
    "load_tensor",
    "make_bars_dataset",
    "make_bars_model",
    "make_server",
    "normalize_rows",
    "quartiles",
    "run_model",
    "run_study",
    "save_metadata",
    "save_model",
    "save_tensor",
    "serve_background",
    "tensor_from_npy",
    "trace_sample",
    "__version__",
]
