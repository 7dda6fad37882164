"""A tiny feedforward inference engine.

Supports exactly five layer kinds (dense, conv2d, relu, maxpool2d, flatten)
so that end-to-end runs need no external ML framework. Models live in a
single JSON document with inline weights; see docs/model-format.md for the
schema. Activations can be tapped at any named layer, so placing relu as its
own layer exposes both pre- and post-nonlinearity outputs.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from napkit.errors import DataError, FormatError, IoError, LookupError, ShapeError
from napkit.tensors import ActivationTensor

FORMAT_NAME = "napkit-model"
FORMAT_VERSION = 1

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.\-]*$")


def _check_finite(name: str, *arrays: np.ndarray) -> None:
    for arr in arrays:
        if not np.isfinite(np.asarray(arr)).all():
            raise DataError(f"layer '{name}' has non-finite weights")


@dataclass(frozen=True)
class Dense:
    name: str
    weights: np.ndarray  # (n_in, n_out)
    bias: np.ndarray  # (n_out,)
    kind = "dense"

    def __post_init__(self):
        _check_finite(self.name, self.weights, self.bias)

    def output_shape(self, in_shape):
        if len(in_shape) != 1:
            raise ShapeError(f"dense layer '{self.name}' needs flat input, got {in_shape}")
        if in_shape[0] != self.weights.shape[0]:
            raise ShapeError(
                f"dense layer '{self.name}' expects {self.weights.shape[0]} inputs, got {in_shape[0]}"
            )
        return (self.weights.shape[1],)

    def apply(self, x):
        return x @ self.weights + self.bias


@dataclass(frozen=True)
class Conv2d:
    name: str
    kernels: np.ndarray  # (kh, kw, c_in, c_out)
    bias: np.ndarray  # (c_out,)
    stride: int = 1
    padding: str = "valid"
    kind = "conv2d"

    def __post_init__(self):
        _check_finite(self.name, self.kernels, self.bias)

    def output_shape(self, in_shape):
        if len(in_shape) != 3:
            raise ShapeError(f"conv2d layer '{self.name}' needs (h, w, c) input, got {in_shape}")
        h, w, c = in_shape
        kh, kw, c_in, c_out = self.kernels.shape
        if c != c_in:
            raise ShapeError(f"conv2d layer '{self.name}' expects {c_in} channels, got {c}")
        if self.padding == "same":
            return (math.ceil(h / self.stride), math.ceil(w / self.stride), c_out)
        if h < kh or w < kw:
            raise ShapeError(
                f"conv2d layer '{self.name}': kernel {kh}x{kw} larger than input {h}x{w}"
            )
        return ((h - kh) // self.stride + 1, (w - kw) // self.stride + 1, c_out)

    def apply(self, x):
        kh, kw, _, _ = self.kernels.shape
        if self.padding == "same":
            x = _pad_same(x, kh, kw, self.stride)
        windows = np.lib.stride_tricks.sliding_window_view(x, (kh, kw), axis=(1, 2))
        windows = windows[:, :: self.stride, :: self.stride]
        # windows: (n, oh, ow, c, kh, kw); kernels: (kh, kw, c, f)
        out = np.einsum("nxyckl,klcf->nxyf", windows, self.kernels, optimize=True)
        return out + self.bias


@dataclass(frozen=True)
class Relu:
    name: str
    kind = "relu"

    def output_shape(self, in_shape):
        return in_shape

    def apply(self, x):
        return np.maximum(x, np.float32(0))


@dataclass(frozen=True)
class MaxPool2d:
    name: str
    window: int
    stride: int
    kind = "maxpool2d"

    def output_shape(self, in_shape):
        if len(in_shape) != 3:
            raise ShapeError(f"maxpool2d layer '{self.name}' needs (h, w, c) input, got {in_shape}")
        h, w, c = in_shape
        if h < self.window or w < self.window:
            raise ShapeError(
                f"maxpool2d layer '{self.name}': window {self.window} larger than input {h}x{w}"
            )
        return ((h - self.window) // self.stride + 1, (w - self.window) // self.stride + 1, c)

    def apply(self, x):
        windows = np.lib.stride_tricks.sliding_window_view(
            x, (self.window, self.window), axis=(1, 2)
        )
        windows = windows[:, :: self.stride, :: self.stride]
        return windows.max(axis=(-2, -1))


@dataclass(frozen=True)
class Flatten:
    name: str
    kind = "flatten"

    def output_shape(self, in_shape):
        return (int(np.prod(in_shape)),)

    def apply(self, x):
        return x.reshape(x.shape[0], -1)


Layer = Dense | Conv2d | Relu | MaxPool2d | Flatten


def _pad_same(x, kh, kw, stride):
    """Zero-pad so output is ceil(in/stride); the odd pixel goes bottom/right."""
    _, h, w, _ = x.shape
    out_h, out_w = math.ceil(h / stride), math.ceil(w / stride)
    pad_h = max(0, (out_h - 1) * stride + kh - h)
    pad_w = max(0, (out_w - 1) * stride + kw - w)
    top, left = pad_h // 2, pad_w // 2
    return np.pad(x, ((0, 0), (top, pad_h - top), (left, pad_w - left), (0, 0)))


@dataclass(frozen=True)
class MicroModel:
    """An ordered stack of layers with a declared per-sample input shape."""

    model_id: str
    input_shape: tuple[int, ...]
    layers: tuple[Layer, ...]

    def __post_init__(self):
        seen = set()
        for layer in self.layers:
            if not _NAME_RE.match(layer.name):
                raise FormatError(f"invalid layer name {layer.name!r}")
            if layer.name in seen:
                raise FormatError(f"duplicate layer name {layer.name!r}")
            seen.add(layer.name)
        # Walking the shape chain validates adjacent-layer compatibility.
        self.output_shapes()

    def layer_names(self) -> list[str]:
        return [layer.name for layer in self.layers]

    def output_shapes(self) -> dict[str, tuple[int, ...]]:
        """Per-sample output shape of every layer, in model order."""
        shapes = {}
        shape = self.input_shape
        for layer in self.layers:
            shape = tuple(int(d) for d in layer.output_shape(shape))
            shapes[layer.name] = shape
        return shapes


def run_model(model: MicroModel, inputs: ActivationTensor, layer_name: str) -> ActivationTensor:
    """Forward ``inputs`` through ``model`` and return the named layer's output.

    Deterministic: identical inputs produce bit-identical outputs.
    """
    names = model.layer_names()
    if layer_name not in names:
        raise LookupError(f"model '{model.model_id}' has no layer {layer_name!r}; has {names}")
    if inputs.shape[1:] != model.input_shape:
        raise ShapeError(
            f"input samples have shape {inputs.shape[1:]}, "
            f"model '{model.model_id}' expects {model.input_shape}"
        )
    x = inputs.values
    for layer in model.layers:
        x = layer.apply(x).astype(np.float32, copy=False)
        if layer.name == layer_name:
            return ActivationTensor(layer_id=layer_name, values=x)
    raise AssertionError("unreachable")


def _weights(raw, name: str, field: str, rank: int) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=np.float32)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"layer '{name}': {field} is not a numeric array: {exc}") from exc
    if arr.ndim != rank:
        raise FormatError(f"layer '{name}': {field} must have rank {rank}, got {arr.ndim}")
    if not np.isfinite(arr).all():
        raise DataError(f"layer '{name}': {field} contains non-finite values")
    arr.flags.writeable = False
    return arr


def _parse_layer(entry: dict) -> Layer:
    if not isinstance(entry, dict) or "name" not in entry or "kind" not in entry:
        raise FormatError(f"layer entries need 'name' and 'kind': {entry!r}")
    name, kind = entry["name"], entry["kind"]
    if kind == "dense":
        weights = _weights(entry.get("weights"), name, "weights", 2)
        bias = _weights(entry.get("bias"), name, "bias", 1)
        if bias.shape[0] != weights.shape[1]:
            raise FormatError(f"layer '{name}': bias size {bias.shape[0]} != output size {weights.shape[1]}")
        return Dense(name=name, weights=weights, bias=bias)
    if kind == "conv2d":
        kernels = _weights(entry.get("kernels"), name, "kernels", 4)
        bias = _weights(entry.get("bias"), name, "bias", 1)
        if bias.shape[0] != kernels.shape[3]:
            raise FormatError(f"layer '{name}': bias size {bias.shape[0]} != filter count {kernels.shape[3]}")
        stride = entry.get("stride", 1)
        padding = entry.get("padding", "valid")
        if not isinstance(stride, int) or stride < 1:
            raise FormatError(f"layer '{name}': stride must be a positive integer")
        if padding not in ("valid", "same"):
            raise FormatError(f"layer '{name}': padding must be 'valid' or 'same', got {padding!r}")
        return Conv2d(name=name, kernels=kernels, bias=bias, stride=stride, padding=padding)
    if kind == "relu":
        return Relu(name=name)
    if kind == "maxpool2d":
        window, stride = entry.get("window"), entry.get("stride")
        if not isinstance(window, int) or window < 1:
            raise FormatError(f"layer '{name}': window must be a positive integer")
        if not isinstance(stride, int) or stride < 1:
            raise FormatError(f"layer '{name}': stride must be a positive integer")
        return MaxPool2d(name=name, window=window, stride=stride)
    if kind == "flatten":
        return Flatten(name=name)
    raise FormatError(f"layer '{name}': unknown kind {kind!r}")


def load_model(path: str | Path) -> MicroModel:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid model document: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("format") != FORMAT_NAME:
        raise FormatError(f"{path}: not a {FORMAT_NAME} document")
    if raw.get("version") != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported model format version {raw.get('version')!r}")
    for key in ("model_id", "input_shape", "layers"):
        if key not in raw:
            raise FormatError(f"{path}: missing key {key!r}")
    input_shape = tuple(raw["input_shape"])
    if not input_shape or not all(isinstance(d, int) and d >= 1 for d in input_shape):
        raise FormatError(f"{path}: input_shape must be positive integers, got {raw['input_shape']!r}")
    layers = tuple(_parse_layer(entry) for entry in raw["layers"])
    return MicroModel(model_id=str(raw["model_id"]), input_shape=input_shape, layers=layers)


def save_model(model: MicroModel, path: str | Path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "model_id": model.model_id,
        "input_shape": list(model.input_shape),
        "layers": [],
    }
    for layer in model.layers:
        entry: dict = {"name": layer.name, "kind": layer.kind}
        if isinstance(layer, Dense):
            entry["weights"] = layer.weights.astype(float).tolist()
            entry["bias"] = layer.bias.astype(float).tolist()
        elif isinstance(layer, Conv2d):
            entry["kernels"] = layer.kernels.astype(float).tolist()
            entry["bias"] = layer.bias.astype(float).tolist()
            entry["stride"] = layer.stride
            entry["padding"] = layer.padding
        elif isinstance(layer, MaxPool2d):
            entry["window"] = layer.window
            entry["stride"] = layer.stride
        doc["layers"].append(entry)
    try:
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write model file {path}: {exc}") from exc
