"""Micro-inference engine against an independent naive forward pass.

The oracle below recomputes every layer with plain Python loops in float64,
sharing no code with the implementation under test. Random-model agreement
within 1e-5 is the primary evidence; hand-computed examples pin the exact
conventions (padding side, pooling window validity, channel order).
"""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from napkit.errors import DataError, FormatError, LookupError, ShapeError
from napkit.micromodel import (
    Conv2d,
    Dense,
    Flatten,
    MaxPool2d,
    MicroModel,
    Relu,
    load_model,
    run_model,
    save_model,
)
from napkit.tensors import ActivationTensor

# --- independent oracle ----------------------------------------------------

def oracle_dense(x, weights, bias):
    n, d_in = x.shape
    d_out = len(bias)
    out = np.zeros((n, d_out), dtype=np.float64)
    for i in range(n):
        for j in range(d_out):
            acc = float(bias[j])
            for k in range(d_in):
                acc += float(x[i, k]) * float(weights[k, j])
            out[i, j] = acc
    return out


def oracle_relu(x):
    return np.where(np.asarray(x, dtype=np.float64) > 0, x, 0.0).astype(np.float64)


def oracle_pad_same(x, kh, kw, sh, sw):
    n, h, w, c = x.shape
    out_h = math.ceil(h / sh)
    out_w = math.ceil(w / sw)
    pad_h = max((out_h - 1) * sh + kh - h, 0)
    pad_w = max((out_w - 1) * sw + kw - w, 0)
    top, left = pad_h // 2, pad_w // 2
    padded = np.zeros((n, h + pad_h, w + pad_w, c), dtype=np.float64)
    padded[:, top:top + h, left:left + w, :] = x
    return padded


def oracle_conv(x, kernels, bias, stride, padding):
    x = np.asarray(x, dtype=np.float64)
    kh, kw, c_in, c_out = kernels.shape
    if padding == "same":
        x = oracle_pad_same(x, kh, kw, stride, stride)
    n, h, w, _ = x.shape
    out_h = (h - kh) // stride + 1
    out_w = (w - kw) // stride + 1
    out = np.zeros((n, out_h, out_w, c_out), dtype=np.float64)
    for i in range(n):
        for y in range(out_h):
            for xx in range(out_w):
                for f in range(c_out):
                    acc = float(bias[f])
                    for dy in range(kh):
                        for dx in range(kw):
                            for c in range(c_in):
                                acc += (
                                    float(x[i, y * stride + dy, xx * stride + dx, c])
                                    * float(kernels[dy, dx, c, f])
                                )
                    out[i, y, xx, f] = acc
    return out


def oracle_maxpool(x, window, stride):
    x = np.asarray(x, dtype=np.float64)
    n, h, w, c = x.shape
    out_h = (h - window) // stride + 1
    out_w = (w - window) // stride + 1
    out = np.zeros((n, out_h, out_w, c), dtype=np.float64)
    for i in range(n):
        for y in range(out_h):
            for xx in range(out_w):
                for ch in range(c):
                    best = -np.inf
                    for dy in range(window):
                        for dx in range(window):
                            best = max(best, float(x[i, y * stride + dy, xx * stride + dx, ch]))
                    out[i, y, xx, ch] = best
    return out


def oracle_forward(model, x, upto):
    for layer in model.layers:
        if layer.kind == "dense":
            x = oracle_dense(x, layer.weights, layer.bias)
        elif layer.kind == "relu":
            x = oracle_relu(x)
        elif layer.kind == "conv2d":
            x = oracle_conv(x, layer.kernels, layer.bias, layer.stride, layer.padding)
        elif layer.kind == "maxpool2d":
            x = oracle_maxpool(x, layer.window, layer.stride)
        elif layer.kind == "flatten":
            x = np.asarray(x, dtype=np.float64).reshape(x.shape[0], -1)
        else:  # pragma: no cover
            raise AssertionError(layer.kind)
        if layer.name == upto:
            return x
    raise AssertionError(f"layer {upto} not found")


# --- hand examples ---------------------------------------------------------

def test_dense_identity_passes_values_through():
    w = np.eye(3, dtype=np.float32)
    model = MicroModel("m", (3,), (Dense("d", w, np.zeros(3, dtype=np.float32)),))
    x = ActivationTensor("input", np.array([[1.0, -2.0, 3.0]], dtype=np.float32))
    out = run_model(model, x, "d")
    assert np.allclose(out.values, [[1.0, -2.0, 3.0]])


def test_relu_clamps_negatives():
    model = MicroModel("m", (3,), (Relu("r"),))
    x = ActivationTensor("input", np.array([[1.0, -2.0, 0.0]], dtype=np.float32))
    assert np.array_equal(run_model(model, x, "r").values, [[1.0, 0.0, 0.0]])


def test_conv_average_kernel():
    # 2x2 all-0.25 kernel over [[1,2],[3,4]] -> single output 2.5.
    k = np.full((2, 2, 1, 1), 0.25, dtype=np.float32)
    model = MicroModel("m", (2, 2, 1), (Conv2d("c", k, np.zeros(1, dtype=np.float32)),))
    x = ActivationTensor("input", np.array([[[[1.0], [2.0]], [[3.0], [4.0]]]], dtype=np.float32))
    out = run_model(model, x, "c")
    assert out.shape == (1, 1, 1, 1)
    assert out.values[0, 0, 0, 0] == pytest.approx(2.5)


def test_same_padding_pads_bottom_right_on_odd_deficit():
    # 3x3 input, 2x2 kernel, stride 1, "same": output stays 3x3 and the
    # single missing row/column is added at the bottom/right, so the
    # top-left output cell sees only real values.
    k = np.ones((2, 2, 1, 1), dtype=np.float32)
    model = MicroModel("m", (3, 3, 1), (Conv2d("c", k, np.zeros(1, dtype=np.float32), padding="same"),))
    img = np.arange(9, dtype=np.float32).reshape(1, 3, 3, 1)
    out = run_model(model, ActivationTensor("input", img), "c").values
    assert out.shape == (1, 3, 3, 1)
    assert out[0, 0, 0, 0] == 0 + 1 + 3 + 4  # full window, no padding used
    assert out[0, 2, 2, 0] == 8.0            # bottom-right sees 3 padded zeros


def test_maxpool_drops_incomplete_windows():
    model = MicroModel("m", (3, 3, 1), (MaxPool2d("p", window=2, stride=2),))
    img = np.arange(9, dtype=np.float32).reshape(1, 3, 3, 1)
    out = run_model(model, ActivationTensor("input", img), "p")
    assert out.shape == (1, 1, 1, 1)  # the ragged right/bottom edge is dropped
    assert out.values[0, 0, 0, 0] == 4.0


def test_strided_conv_output_shape():
    k = np.ones((3, 3, 2, 5), dtype=np.float32)
    conv = Conv2d("c", k, np.zeros(5, dtype=np.float32), stride=2)
    assert conv.output_shape((8, 8, 2)) == (3, 3, 5)
    assert conv.output_shape((9, 9, 2)) == (4, 4, 5)


def test_flatten_row_major_order():
    model = MicroModel("m", (2, 2, 1), (Flatten("f"),))
    img = np.arange(4, dtype=np.float32).reshape(1, 2, 2, 1)
    out = run_model(model, ActivationTensor("input", img), "f")
    assert np.array_equal(out.values, [[0.0, 1.0, 2.0, 3.0]])


# --- random models vs oracle ----------------------------------------------

def random_model(seed):
    rng = np.random.default_rng(seed)
    h = int(rng.integers(6, 12))
    c_in = int(rng.integers(1, 4))
    input_shape = (h, h, c_in)
    layers = []
    shape = input_shape
    n_layers = int(rng.integers(1, 4))
    for idx in range(n_layers):
        if len(shape) == 1:
            d_out = int(rng.integers(2, 8))
            layers.append(Dense(
                f"l{idx}",
                rng.normal(size=(shape[0], d_out)).astype(np.float32),
                rng.normal(size=d_out).astype(np.float32),
            ))
            shape = (d_out,)
            continue
        choice = rng.choice(["conv", "relu", "pool", "flatten"])
        if choice == "conv" and min(shape[0], shape[1]) >= 3:
            kside = int(rng.choice([1, 3]))
            stride = int(rng.choice([1, 2]))
            padding = str(rng.choice(["valid", "same"]))
            c_out = int(rng.integers(1, 5))
            layers.append(Conv2d(
                f"l{idx}",
                rng.normal(size=(kside, kside, shape[2], c_out)).astype(np.float32),
                rng.normal(size=c_out).astype(np.float32),
                stride=stride,
                padding=padding,
            ))
        elif choice == "pool" and min(shape[0], shape[1]) >= 2:
            layers.append(MaxPool2d(f"l{idx}", window=2, stride=2))
        elif choice == "flatten":
            layers.append(Flatten(f"l{idx}"))
        else:
            layers.append(Relu(f"l{idx}"))
        shape = layers[-1].output_shape(shape)
    return MicroModel(f"rand{seed}", input_shape, tuple(layers))


@pytest.mark.parametrize("seed", range(40))
def test_random_models_match_naive_oracle(seed):
    model = random_model(seed)
    rng = np.random.default_rng(seed + 1000)
    x = rng.normal(size=(3, *model.input_shape)).astype(np.float32)
    for name in model.layer_names():
        got = run_model(model, ActivationTensor("input", x), name).values
        want = oracle_forward(model, x.astype(np.float64), name)
        assert got.shape == tuple(want.shape)
        np.testing.assert_allclose(got, want, rtol=1e-5, atol=1e-5)


def test_inference_is_bit_deterministic():
    model = random_model(7)
    x = np.random.default_rng(0).normal(size=(4, *model.input_shape)).astype(np.float32)
    last = model.layer_names()[-1]
    a = run_model(model, ActivationTensor("input", x), last).values
    b = run_model(model, ActivationTensor("input", x), last).values
    assert a.tobytes() == b.tobytes()


def test_dense_linearity_under_input_scaling():
    w = np.random.default_rng(5).normal(size=(6, 4)).astype(np.float32)
    model = MicroModel("m", (6,), (Dense("d", w, np.zeros(4, dtype=np.float32)),))
    x = np.random.default_rng(6).normal(size=(2, 6)).astype(np.float32)
    base = run_model(model, ActivationTensor("input", x), "d").values
    scaled = run_model(model, ActivationTensor("input", 3.0 * x), "d").values
    np.testing.assert_allclose(scaled, 3.0 * base, rtol=1e-5)


# --- errors ----------------------------------------------------------------

def test_unknown_layer_raises_lookup_error():
    model = random_model(0)
    x = np.zeros((1, *model.input_shape), dtype=np.float32)
    with pytest.raises(LookupError):
        run_model(model, ActivationTensor("input", x), "no-such-layer")


def test_wrong_input_shape_raises_shape_error():
    model = MicroModel("m", (3,), (Relu("r"),))
    with pytest.raises(ShapeError):
        run_model(model, ActivationTensor("input", np.zeros((1, 4), dtype=np.float32)), "r")


def test_model_rejects_inconsistent_layer_chain():
    with pytest.raises(ShapeError):
        MicroModel("m", (3,), (Dense("d", np.eye(4, dtype=np.float32), np.zeros(4, dtype=np.float32)),))


def test_model_rejects_duplicate_layer_names():
    with pytest.raises(FormatError):
        MicroModel("m", (3,), (Relu("a"), Relu("a")))


def test_model_rejects_invalid_layer_names():
    with pytest.raises(FormatError):
        MicroModel("m", (3,), (Relu("bad name"),))


def test_layer_weights_must_be_finite():
    w = np.eye(3, dtype=np.float32)
    w[0, 0] = np.inf
    with pytest.raises(DataError):
        Dense("d", w, np.zeros(3, dtype=np.float32))


# --- model file format ------------------------------------------------------

def test_save_load_round_trip(tmp_path):
    model = random_model(3)
    path = tmp_path / "model.json"
    save_model(model, path)
    back = load_model(path)
    assert back.model_id == model.model_id
    assert back.input_shape == model.input_shape
    assert back.layer_names() == model.layer_names()
    x = np.random.default_rng(1).normal(size=(2, *model.input_shape)).astype(np.float32)
    last = model.layer_names()[-1]
    np.testing.assert_array_equal(
        run_model(back, ActivationTensor("input", x), last).values,
        run_model(model, ActivationTensor("input", x), last).values,
    )


def test_load_rejects_bad_format_marker(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"format": "other", "version": 1}), encoding="utf-8")
    with pytest.raises(FormatError):
        load_model(path)


def test_load_rejects_unknown_layer_kind(tmp_path):
    doc = {
        "format": "napkit-model",
        "version": 1,
        "model_id": "m",
        "input_shape": [3],
        "layers": [{"kind": "gelu", "name": "g"}],
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(FormatError):
        load_model(path)


def test_load_rejects_invalid_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(FormatError):
        load_model(path)
