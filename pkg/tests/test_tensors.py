"""Activation tensor container and its binary file format.

The read-path tests build files byte-by-byte with struct, independently of
the writer, so the two sides of the format are checked against each other.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np
import pytest

from napkit.errors import DataError, FormatError, ShapeError
from napkit.tensors import (
    ActivationTensor,
    fingerprint_tensors,
    load_tensor,
    save_tensor,
    tensor_from_npy,
)

MAGIC = b"NAPT"


def raw_tensor_bytes(shape, payload, *, magic=MAGIC, version=1, rank=None):
    """Hand-packed file image: magic, u16 version, u16 rank, u64 dims, f32 data."""
    rank = len(shape) if rank is None else rank
    head = magic + struct.pack("<HH", version, rank)
    dims = b"".join(struct.pack("<Q", d) for d in shape)
    body = struct.pack(f"<{len(payload)}f", *payload)
    return head + dims + body


# --- constructor ---------------------------------------------------------

def test_tensor_basic_properties():
    t = ActivationTensor("conv1", np.zeros((4, 3, 3, 8), dtype=np.float32))
    assert t.layer_id == "conv1"
    assert t.shape == (4, 3, 3, 8)
    assert t.rank == 4
    assert t.n_samples == 4
    assert t.n_units == 8
    assert t.spatial_shape == (3, 3)
    assert t.values.dtype == np.float32
    assert t.values.flags["C_CONTIGUOUS"]


def test_tensor_rank2_has_no_spatial_axes():
    t = ActivationTensor("dense", np.ones((5, 7), dtype=np.float32))
    assert t.spatial_shape == ()
    assert t.n_units == 7


def test_tensor_values_are_immutable():
    t = ActivationTensor("x", np.ones((2, 2), dtype=np.float32))
    with pytest.raises((ValueError, RuntimeError)):
        t.values[0, 0] = 9.0


def test_tensor_copies_input_buffer():
    src = np.ones((2, 2), dtype=np.float32)
    t = ActivationTensor("x", src)
    src[0, 0] = 42.0
    assert t.values[0, 0] == 1.0


def test_tensor_rejects_rank_below_two():
    with pytest.raises(ShapeError):
        ActivationTensor("x", np.ones(3, dtype=np.float32))


def test_tensor_rejects_empty_axes():
    with pytest.raises(ShapeError):
        ActivationTensor("x", np.ones((0, 4), dtype=np.float32))
    with pytest.raises(ShapeError):
        ActivationTensor("x", np.ones((4, 0), dtype=np.float32))


def test_tensor_rejects_non_finite():
    bad = np.ones((2, 2), dtype=np.float32)
    bad[1, 1] = np.nan
    with pytest.raises(DataError):
        ActivationTensor("x", bad)


# --- binary format: read path against hand-packed bytes ------------------

def test_load_hand_packed_rank2(tmp_path):
    # dims (2, 3), payload 0..5 row-major: sample 1, unit 2 holds 5.
    path = tmp_path / "t.napt"
    path.write_bytes(raw_tensor_bytes((2, 3), [0, 1, 2, 3, 4, 5]))
    t = load_tensor(path)
    assert t.layer_id == "t"
    assert t.shape == (2, 3)
    assert t.values[1, 2] == 5.0
    assert np.array_equal(t.values, np.arange(6, dtype=np.float32).reshape(2, 3))


def test_load_respects_layer_id_override(tmp_path):
    path = tmp_path / "whatever.napt"
    path.write_bytes(raw_tensor_bytes((2, 2), [1, 2, 3, 4]))
    assert load_tensor(path, layer_id="conv9").layer_id == "conv9"


def test_load_rejects_payload_count_mismatch(tmp_path):
    path = tmp_path / "short.napt"
    path.write_bytes(raw_tensor_bytes((2, 3), [0, 1, 2, 3, 4]))  # 5 of 6 values
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_excess_payload(tmp_path):
    path = tmp_path / "long.napt"
    path.write_bytes(raw_tensor_bytes((2, 3), list(range(7))))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.napt"
    path.write_bytes(raw_tensor_bytes((2, 2), [1, 2, 3, 4], magic=b"XXXX"))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_unsupported_version(tmp_path):
    path = tmp_path / "v9.napt"
    path.write_bytes(raw_tensor_bytes((2, 2), [1, 2, 3, 4], version=9))
    with pytest.raises(FormatError):
        load_tensor(path)


@pytest.mark.parametrize("rank", [0, 1, 9])
def test_load_rejects_rank_out_of_range(tmp_path, rank):
    shape = tuple([2] * rank) if rank else ()
    payload = [1.0] * int(np.prod(shape)) if rank else []
    path = tmp_path / "r.napt"
    path.write_bytes(raw_tensor_bytes(shape, payload, rank=rank))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_truncated_header(tmp_path):
    path = tmp_path / "trunc.napt"
    path.write_bytes(b"NAPT\x01\x00")
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_zero_dimension(tmp_path):
    path = tmp_path / "zero.napt"
    path.write_bytes(raw_tensor_bytes((2, 0), []))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_load_rejects_non_finite_payload(tmp_path):
    path = tmp_path / "nan.napt"
    path.write_bytes(raw_tensor_bytes((1, 2), [1.0, float("nan")]))
    with pytest.raises(DataError):
        load_tensor(path)


# --- round trip and write path -------------------------------------------

def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    values = rng.normal(size=(3, 4, 4, 6)).astype(np.float32)
    t = ActivationTensor("conv2", values)
    path = tmp_path / "conv2.napt"
    save_tensor(t, path)
    back = load_tensor(path)
    assert back.layer_id == "conv2"
    assert back.shape == t.shape
    assert np.array_equal(back.values, t.values)


def test_save_writes_expected_bytes(tmp_path):
    t = ActivationTensor("t", np.arange(6, dtype=np.float32).reshape(2, 3))
    path = tmp_path / "t.napt"
    save_tensor(t, path)
    assert path.read_bytes() == raw_tensor_bytes((2, 3), [0, 1, 2, 3, 4, 5])


@pytest.mark.parametrize("rank", range(2, 9))
def test_round_trip_every_supported_rank(tmp_path, rank):
    shape = tuple([2] * (rank - 1) + [3])
    values = np.arange(np.prod(shape), dtype=np.float32).reshape(shape)
    path = tmp_path / f"r{rank}.napt"
    save_tensor(ActivationTensor("x", values), path)
    assert np.array_equal(load_tensor(path).values, values)


# --- npy conversion -------------------------------------------------------

def test_tensor_from_npy(tmp_path):
    values = np.arange(12, dtype=np.float32).reshape(3, 4)
    path = tmp_path / "a.npy"
    np.save(path, values)
    t = tensor_from_npy(path, layer_id="imported")
    assert t.layer_id == "imported"
    assert np.array_equal(t.values, values)


def test_tensor_from_npy_rejects_wrong_dtype(tmp_path):
    path = tmp_path / "f64.npy"
    np.save(path, np.ones((2, 2), dtype=np.float64))
    with pytest.raises(FormatError):
        tensor_from_npy(path, layer_id="x")


def test_tensor_from_npy_rejects_rank1(tmp_path):
    path = tmp_path / "vec.npy"
    np.save(path, np.ones(5, dtype=np.float32))
    with pytest.raises(ShapeError):
        tensor_from_npy(path, layer_id="x")


# --- fingerprint ----------------------------------------------------------

def test_fingerprint_is_deterministic_and_prefixed():
    t = ActivationTensor("a", np.ones((2, 2), dtype=np.float32))
    fp1 = fingerprint_tensors([t])
    fp2 = fingerprint_tensors([t])
    assert fp1 == fp2
    assert fp1.startswith("sha256:")
    assert len(fp1) == len("sha256:") + 64


def test_fingerprint_changes_with_values_and_shape():
    a = ActivationTensor("a", np.ones((2, 2), dtype=np.float32))
    b = ActivationTensor("a", np.full((2, 2), 2.0, dtype=np.float32))
    c = ActivationTensor("a", np.ones((1, 4), dtype=np.float32))
    assert len({fingerprint_tensors([a]), fingerprint_tensors([b]), fingerprint_tensors([c])}) == 3


def test_fingerprint_matches_manual_recomputation():
    values = np.arange(6, dtype=np.float32).reshape(2, 3)
    t = ActivationTensor("a", values)
    h = hashlib.sha256()
    h.update(struct.pack("<H", 2))
    h.update(struct.pack("<QQ", 2, 3))
    h.update(values.tobytes())
    assert fingerprint_tensors([t]) == "sha256:" + h.hexdigest()
