"""Activation tensors and their on-disk format.

A tensor file starts with the magic bytes ``NAPT`` followed by a little-endian
header (format version as u16, rank as u16, one u64 per dimension) and the
raw float32 payload in row-major order. The layout is channels-last: the
first dimension indexes samples, the last indexes layer units, anything in
between is spatial.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from napkit.errors import DataError, FormatError, IoError, ShapeError

MAGIC = b"NAPT"
FORMAT_VERSION = 1
MAX_RANK = 8
# Guard against absurd headers before allocating anything.
MAX_ELEMENTS = 1 << 40


@dataclass(frozen=True)
class ActivationTensor:
    """Raw layer outputs for a set of samples.

    ``values`` has shape ``(n_samples, *spatial, n_units)``, is float32 and
    immutable after construction. Row ``i`` holds the activations of sample
    ``i``; sample ids are implicit row indices.
    """

    layer_id: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float32, order="C", copy=True)
        if arr.ndim < 2:
            raise _rank_error(arr.ndim)
        if arr.shape[0] < 1 or arr.shape[-1] < 1:
            raise ShapeError(
                f"tensor '{self.layer_id}' needs at least one sample and one unit, "
                f"got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise DataError(f"tensor '{self.layer_id}' contains non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def rank(self) -> int:
        return self.values.ndim

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_units(self) -> int:
        return self.values.shape[-1]

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        return self.values.shape[1:-1]


def _rank_error(ndim: int) -> ShapeError:
    return ShapeError(f"activation tensors are rank >= 2 (samples x ... x units), got rank {ndim}")


def save_tensor(tensor: ActivationTensor, path: str | Path) -> None:
    """Write ``tensor`` to ``path`` in the NAPT format."""
    arr = tensor.values
    header = MAGIC + struct.pack("<HH", FORMAT_VERSION, arr.ndim)
    header += struct.pack(f"<{arr.ndim}Q", *arr.shape)
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(arr.astype("<f4", copy=False).tobytes(order="C"))
    except OSError as exc:
        raise IoError(f"cannot write tensor file {path}: {exc}") from exc


def load_tensor(path: str | Path, layer_id: str | None = None) -> ActivationTensor:
    """Read a NAPT file. ``layer_id`` defaults to the file's stem."""
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read tensor file {path}: {exc}") from exc

    if len(blob) < 8:
        raise FormatError(f"{path}: truncated header")
    if blob[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic {blob[:4]!r}, expected {MAGIC!r}")
    version, rank = struct.unpack_from("<HH", blob, 4)
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    if rank < 2 or rank > MAX_RANK:
        raise FormatError(f"{path}: rank {rank} outside supported range 2..{MAX_RANK}")
    if len(blob) < 8 + 8 * rank:
        raise FormatError(f"{path}: truncated shape header")
    shape = struct.unpack_from(f"<{rank}Q", blob, 8)

    n_elements = 1
    for dim in shape:
        if dim == 0:
            raise FormatError(f"{path}: zero-sized dimension in shape {shape}")
        n_elements *= dim
    if n_elements > MAX_ELEMENTS:
        raise DataError(f"{path}: shape {shape} overflows the supported element count")

    payload = blob[8 + 8 * rank :]
    if len(payload) != 4 * n_elements:
        raise FormatError(
            f"{path}: payload holds {len(payload) // 4} float32 values, "
            f"shape {shape} requires {n_elements}"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(shape)
    if not np.isfinite(values).all():
        raise DataError(f"{path}: payload contains non-finite values")
    return ActivationTensor(layer_id=layer_id or path.stem, values=values)


def tensor_from_npy(path: str | Path, layer_id: str | None = None) -> ActivationTensor:
    """Convert an NPY v1.0 array file (float32, C-order) into a tensor.

    The array must already follow the channels-last convention used by the
    NAPT format; only the container differs.
    """
    path = Path(path)
    try:
        arr = np.load(path, allow_pickle=False)
    except OSError as exc:
        raise IoError(f"cannot read npy file {path}: {exc}") from exc
    except ValueError as exc:
        raise FormatError(f"{path}: not a readable npy array: {exc}") from exc
    if arr.dtype != np.float32:
        raise FormatError(f"{path}: expected float32 payload, got {arr.dtype}")
    if not np.isfinite(arr).all():
        raise DataError(f"{path}: payload contains non-finite values")
    if arr.ndim < 2:
        raise _rank_error(arr.ndim)
    return ActivationTensor(layer_id=layer_id or path.stem, values=np.ascontiguousarray(arr))


def fingerprint_tensors(tensors: list[ActivationTensor]) -> str:
    """Content hash over tensor shapes and payload bytes, order-sensitive."""
    import hashlib

    digest = hashlib.sha256()
    for tensor in tensors:
        digest.update(struct.pack("<H", tensor.values.ndim))
        digest.update(struct.pack(f"<{tensor.values.ndim}Q", *tensor.shape))
        digest.update(tensor.values.tobytes(order="C"))
    return "sha256:" + digest.hexdigest()
