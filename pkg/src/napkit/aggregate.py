"""Collapse spatial activation maps into per-sample feature rows.

Activations from spatial layers carry a location dimension that would
otherwise dominate similarity: two samples lighting up the same filters at
different positions look dissimilar row-wise. Each aggregation method below
removes location in a different way, trading spatial detail for positional
invariance. Rank-2 activations have no spatial axes, so every method reduces
to the identity there.
"""

from __future__ import annotations

import enum

import numpy as np

from napkit.errors import ParamError
from napkit.tensors import ActivationTensor


class Aggregation(enum.Enum):
    """How to collapse spatial locations, and the CLI flag for each."""

    NONE = "none"
    PEAK_STRENGTH = "max"
    RANGE = "minmax"
    AMOUNT = "mean"
    AMOUNT_SPREAD = "meanstd"

    @classmethod
    def from_flag(cls, flag: str) -> "Aggregation":
        for member in cls:
            if member.value == flag:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ParamError(f"unknown aggregation {flag!r}; expected one of: {valid}")


def aggregate(tensor: ActivationTensor, method: Aggregation) -> np.ndarray:
    """Return a rank-2 float32 matrix (n_samples, n_features).

    Spatial axes are the middle axes of a channels-last tensor. Feature
    order per method:

    - NONE: flattened locations x units in row-major order, so feature
      ``p * n_units + u`` is unit ``u`` at flat location ``p``.
    - PEAK_STRENGTH: per-unit spatial maximum.
    - RANGE: per-unit [min, max] interleaved as (u0.min, u0.max, u1.min, ...).
    - AMOUNT: per-unit spatial mean.
    - AMOUNT_SPREAD: per-unit [mean, std] interleaved; population std.
    """
    values = tensor.values
    n = values.shape[0]
    if values.ndim == 2:
        return values
    spatial_axes = tuple(range(1, values.ndim - 1))
    if method is Aggregation.NONE:
        return values.reshape(n, -1)
    if method is Aggregation.PEAK_STRENGTH:
        return values.max(axis=spatial_axes)
    if method is Aggregation.RANGE:
        return _interleave(values.min(axis=spatial_axes), values.max(axis=spatial_axes))
    if method is Aggregation.AMOUNT:
        return values.mean(axis=spatial_axes, dtype=np.float32)
    if method is Aggregation.AMOUNT_SPREAD:
        mean = values.mean(axis=spatial_axes, dtype=np.float32)
        std = values.std(axis=spatial_axes, dtype=np.float32)
        return _interleave(mean, std)
    raise ParamError(f"unknown aggregation {method!r}")


def _interleave(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty((a.shape[0], a.shape[1] * 2), dtype=np.float32)
    out[:, 0::2] = a
    out[:, 1::2] = b
    return out


def feature_names(tensor: ActivationTensor, method: Aggregation) -> list[str]:
    """Column names matching aggregate()'s output, ``unit{u}.{stat}`` style."""
    n_units = tensor.n_units
    if tensor.rank == 2:
        return [f"unit{u}.value" for u in range(n_units)]
    if method is Aggregation.NONE:
        n_locations = int(np.prod(tensor.spatial_shape))
        return [f"unit{u}.pos{p}" for p in range(n_locations) for u in range(n_units)]
    stats = {
        Aggregation.PEAK_STRENGTH: ("max",),
        Aggregation.RANGE: ("min", "max"),
        Aggregation.AMOUNT: ("mean",),
        Aggregation.AMOUNT_SPREAD: ("mean", "std"),
    }[method]
    return [f"unit{u}.{stat}" for u in range(n_units) for stat in stats]
