"""Per-feature normalization of aggregated activation rows.

Each feature column is divided by its own largest absolute value over the
whole corpus, putting every column on a comparable [-1, 1] footing while
preserving zeros and signs. Columns that are all zero have no scale of their
own and are left untouched (scale 1), so they stay zero instead of becoming
NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from napkit.errors import DataError, ShapeError


@dataclass(frozen=True)
class NormalizedRows:
    """Aggregated rows after per-column scaling, plus the scales used."""

    rows: np.ndarray  # (n_samples, n_features) float32, |value| <= 1
    scales: np.ndarray  # (n_features,) float32, the per-column divisors

    def __post_init__(self):
        if self.rows.ndim != 2 or self.scales.ndim != 1:
            raise ShapeError("rows must be rank 2 and scales rank 1")
        if self.scales.shape[0] != self.rows.shape[1]:
            raise ShapeError(
                f"{self.scales.shape[0]} scales for {self.rows.shape[1]} columns"
            )


def normalize_rows(rows: np.ndarray) -> NormalizedRows:
    """Scale each column by its max absolute value; all-zero columns by 1."""
    rows = np.ascontiguousarray(rows, dtype=np.float32)
    if rows.ndim != 2:
        raise ShapeError(f"expected rank-2 rows, got rank {rows.ndim}")
    if not np.isfinite(rows).all():
        raise DataError("rows contain non-finite values")
    scales = np.abs(rows).max(axis=0) if rows.shape[0] else np.zeros(rows.shape[1], np.float32)
    scales = np.where(scales == 0, np.float32(1), scales).astype(np.float32)
    out = rows / scales
    out.flags.writeable = False
    scales.flags.writeable = False
    return NormalizedRows(rows=out, scales=scales)


def apply_scales(rows: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Scale new rows with previously computed divisors (for replays/traces)."""
    rows = np.asarray(rows, dtype=np.float32)
    scales = np.asarray(scales, dtype=np.float32)
    if rows.ndim != 2:
        raise ShapeError(f"expected rank-2 rows, got rank {rows.ndim}")
    if scales.ndim != 1 or scales.shape[0] != rows.shape[1]:
        raise ShapeError(f"{scales.shape} scales do not fit {rows.shape} rows")
    if (scales <= 0).any() or not np.isfinite(scales).all():
        raise DataError("scales must be finite and positive")
    return (rows / scales).astype(np.float32)
