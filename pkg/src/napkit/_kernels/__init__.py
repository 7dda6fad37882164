"""Numeric hot loops with a compiled core and a pure-numpy fallback.

The compiled extension (Cython) is chosen at import time when it built
successfully; otherwise the numpy fallback takes over transparently. Set
``NAPKIT_PURE=1`` to force the fallback, e.g. for benchmarking or debugging.
``BACKEND`` reports which one is live.
"""

from __future__ import annotations

import os

import numpy as np

from napkit._kernels import fallback as _fallback

if os.environ.get("NAPKIT_PURE", "0").strip().lower() in ("", "0", "false"):
    try:
        from napkit._kernels import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "fallback"
else:
    _impl = _fallback
    BACKEND = "fallback"


def _as_points(points: np.ndarray) -> np.ndarray:
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError(f"need a (n>=2, d) point matrix, got shape {points.shape}")
    return points


def core_distances(points: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor, excluding itself."""
    points = _as_points(points)
    if not 1 <= k <= points.shape[0] - 1:
        raise ValueError(f"k must be in [1, n-1], got k={k} for n={points.shape[0]}")
    return _impl.core_distances(points, int(k))


def prim_mst(points: np.ndarray, core: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """MST edges (u, v, w) of the complete mutual-reachability graph."""
    points = _as_points(points)
    core = np.ascontiguousarray(core, dtype=np.float64)
    if core.shape != (points.shape[0],):
        raise ValueError(f"core distances shape {core.shape} does not match {points.shape[0]} points")
    return _impl.prim_mst(points, core)
