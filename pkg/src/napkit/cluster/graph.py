"""Density geometry: core distances and the mutual-reachability spanning tree.

Both operations delegate their hot loops to napkit._kernels (compiled when
available, numpy otherwise). Tie-breaks are by lowest index everywhere so
results are deterministic and backend-independent.
"""

from __future__ import annotations

import numpy as np

from napkit import _kernels
from napkit.errors import ParamError, ShapeError


def core_distances(points: np.ndarray, k: int) -> np.ndarray:
    """Euclidean distance from each point to its k-th nearest neighbor.

    The point itself is excluded from its neighbor list. Requires n > k.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ShapeError(f"expected rank-2 points, got rank {points.ndim}")
    n = points.shape[0]
    if k < 1:
        raise ParamError(f"k must be >= 1, got {k}")
    if n <= k:
        raise ParamError(f"need more than k={k} points to find a k-th neighbor, got {n}")
    return _kernels.core_distances(points, k)


def mutual_reachability_mst(
    points: np.ndarray, core: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum spanning tree over mutual-reachability distances.

    The edge weight between points a and b is
    ``max(core[a], core[b], euclidean(a, b))``; the tree minimizes the total
    weight over this implicit complete graph. Returns (u, v, w) edge arrays
    in the order Prim's algorithm adds them (deterministic: lowest index wins
    ties).
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    core = np.ascontiguousarray(core, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ShapeError(f"need at least 2 points, got shape {points.shape}")
    if core.shape != (points.shape[0],):
        raise ShapeError(f"core shape {core.shape} does not match {points.shape[0]} points")
    return _kernels.prim_mst(points, core)
