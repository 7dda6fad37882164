"""Pure-numpy implementations of the clustering hot loops.

Used when the compiled extension is unavailable (or NAPKIT_PURE=1). Both
backends implement the same contract and break distance ties the same way
(lowest index wins), so they are interchangeable.
"""

from __future__ import annotations

import numpy as np


def core_distances(points: np.ndarray, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor, excluding itself.

    ``points`` is (n, d) float64 C-contiguous; requires 1 <= k <= n-1.
    """
    n = points.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        diff = points - points[i]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        # dist[i] == 0 sorts first, so index k is the k-th neighbor without self.
        out[i] = np.partition(dist, k)[k]
    return out


def prim_mst(points: np.ndarray, core: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum spanning tree of the complete mutual-reachability graph.

    Edge weight between a and b is max(core[a], core[b], euclidean(a, b)).
    Returns (u, v, w) arrays of the n-1 edges in the order Prim's algorithm
    adds them, starting from vertex 0. Ties pick the lowest-index vertex.
    """
    n = points.shape[0]
    u = np.empty(n - 1, dtype=np.int64)
    v = np.empty(n - 1, dtype=np.int64)
    w = np.empty(n - 1, dtype=np.float64)
    in_tree = np.zeros(n, dtype=bool)
    best_w = np.full(n, np.inf)
    best_from = np.zeros(n, dtype=np.int64)
    current = 0
    in_tree[0] = True
    for step in range(n - 1):
        diff = points - points[current]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        reach = np.maximum(np.maximum(dist, core), core[current])
        update = ~in_tree & (reach < best_w)
        best_w[update] = reach[update]
        best_from[update] = current
        masked = np.where(in_tree, np.inf, best_w)
        nxt = int(np.argmin(masked))
        u[step] = best_from[nxt]
        v[step] = nxt
        w[step] = best_w[nxt]
        in_tree[nxt] = True
        current = nxt
    return u, v, w
