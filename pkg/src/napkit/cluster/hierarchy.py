"""Single-linkage dendrogram from spanning-tree edges."""

from __future__ import annotations

import numpy as np

from napkit.errors import ShapeError


def single_linkage(u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Merge tree edges in ascending weight order with union-find.

    Returns an (n-1, 4) float64 array of rows (left, right, weight, size)
    where left/right are component ids: 0..n-1 for original points, and each
    merge row i creates component ``n + i``. Equal weights merge in edge-input
    order (stable sort), keeping the result deterministic.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    if not (u.shape == v.shape == w.shape) or u.ndim != 1:
        raise ShapeError("edge arrays must be 1-D and of equal length")
    n = u.shape[0] + 1
    order = np.argsort(w, kind="stable")
    parent = np.full(2 * n - 1, -1, dtype=np.int64)
    size = np.ones(2 * n - 1, dtype=np.int64)
    size[n:] = 0
    out = np.empty((n - 1, 4), dtype=np.float64)

    def find(x: int) -> int:
        root = x
        while parent[root] != -1:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent[x]
        return root

    next_label = n
    for row, edge in enumerate(order):
        a, b = find(int(u[edge])), find(int(v[edge]))
        merged = size[a] + size[b]
        out[row] = (a, b, w[edge], merged)
        size[next_label] = merged
        parent[a] = next_label
        parent[b] = next_label
        next_label += 1
    return out
