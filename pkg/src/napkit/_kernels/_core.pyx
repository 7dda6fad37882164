# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the clustering hot loops.

Mirrors fallback.py exactly: same contract, same lowest-index tie-breaking.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()


def core_distances(double[:, ::1] points, int k):
    """Distance from each point to its k-th nearest neighbor, excluding itself."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    best_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] best = best_arr
    cdef Py_ssize_t i, j, m, worst_idx
    cdef double acc, diff, dist, worst
    with nogil:
        for i in range(n):
            # Track the k smallest neighbor distances seen so far.
            for m in range(k):
                best[m] = INFINITY
            worst = INFINITY
            worst_idx = 0
            for j in range(n):
                if j == i:
                    continue
                acc = 0.0
                for m in range(d):
                    diff = points[i, m] - points[j, m]
                    acc += diff * diff
                dist = sqrt(acc)
                if dist < worst:
                    best[worst_idx] = dist
                    worst = best[0]
                    worst_idx = 0
                    for m in range(1, k):
                        if best[m] > worst:
                            worst = best[m]
                            worst_idx = m
            out[i] = worst
    return out_arr


def prim_mst(double[:, ::1] points, double[::1] core):
    """Minimum spanning tree of the complete mutual-reachability graph."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    u_arr = np.empty(n - 1, dtype=np.int64)
    v_arr = np.empty(n - 1, dtype=np.int64)
    w_arr = np.empty(n - 1, dtype=np.float64)
    in_tree_arr = np.zeros(n, dtype=np.uint8)
    best_w_arr = np.full(n, np.inf)
    best_from_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] u = u_arr
    cdef cnp.int64_t[::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef cnp.uint8_t[::1] in_tree = in_tree_arr
    cdef double[::1] best_w = best_w_arr
    cdef cnp.int64_t[::1] best_from = best_from_arr
    cdef Py_ssize_t step, j, m, current, nxt
    cdef double acc, diff, reach, low
    current = 0
    in_tree[0] = 1
    with nogil:
        for step in range(n - 1):
            for j in range(n):
                if in_tree[j]:
                    continue
                acc = 0.0
                for m in range(d):
                    diff = points[current, m] - points[j, m]
                    acc += diff * diff
                reach = sqrt(acc)
                if core[j] > reach:
                    reach = core[j]
                if core[current] > reach:
                    reach = core[current]
                if reach < best_w[j]:
                    best_w[j] = reach
                    best_from[j] = current
            nxt = -1
            low = INFINITY
            for j in range(n):
                if not in_tree[j] and best_w[j] < low:
                    low = best_w[j]
                    nxt = j
            if nxt < 0:
                # All remaining weights are inf (cannot happen on finite input);
                # fall back to the first vertex not yet in the tree.
                for j in range(n):
                    if not in_tree[j]:
                        nxt = j
                        break
            u[step] = best_from[nxt]
            v[step] = nxt
            w[step] = best_w[nxt]
            in_tree[nxt] = 1
            current = nxt
    return u_arr, v_arr, w_arr
