"""Hierarchical density-based clustering of normalized activation rows.

Pipeline: core distances -> mutual-reachability spanning tree -> single
linkage -> condensed tree -> stability -> cluster selection (leaf or
excess-of-mass) -> labels with membership strengths. Points in no selected
cluster are noise (label -1). Everything is deterministic for a given input;
ties break toward lower indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from napkit.cluster.graph import core_distances, mutual_reachability_mst
from napkit.cluster.hierarchy import single_linkage
from napkit.cluster.tree import (
    CondensedTree,
    Labeling,
    condense_tree,
    labelling,
    select_eom,
    select_leaves,
    stability,
)
from napkit.errors import DataError, ParamError, ShapeError

__all__ = [
    "ClusterParams",
    "Selection",
    "CondensedTree",
    "Labeling",
    "cluster_rows",
    "core_distances",
    "mutual_reachability_mst",
    "single_linkage",
    "condense_tree",
    "stability",
    "select_leaves",
    "select_eom",
    "labelling",
]


class Selection(enum.Enum):
    """Which condensed-tree nodes become clusters."""

    LEAF = "leaf"
    EXCESS_OF_MASS = "eom"

    @classmethod
    def from_flag(cls, flag: str) -> "Selection":
        for member in cls:
            if member.value == flag:
                return member
        valid = ", ".join(m.value for m in cls)
        raise ParamError(f"unknown selection {flag!r}; expected one of: {valid}")


@dataclass(frozen=True)
class ClusterParams:
    min_cluster_size: int = 5
    min_samples: int = 5
    selection: Selection = Selection.LEAF

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ParamError(f"min_cluster_size must be >= 2, got {self.min_cluster_size}")
        if self.min_samples < 1:
            raise ParamError(f"min_samples must be >= 1, got {self.min_samples}")
        if not isinstance(self.selection, Selection):
            raise ParamError(f"selection must be a Selection, got {self.selection!r}")


def cluster_rows(rows: np.ndarray, params: ClusterParams | None = None) -> Labeling:
    """Cluster row vectors; returns labels (-1 = noise), strengths, stabilities.

    Corpora too small to support the density estimate (fewer than 2 points,
    or fewer than min_cluster_size) come back as all noise rather than
    erroring, so sparsely populated layers degrade gracefully.
    """
    params = params or ClusterParams()
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise ShapeError(f"expected rank-2 rows, got rank {rows.ndim}")
    if not np.isfinite(rows).all():
        raise DataError("rows contain non-finite values")
    n = rows.shape[0]
    if n < 2 or n < params.min_cluster_size:
        return Labeling(
            labels=np.full(n, -1, dtype=np.int64),
            strengths=np.zeros(n, dtype=np.float64),
            stabilities=np.zeros(0, dtype=np.float64),
        )
    k = min(params.min_samples, n - 1)  # clamp so tiny corpora still run
    core = core_distances(rows, k)
    u, v, w = mutual_reachability_mst(rows, core)
    linkage = single_linkage(u, v, w)
    tree = condense_tree(linkage, params.min_cluster_size)
    if params.selection is Selection.LEAF:
        selected = select_leaves(tree)
    else:
        selected = select_eom(tree, stability(tree))
    return labelling(tree, selected, params.min_cluster_size)
