"""Condensed cluster tree: pruning, stability scores, selection, labelling.

The dendrogram is condensed by a minimum cluster size: a split where both
sides are large enough creates two new cluster nodes; smaller sides "fall
out" of the parent as individual points at the split's lambda (lambda =
1 / merge distance, so denser = larger). Cluster stability is the total
lambda-lifetime of a cluster's points and doubles as the persistence score
that ranks patterns downstream.

Node ids: original points are 0..n-1; condensed cluster nodes are n, n+1, ...
with the root always n and parents numbered before their children.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from napkit.errors import ParamError, ShapeError


@dataclass(frozen=True)
class CondensedTree:
    """Rows (parent, child, lambda, size): child leaves parent at lambda.

    A child with size > 1 is a cluster node; size 1 is an original point
    falling out. ``n_points`` is the number of original points.
    """

    parent: np.ndarray  # int64
    child: np.ndarray  # int64
    lam: np.ndarray  # float64, may be +inf for zero-distance splits
    size: np.ndarray  # int64
    n_points: int

    @property
    def root(self) -> int:
        return self.n_points

    def cluster_children(self) -> dict[int, list[int]]:
        """Cluster-node children per cluster node, in row order."""
        out: dict[int, list[int]] = {}
        for p, c, s in zip(self.parent, self.child, self.size):
            if s > 1:
                out.setdefault(int(p), []).append(int(c))
        return out

    def cluster_nodes(self) -> list[int]:
        """All cluster node ids (root included), ascending."""
        nodes = {self.root} | {int(c) for c, s in zip(self.child, self.size) if s > 1}
        return sorted(nodes)

    def point_lambdas(self) -> np.ndarray:
        """Per original point, the lambda at which it falls out of its cluster."""
        lams = np.zeros(self.n_points, dtype=np.float64)
        mask = self.size == 1
        lams[self.child[mask]] = self.lam[mask]
        return lams


@dataclass(frozen=True)
class Labeling:
    """Per-point cluster assignment plus per-cluster stability.

    Labels are dense integers 0..k-1 with -1 for noise. Strengths are in
    [0, 1] and exactly 0 for noise points. ``stabilities[k]`` is the
    stability (persistence) of cluster k.
    """

    labels: np.ndarray  # int64 (n,)
    strengths: np.ndarray  # float64 (n,)
    stabilities: np.ndarray = field(default_factory=lambda: np.zeros(0))  # float64 (k,)

    def __post_init__(self):
        if self.labels.shape != self.strengths.shape or self.labels.ndim != 1:
            raise ShapeError("labels and strengths must be equal-length 1-D arrays")
        k = int(self.labels.max()) + 1 if self.labels.size and self.labels.max() >= 0 else 0
        if len(self.stabilities) != k:
            raise ShapeError(f"{len(self.stabilities)} stabilities for {k} clusters")

    @property
    def n_clusters(self) -> int:
        return len(self.stabilities)

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)


def _bfs(linkage: np.ndarray, start: int, n: int) -> list[int]:
    out = []
    queue = deque([start])
    while queue:
        node = queue.popleft()
        out.append(node)
        if node >= n:
            row = linkage[node - n]
            queue.append(int(row[0]))
            queue.append(int(row[1]))
    return out


def condense_tree(linkage: np.ndarray, min_cluster_size: int) -> CondensedTree:
    """Prune a single-linkage dendrogram by minimum cluster size.

    Walking top-down: a split whose sides both reach min_cluster_size starts
    two new cluster nodes; otherwise the undersized side's points fall out at
    the split's lambda and the surviving side keeps its parent's identity.
    When both sides are undersized the parent dissolves entirely.
    """
    if min_cluster_size < 2:
        raise ParamError(f"min_cluster_size must be >= 2, got {min_cluster_size}")
    linkage = np.asarray(linkage, dtype=np.float64)
    n = linkage.shape[0] + 1
    root = 2 * n - 2
    relabel = np.zeros(root + 1, dtype=np.int64)
    relabel[root] = n
    next_label = n + 1
    ignore = np.zeros(root + 1, dtype=bool)
    parents: list[int] = []
    children: list[int] = []
    lambdas: list[float] = []
    sizes: list[int] = []

    def emit(parent: int, child: int, lam: float, size: int) -> None:
        parents.append(parent)
        children.append(child)
        lambdas.append(lam)
        sizes.append(size)

    def count(node: int) -> int:
        return 1 if node < n else int(linkage[node - n, 3])

    for node in _bfs(linkage, root, n):
        if node < n or ignore[node]:
            continue
        left, right, dist = (int(linkage[node - n, 0]), int(linkage[node - n, 1]),
                             float(linkage[node - n, 2]))
        lam = 1.0 / dist if dist > 0.0 else np.inf
        left_count, right_count = count(left), count(right)
        label = int(relabel[node])
        if left_count >= min_cluster_size and right_count >= min_cluster_size:
            for side, side_count in ((left, left_count), (right, right_count)):
                relabel[side] = next_label
                emit(label, next_label, lam, side_count)
                next_label += 1
        elif left_count < min_cluster_size and right_count < min_cluster_size:
            for side in (left, right):
                for sub in _bfs(linkage, side, n):
                    if sub < n:
                        emit(label, sub, lam, 1)
                    ignore[sub] = True
        else:
            keep, drop = (left, right) if left_count >= min_cluster_size else (right, left)
            relabel[keep] = label
            for sub in _bfs(linkage, drop, n):
                if sub < n:
                    emit(label, sub, lam, 1)
                ignore[sub] = True
    return CondensedTree(
        parent=np.asarray(parents, dtype=np.int64),
        child=np.asarray(children, dtype=np.int64),
        lam=np.asarray(lambdas, dtype=np.float64),
        size=np.asarray(sizes, dtype=np.int64),
        n_points=n,
    )


def stability(tree: CondensedTree) -> dict[int, float]:
    """Per-cluster-node stability: sum over exits of (lambda - birth) * size.

    A node's birth lambda is the lambda of the split that created it (0 for
    the root). Zero-width intervals at infinity (duplicate-point splits)
    contribute 0 rather than NaN.
    """
    births = {tree.root: 0.0}
    for c, lam in zip(tree.child, tree.lam):
        births[int(c)] = float(lam)
    scores = {node: 0.0 for node in tree.cluster_nodes()}
    for p, lam, size in zip(tree.parent, tree.lam, tree.size):
        birth = births[int(p)]
        lam = float(lam)
        width = 0.0 if lam == birth else lam - birth
        scores[int(p)] += width * int(size)
    return scores


def select_leaves(tree: CondensedTree) -> list[int]:
    """The leaf cluster nodes of the condensed tree (root-only tree -> root)."""
    children = tree.cluster_children()
    if not children:
        return [tree.root]
    leaves = []
    queue = deque([tree.root])
    while queue:
        node = queue.popleft()
        kids = children.get(node)
        if kids:
            queue.extend(kids)
        else:
            leaves.append(node)
    return sorted(leaves)


def select_eom(tree: CondensedTree, scores: dict[int, float]) -> list[int]:
    """Excess-of-mass selection: bottom-up stability comparison.

    A node beats its subtree only when its own stability strictly exceeds the
    sum of its children's propagated stabilities; winners swallow all
    descendants. The root competes like any other node, so a sufficiently
    stable root yields a single all-encompassing cluster.
    """
    children = tree.cluster_children()
    if not children:
        return [tree.root]
    propagated: dict[int, float] = {}
    candidate: dict[int, bool] = {}
    for node in sorted(tree.cluster_nodes(), reverse=True):  # children before parents
        kids = children.get(node, [])
        subtree = sum(propagated[k] for k in kids)
        if not kids or scores[node] > subtree:
            candidate[node] = True
            propagated[node] = max(scores[node], subtree)
        else:
            candidate[node] = False
            propagated[node] = subtree
    selected = []
    queue = deque([tree.root])
    while queue:
        node = queue.popleft()
        if candidate[node]:
            selected.append(node)
        else:
            queue.extend(children.get(node, []))
    return sorted(selected)


def labelling(
    tree: CondensedTree, selected: list[int], min_cluster_size: int
) -> Labeling:
    """Assign dense labels, noise, and membership strengths for a selection.

    Points reach the nearest selected ancestor via union-find over unselected
    tree rows. When the selection is the root itself, membership additionally
    requires the point's lambda to reach the largest lambda at which anything
    left the root (otherwise everything, however diffuse, would form one
    cluster), and the root is dropped entirely if fewer than min_cluster_size
    points qualify. Strength is lambda relative to the cluster's densest
    exit, clamped to [0, 1]; points at infinite lambda get 1.
    """
    n = tree.n_points
    labels = np.full(n, -1, dtype=np.int64)
    strengths = np.zeros(n, dtype=np.float64)
    if len(tree.parent) == 0:
        return Labeling(labels=labels, strengths=strengths, stabilities=np.zeros(0))
    selected = sorted(selected)
    selected_set = set(selected)

    max_node = int(max(tree.parent.max(), tree.child.max()))
    uf = np.arange(max_node + 1, dtype=np.int64)

    def find(x: int) -> int:
        root = x
        while uf[root] != root:
            root = uf[root]
        while x != root:
            uf[x], x = root, uf[x]
        return root

    for p, c in zip(tree.parent, tree.child):
        if int(c) not in selected_set:
            uf[find(int(c))] = find(int(p))

    point_lambda = tree.point_lambdas()
    component = np.fromiter((find(p) for p in range(n)), dtype=np.int64, count=n)

    if selected == [tree.root]:
        # Root selection: only points as dense as the root's last split count.
        root_rows = tree.parent == tree.root
        threshold = float(tree.lam[root_rows].max()) if root_rows.any() else np.inf
        member_mask = (component == tree.root) & (point_lambda >= threshold)
        if int(member_mask.sum()) < min_cluster_size:
            selected, selected_set = [], set()
        else:
            labels[member_mask] = 0
    else:
        label_of = {node: i for i, node in enumerate(selected)}
        for p in range(n):
            node = int(component[p])
            if node in label_of:
                labels[p] = label_of[node]

    scores = stability(tree)
    stabilities = np.asarray([scores[node] for node in selected], dtype=np.float64)

    for i in range(len(selected)):
        member_idx = np.flatnonzero(labels == i)
        lams = point_lambda[member_idx]
        finite = lams[np.isfinite(lams)]
        lam_max = float(finite.max()) if finite.size else 0.0
        for p, lam in zip(member_idx, lams):
            if not np.isfinite(lam) or lam_max <= 0.0:
                strengths[p] = 1.0
            else:
                strengths[p] = min(lam, lam_max) / lam_max
    return Labeling(labels=labels, strengths=strengths, stabilities=stabilities)
