"""Finite metric spaces, their constructors and single-linkage dendrograms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

TRIANGLE_TOL = 1e-9


class MetricError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A symmetric distance matrix on points ``0..n-1``.

    The matrix is copied and made read-only on construction.  Call
    :func:`validate_metric` to check the metric axioms; constructors in this
    module always produce valid metrics.
    """

    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float, copy=True)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise MetricError(f"distance matrix must be square, got shape {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __len__(self):
        return self.n

    def restrict(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = np.asarray(indices, dtype=int)
        return FiniteMetricSpace(self.d[np.ix_(idx, idx)])


@dataclass(frozen=True)
class WeightedTree:
    n: int
    edges: tuple  # of (u, v, weight)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v), float(w)) for u, v, w in self.edges))


def as_point_cloud(points) -> np.ndarray:
    """Coerce ``points`` into an ``(n, dim)`` float array, rejecting ragged input."""
    if isinstance(points, np.ndarray):
        pc = np.asarray(points, dtype=float)
    else:
        rows = [tuple(p) for p in points]
        if rows and len({len(r) for r in rows}) != 1:
            raise MetricError("dimension mismatch among points")
        pc = np.array(rows, dtype=float)
    if pc.ndim == 1:
        pc = pc.reshape(-1, 1) if pc.size else pc.reshape(0, 1)
    if pc.ndim != 2 or pc.shape[1] < 1:
        raise MetricError("points must be a 2-d array with at least one coordinate")
    if not np.all(np.isfinite(pc)):
        raise MetricError("coordinates must be finite")
    return pc


def euclidean_metric(points) -> FiniteMetricSpace:
    pc = as_point_cloud(points)
    if len(pc) == 0:
        raise MetricError("point cloud is empty")
    diff = pc[:, None, :] - pc[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # exact symmetry regardless of summation order
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d)


def tree_metric(tree: WeightedTree) -> FiniteMetricSpace:
    """Path-length metric on the nodes of a weighted tree."""
    n = tree.n
    if n < 1:
        raise MetricError("tree needs at least one vertex")
    if len(tree.edges) != n - 1:
        raise MetricError(f"a tree on {n} vertices has {n - 1} edges, got {len(tree.edges)}")
    adj = [[] for _ in range(n)]
    ds = DisjointSet(range(n))
    for u, v, w in tree.edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise MetricError(f"bad edge ({u}, {v})")
        if not w > 0:
            raise MetricError(f"edge ({u}, {v}) has non-positive weight {w}")
        if not ds.merge(u, v):
            raise MetricError("edge list contains a cycle")
        adj[u].append((v, w))
        adj[v].append((u, w))
    if ds.n_subsets != 1:
        raise MetricError("edge list is disconnected")

    d = np.zeros((n, n))
    for root in range(n):
        stack = [(root, -1, 0.0)]
        while stack:
            node, parent, dist = stack.pop()
            d[root, node] = dist
            for nb, w in adj[node]:
                if nb != parent:
                    stack.append((nb, node, dist + w))
    # path sums from the two ends can differ in the last bit
    return FiniteMetricSpace(np.minimum(d, d.T))


def random_tree(n: int, rng: np.random.Generator, low=0.1, high=1.0) -> WeightedTree:
    """Uniformly attached random tree with weights drawn from ``[low, high)``."""
    edges = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append((u, v, float(rng.uniform(low, high))))
    return WeightedTree(n, tuple(edges))


def validate_metric(X, tol: float = TRIANGLE_TOL) -> list[tuple]:
    """Return a list of metric-axiom violations; empty iff ``X`` is a metric.

    Each violation is a tuple ``(kind, indices)`` with ``kind`` one of
    ``"negative"``, ``"diagonal"``, ``"symmetry"``, ``"triangle"``.
    Symmetry is checked exactly, the triangle inequality with absolute
    tolerance ``tol``.
    """
    d = X.d if isinstance(X, FiniteMetricSpace) else np.asarray(X, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MetricError("distance matrix must be square")
    n = d.shape[0]
    out = []
    for i in range(n):
        if d[i, i] != 0:
            out.append(("diagonal", (i,)))
    for i, j in zip(*np.nonzero(~np.isfinite(d) | (d < 0))):
        out.append(("negative", (int(i), int(j))))
    for i, j in zip(*np.nonzero(np.triu(d != d.T, 1))):
        out.append(("symmetry", (int(i), int(j))))
    # d[i,k] + d[k,j] for every k, compared with d[i,j]
    for k in range(n):
        via = d[:, k][:, None] + d[k, :][None, :]
        bad = np.nonzero(d - via > tol)
        for i, j in zip(*bad):
            if i < j and k != i and k != j:
                out.append(("triangle", (int(i), int(j), int(k))))
    return out


def check_metric(X: FiniteMetricSpace) -> None:
    violations = validate_metric(X)
    if violations:
        kind, idx = violations[0]
        raise MetricError(f"invalid metric: {len(violations)} violation(s), first is {kind} at {idx}")


def perturbation_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """Sup-norm distance between two metrics on the same index set."""
    if X.n != Y.n:
        raise MetricError(f"size mismatch: {X.n} vs {Y.n}")
    if X.n == 0:
        return 0.0
    return float(np.max(np.abs(X.d - Y.d)))


@dataclass(frozen=True)
class Dendrogram:
    """Single-linkage merge history.

    ``events`` is a sorted tuple of ``(height, blocks)`` where ``blocks`` is a
    tuple of disjoint frozensets that become one block at ``height``.
    """

    n: int
    events: tuple = field(default=())

    @property
    def heights(self) -> list[float]:
        return [h for h, _ in self.events]

    def partition(self, R: float) -> list[frozenset]:
        """Blocks of the partition at scale ``R`` (merges at height <= R applied)."""
        ds = DisjointSet(range(self.n))
        for h, blocks in self.events:
            if h > R:
                break
            first = min(blocks[0])
            for b in blocks[1:]:
                ds.merge(first, min(b))
        blocks = [frozenset(s) for s in ds.subsets()]
        return sorted(blocks, key=min)


def single_linkage_dendrogram(X: FiniteMetricSpace) -> Dendrogram:
    check_metric(X)
    n = X.n
    iu, ju = np.triu_indices(n, 1)
    w = X.d[iu, ju]
    order = np.lexsort((ju, iu, w))
    ds = DisjointSet(range(n))
    events = []
    pos = 0
    while pos < len(order):
        h = w[order[pos]]
        end = pos
        while end < len(order) and w[order[end]] == h:
            end += 1
        # merge everything at this height on a scratch copy of the current blocks
        before = {min(s): frozenset(s) for s in ds.subsets()}
        touched = DisjointSet(before.keys())
        for e in order[pos:end]:
            a, b = min(ds.subset(int(iu[e]))), min(ds.subset(int(ju[e])))
            touched.merge(a, b)
        for group in touched.subsets():
            if len(group) > 1:
                reps = sorted(group)
                events.append((float(h), tuple(before[r] for r in reps)))
                for r in reps[1:]:
                    ds.merge(reps[0], r)
        pos = end
    events.sort(key=lambda ev: (ev[0], min(ev[1][0])))
    return Dendrogram(n, tuple(events))


def connected_components_at(X: FiniteMetricSpace, R: float) -> list[frozenset]:
    """Components of the graph joining points at distance <= R."""
    ds = DisjointSet(range(X.n))
    for i, j in zip(*np.nonzero(np.triu(X.d <= R, 1))):
        ds.merge(int(i), int(j))
    return sorted((frozenset(s) for s in ds.subsets()), key=min)


def random_euclidean(n: int, dim: int, rng: np.random.Generator) -> FiniteMetricSpace:
    return euclidean_metric(rng.uniform(0, 1, size=(n, dim)))


def from_iterable_rows(rows: Iterable[Sequence[float]]) -> FiniteMetricSpace:
    """Build a metric from full-square or lower-triangular rows."""
    rows = [list(map(float, r)) for r in rows]
    m = len(rows)
    lengths = [len(r) for r in rows]
    if all(L == m for L in lengths):
        return FiniteMetricSpace(np.array(rows).reshape(m, m))
    if lengths != list(range(1, m + 1)):
        raise MetricError("distance rows are neither square nor lower-triangular")
    with_diagonal = all(r[-1] == 0.0 for r in rows)
    n = m if with_diagonal else m + 1
    d = np.zeros((n, n))
    for k, r in enumerate(rows):
        i = k if with_diagonal else k + 1
        for j, v in enumerate(r[:i]):
            d[i, j] = d[j, i] = v
    return FiniteMetricSpace(d)


def merge_heights(dendrogram: Dendrogram) -> list[float]:
    """Minimum-spanning-tree edge weights: one height per pairwise merge (n - 1 total)."""
    out = []
    for h, blocks in dendrogram.events:
        out.extend([h] * (len(blocks) - 1))
    return out
