"""Mapper: pull back an interval cover along a filter, cluster each block, take the nerve."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complexes import FilteredComplex, nerve
from .metric import FiniteMetricSpace, merge_heights, single_linkage_dendrogram


@dataclass(frozen=True)
class IntervalCover:
    """``n_intervals`` equal closed intervals over ``[lo, hi]``, consecutive ones overlapping by ``overlap``."""

    n_intervals: int
    overlap: float

    def __post_init__(self):
        if self.n_intervals < 1:
            raise ValueError("need at least one interval")
        if not 0 <= self.overlap < 1:
            raise ValueError("overlap must lie in [0, 1)")

    def intervals(self, lo: float, hi: float) -> list[tuple[float, float]]:
        n, g = self.n_intervals, self.overlap
        length = (hi - lo) / (n - (n - 1) * g)
        step = length * (1 - g)
        out = [(lo + i * step, lo + i * step + length) for i in range(n)]
        # pin the last endpoint against rounding so the range is covered
        out[-1] = (out[-1][0], hi)
        return out


@dataclass(frozen=True)
class MapperGraph:
    nodes: tuple  # of (interval index, frozenset of members)
    intervals: tuple
    complex: FilteredComplex

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [s for s in self.complex.simplices if len(s) == 2]

    @property
    def simplices(self) -> list[tuple]:
        return list(self.complex.simplices)

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": i, "interval": list(self.intervals[iv]), "members": sorted(m)}
                      for i, (iv, m) in enumerate(self.nodes)],
            "edges": [list(e) for e in self.edges],
            "simplices": [list(s) for s in self.simplices],
        }


def gap_threshold(heights: Sequence[float], bins: int = 10) -> float:
    """Cut height from a histogram of single-linkage merge heights.

    Heights are binned into ``bins`` equal bins over ``[0, max]``.  The result
    is the left edge of the first empty bin lying above the first occupied
    one, or ``inf`` (a single cluster) when there is no such bin.
    """
    h = np.asarray(heights, dtype=float)
    if len(h) == 0 or h.max() <= 0:
        return math.inf
    counts, edges = np.histogram(h, bins=bins, range=(0.0, float(h.max())))
    first = int(np.nonzero(counts)[0][0])
    empty = np.nonzero(counts[first:] == 0)[0]
    if len(empty) == 0:
        return math.inf
    return float(edges[first + empty[0]])


def _clusters(X: FiniteMetricSpace, members: list[int], bins: int) -> list[frozenset]:
    if len(members) == 1:
        return [frozenset(members)]
    sub = X.restrict(members)
    dendro = single_linkage_dendrogram(sub)
    thr = gap_threshold(merge_heights(dendro), bins)
    if math.isinf(thr):
        return [frozenset(members)]
    # heights below the empty bin are exactly the merges to keep
    keep = max((h for h in dendro.heights if h < thr), default=-1.0)
    blocks = dendro.partition(keep) if keep >= 0 else [frozenset([i]) for i in range(len(members))]
    return [frozenset(members[i] for i in b) for b in blocks]


def mapper(X: FiniteMetricSpace, f, cover: IntervalCover, max_dim: int = 2, bins: int = 10) -> MapperGraph:
    """Mapper graph of ``X`` for a real-valued filter ``f``.

    Node order is (interval index, smallest member), which makes the output
    deterministic.
    """
    if X.n == 0:
        raise ValueError("empty metric space")
    f = np.asarray(f, dtype=float)
    if f.ndim == 2 and f.shape[1] == 1:
        f = f[:, 0]
    if f.shape != (X.n,):
        raise ValueError("filter must give one real value per point")
    lo, hi = float(f.min()), float(f.max())
    intervals = cover.intervals(lo, hi) if hi > lo else [(lo, hi)] * cover.n_intervals
    nodes = []
    for k, (a, b) in enumerate(intervals):
        members = [int(i) for i in np.nonzero((f >= a) & (f <= b))[0]]
        if not members:
            continue
        for c in sorted(_clusters(X, members, bins), key=min):
            nodes.append((k, c))
    if hi == lo:
        # every interval is the same point; keep one copy of the clusters
        nodes = [nd for nd in nodes if nd[0] == 0]
    K = nerve([m for _, m in nodes], max_dim, ground=range(X.n))
    return MapperGraph(tuple(nodes), tuple(intervals), K)
