"""Persistence diagrams and the metrics and statistics defined on them.

A :class:`Diagram` is a multiset of ``(birth, death)`` points with
``death > birth``; points on the diagonal are dropped on construction, which
is the quotient that identifies barcodes differing by zero-length intervals.
Deaths may be ``inf``.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


class DiagramError(ValueError):
    pass


class Diagram:
    """Canonical multiset of intervals, stored sorted by (birth, death)."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Sequence[float]] = ()):
        pts = np.array([(float(a), float(b)) for a, b in points], dtype=float).reshape(-1, 2)
        if np.isnan(pts).any():
            raise DiagramError("NaN in diagram")
        if np.any(pts[:, 1] < pts[:, 0]):
            raise DiagramError("death before birth")
        if np.isinf(pts[:, 0]).any():
            raise DiagramError("infinite birth")
        pts = pts[pts[:, 1] > pts[:, 0]]
        pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
        pts.setflags(write=False)
        self.points = pts

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(map(tuple, self.points.tolist()))

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.all(self.points == other.points))

    def __repr__(self):
        return f"Diagram({self.points.tolist()})"

    @property
    def births(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def deaths(self) -> np.ndarray:
        return self.points[:, 1]

    @property
    def persistence(self) -> np.ndarray:
        return self.points[:, 1] - self.points[:, 0]

    def finite(self) -> "Diagram":
        return Diagram(self.points[np.isfinite(self.points[:, 1])])

    def essential(self) -> np.ndarray:
        """Births of the infinite intervals."""
        return np.sort(self.points[np.isinf(self.points[:, 1]), 0])

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.points)))

    def scaled(self, c: float) -> "Diagram":
        return Diagram(self.points * c)

    def count_containing(self, a: float, b: float) -> int:
        """Number of intervals ``[birth, death)`` containing ``[a, b]``."""
        P = self.points
        return int(np.sum((P[:, 0] <= a) & (P[:, 1] > b)))


def as_diagram(B) -> Diagram:
    return B if isinstance(B, Diagram) else Diagram(B)


# --- matching-based metrics ---------------------------------------------------


def _cost_matrix(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Penalties on the diagonally augmented instance; rows P + diag(Q), columns Q + diag(P)."""
    n1, n2 = len(P), len(Q)
    C = np.full((n1 + n2, n1 + n2), np.inf)
    if n1 and n2:
        C[:n1, :n2] = np.maximum(np.abs(P[:, None, 0] - Q[None, :, 0]), np.abs(P[:, None, 1] - Q[None, :, 1]))
    C[np.arange(n1), n2 + np.arange(n1)] = (P[:, 1] - P[:, 0]) / 2
    C[n1 + np.arange(n2), np.arange(n2)] = (Q[:, 1] - Q[:, 0]) / 2
    C[n1:, n2:] = 0.0
    return C


def _essential_costs(B1: Diagram, B2: Diagram) -> np.ndarray | None:
    e1, e2 = B1.essential(), B2.essential()
    if len(e1) != len(e2):
        return None
    # sorted pairing is optimal for every L^p cost on the line
    return np.abs(e1 - e2)


def _perfect(C: np.ndarray, t: float) -> bool:
    graph = csr_matrix(C <= t)
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(B1, B2) -> float:
    """Bottleneck distance under the sup-norm penalty, computed exactly.

    Infinite intervals are matched among themselves by birth; unequal counts
    give ``inf``.
    """
    B1, B2 = as_diagram(B1), as_diagram(B2)
    ess = _essential_costs(B1, B2)
    if ess is None:
        return math.inf
    P, Q = B1.finite().points, B2.finite().points
    best = float(ess.max()) if len(ess) else 0.0
    if len(P) + len(Q) == 0:
        return best
    C = _cost_matrix(P, Q)
    cand = np.unique(C[np.isfinite(C)])
    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect(C, cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(best, float(cand[lo]))


def _order_key(B: Diagram) -> tuple:
    return len(B), B.points.tobytes()


def wasserstein(B1, B2, p: float = 1.0) -> float:
    """p-Wasserstein distance with sup-norm ground penalty; ``p=inf`` is the bottleneck."""
    if p == math.inf:
        return bottleneck(B1, B2)
    if not p >= 1:
        raise DiagramError(f"Wasserstein order must be >= 1, got {p}")
    B1, B2 = as_diagram(B1), as_diagram(B2)
    if _order_key(B2) < _order_key(B1):
        B1, B2 = B2, B1  # tied optimal matchings can differ in rounding; fix the argument order
    ess = _essential_costs(B1, B2)
    if ess is None:
        return math.inf
    terms = [ess ** p]
    P, Q = B1.finite().points, B2.finite().points
    if len(P) + len(Q):
        C = _cost_matrix(P, Q) ** p
        rows, cols = linear_sum_assignment(C)
        terms.append(C[rows, cols])
    total = math.fsum(np.sort(np.concatenate(terms)))
    return total ** (1.0 / p)


# --- truncation and scalar statistics ------------------------------------------


def truncate(B, x: float) -> Diagram:
    """Cap deaths at ``x`` and delete intervals born at or after ``x``."""
    B = as_diagram(B)
    P = B.points[B.points[:, 0] < x]
    return Diagram(np.column_stack([P[:, 0], np.minimum(P[:, 1], x)]))


def total_persistence(B, k: float = 1.0) -> float:
    B = as_diagram(B)
    if not B.is_finite:
        raise DiagramError("total persistence is undefined with infinite intervals")
    return float(np.sum(B.persistence ** k))


def chi_pers(barcodes, x: float) -> float:
    """Alternating sum over dimensions of total persistence of the x-truncated diagrams.

    ``barcodes`` maps homology dimension to diagram (a :class:`Barcode` works).
    """
    items = barcodes.items() if hasattr(barcodes, "items") else enumerate(barcodes)
    return float(sum((-1) ** k * total_persistence(truncate(B, x)) for k, B in items))


def lambda_stat(B) -> float:
    """Largest death/birth ratio; needs a nonempty diagram with positive births."""
    B = as_diagram(B)
    if len(B) == 0:
        raise DiagramError("lambda statistic of an empty diagram")
    if np.any(B.births <= 0):
        raise DiagramError("lambda statistic needs all births > 0")
    return float(np.max(B.deaths / B.births))


def median_distance_stat(samples: Sequence, B_ref) -> float:
    """Lower median of bottleneck distances from each sample to ``B_ref``."""
    if len(samples) == 0:
        raise DiagramError("no samples")
    d = sorted(bottleneck(S, B_ref) for S in samples)
    return d[(len(d) - 1) // 2]
