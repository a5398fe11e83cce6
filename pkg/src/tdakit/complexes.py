"""Filtered simplicial complexes built from metric data.

Every constructor returns a :class:`FilteredComplex`: a list of simplices
(strictly increasing vertex tuples) each carrying the scale at which it
enters.  Simplices are kept in filtration order, i.e. sorted by
``(value, dimension, vertices)``, which places every face before its cofaces
as long as values are monotone.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial import Delaunay

from .metric import FiniteMetricSpace, as_point_cloud, check_metric, euclidean_metric


class ComplexError(ValueError):
    pass


def _key(simplex, value):
    return (value, len(simplex), simplex)


class FilteredComplex:
    """Simplices with entrance values, stored in filtration order."""

    def __init__(self, entries: Iterable[tuple[Sequence[int], float]], max_dim: int | None = None):
        items = []
        for s, v in entries:
            s = tuple(int(x) for x in s)
            if not s:
                raise ComplexError("empty simplex")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ComplexError(f"simplex {s} is not strictly increasing")
            items.append((s, float(v)))
        items.sort(key=lambda e: _key(*e))
        self.simplices: tuple[tuple[int, ...], ...] = tuple(s for s, _ in items)
        self.values = np.array([v for _, v in items], dtype=float)
        self.values.setflags(write=False)
        top = max((len(s) - 1 for s in self.simplices), default=-1)
        self.max_dim = top if max_dim is None else max_dim
        self._index = None

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(zip(self.simplices, self.values.tolist()))

    def __repr__(self):
        counts = np.bincount([len(s) - 1 for s in self.simplices]).tolist() if self.simplices else []
        return f"FilteredComplex({len(self)} simplices, counts by dim {counts})"

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {s: i for i, s in enumerate(self.simplices)}
        return self._index

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices if len(s) == 1]

    def value(self, simplex) -> float:
        return float(self.values[self.index[tuple(simplex)]])

    def simplex_set(self, r: float | None = None) -> set:
        if r is None:
            return set(self.simplices)
        return {s for s, v in zip(self.simplices, self.values) if v <= r}

    def sublevel(self, r: float) -> "FilteredComplex":
        return FilteredComplex(((s, v) for s, v in self if v <= r), self.max_dim)

    def skeleton(self, k: int) -> "FilteredComplex":
        return FilteredComplex(((s, v) for s, v in self if len(s) - 1 <= k), min(self.max_dim, k))

    def audit(self) -> list[tuple]:
        """Closure problems: ``("missing", face, simplex)`` or ``("order", face, simplex)``."""
        out = []
        idx = self.index
        for s, v in self:
            if len(s) == 1:
                continue
            for face in itertools.combinations(s, len(s) - 1):
                j = idx.get(face)
                if j is None:
                    out.append(("missing", face, s))
                elif self.values[j] > v:
                    out.append(("order", face, s))
        return out

    def with_values(self, values: Sequence[float]) -> "FilteredComplex":
        return FilteredComplex(zip(self.simplices, values), self.max_dim)


def closure(simplices: Iterable[Sequence[int]]) -> set:
    """All faces of the given simplices."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(itertools.combinations(s, k))
    return out


def snap_values(entries: list[tuple], rtol: float = 1e-12) -> list[tuple]:
    """Merge filtration values that differ only by rounding, keeping the smallest of each cluster.

    The map is non-decreasing, so face/coface order is preserved.
    """
    vals = np.unique([v for _, v in entries])
    rep = {}
    start = None
    for v in vals:
        if start is None or v - start > rtol * max(1.0, abs(start)):
            start = v
        rep[v] = start
    return [(s, rep[v]) for s, v in entries]


def flag_complex(vertex_values: Mapping[int, float], edge_values: Mapping[tuple, float], max_dim: int) -> FilteredComplex:
    """Clique complex of a weighted graph; a simplex enters at the max of its edges and vertices."""
    upper: dict[int, list[int]] = {v: [] for v in vertex_values}
    for (a, b) in edge_values:
        a, b = min(a, b), max(a, b)
        upper[a].append(b)
    nbr = {v: set(ns) for v, ns in upper.items()}
    ev = {(min(a, b), max(a, b)): float(w) for (a, b), w in edge_values.items()}
    entries = []

    def expand(simplex, value, cand):
        entries.append((simplex, value))
        if len(simplex) > max_dim:
            return
        for v in sorted(cand):
            new_value = max([value, vertex_values[v]] + [ev[(u, v)] for u in simplex])
            expand(simplex + (v,), new_value, cand & nbr[v])

    for v in sorted(vertex_values):
        expand((v,), float(vertex_values[v]), nbr[v])
    return FilteredComplex(entries, max_dim)


def vietoris_rips(X: FiniteMetricSpace, r_max: float, max_dim: int, validate: bool = True) -> FilteredComplex:
    """Vietoris-Rips filtration truncated at scale ``r_max`` and dimension ``max_dim``."""
    if r_max < 0 or max_dim < 0:
        raise ComplexError("r_max and max_dim must be non-negative")
    if validate:
        check_metric(X)
    d = X.d
    iu, ju = np.nonzero(np.triu(d <= r_max, 1))
    edges = {(int(i), int(j)): float(d[i, j]) for i, j in zip(iu, ju)} if max_dim >= 1 else {}
    return flag_complex({v: 0.0 for v in range(X.n)}, edges, max_dim)


# --- Cech -------------------------------------------------------------------


def _circumball(P: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Centre and radius of the smallest ball with all rows of ``P`` on its boundary."""
    p0 = P[0]
    A = P[1:] - p0
    G = A @ A.T
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(lam)):
        return None
    c = p0 + lam @ A
    return c, float(np.linalg.norm(c - p0))


def miniball_radius(P: np.ndarray, dist: np.ndarray | None = None, tol: float = 1e-12) -> float:
    """Radius of the minimum enclosing ball, by enumerating support sets."""
    m, dim = P.shape
    if m == 1:
        return 0.0
    if dist is None:
        dist = euclidean_metric(P).d
    best = np.inf
    for k in range(2, min(m, dim + 1) + 1):
        for S in itertools.combinations(range(m), k):
            if k == 2:
                c = 0.5 * (P[S[0]] + P[S[1]])
                r = 0.5 * dist[S[0], S[1]]
            else:
                ball = _circumball(P[list(S)])
                if ball is None:
                    continue
                c, r = ball
            if r >= best:
                continue
            if np.all(np.linalg.norm(P - c, axis=1) <= r * (1 + tol) + tol):
                best = r
    return best


def cech(points, r_max: float, max_dim: int) -> FilteredComplex:
    """Cech filtration: a simplex enters at the radius of the miniball of its vertices."""
    pc = as_point_cloud(points)
    dim = pc.shape[1]
    if dim > 3:
        raise ComplexError(f"cech supports ambient dimension <= 3, got {dim}")
    if max_dim > dim + 1:
        raise ComplexError(f"max_dim must be <= {dim + 1} for points in R^{dim}")
    X = euclidean_metric(pc)
    candidates = vietoris_rips(X, 2 * r_max, max_dim, validate=False)
    values: dict[tuple, float] = {}
    for s, _ in candidates:
        if len(s) == 1:
            values[s] = 0.0
            continue
        idx = list(s)
        r = miniball_radius(pc[idx], X.d[np.ix_(idx, idx)])
        faces = [values[f] for f in itertools.combinations(s, len(s) - 1) if f in values]
        values[s] = max([r] + faces)
    kept = [(s, v) for s, v in values.items() if v <= r_max]
    return FilteredComplex(snap_values(kept), max_dim)


def check_interleaving(points, r: float, max_dim: int) -> bool:
    """Whether Cech(r) is inside Rips(2r) and Rips(r) is inside Cech(r), as simplex sets."""
    pc = as_point_cloud(points)
    X = euclidean_metric(pc)
    c = cech(pc, r, max_dim).simplex_set()
    return c <= vietoris_rips(X, 2 * r, max_dim).simplex_set() and vietoris_rips(X, r, max_dim).simplex_set() <= c


# --- alpha --------------------------------------------------------------------


def alpha_complex_2d(points) -> FilteredComplex:
    """Alpha filtration of a planar point set; values are radii (not squared)."""
    pc = as_point_cloud(points)
    if pc.shape[1] != 2:
        raise ComplexError("alpha_complex_2d needs planar points")
    n = len(pc)
    if n == 0:
        raise ComplexError("no points")
    if len(np.unique(pc, axis=0)) != n:
        raise ComplexError("coincident points")
    D = euclidean_metric(pc).d
    entries = [((v,), 0.0) for v in range(n)]
    if n == 1:
        return FilteredComplex(entries, 0)
    if n == 2:
        return FilteredComplex(entries + [((0, 1), D[0, 1] / 2)], 1)
    try:
        tri = Delaunay(pc)
        triangles = [tuple(sorted(int(x) for x in t)) for t in tri.simplices]
    except Exception:
        # collinear input: the Delaunay graph is the path in sorted order
        order = np.lexsort(pc.T[::-1])
        path = [tuple(sorted((int(a), int(b)))) for a, b in zip(order, order[1:])]
        return FilteredComplex(entries + [(e, D[e] / 2) for e in path], 1)

    tri_value = {}
    incident: dict[tuple, list[tuple]] = {}
    for t in triangles:
        ball = _circumball(pc[list(t)])
        tri_value[t] = ball[1] if ball is not None else np.inf
        for e in itertools.combinations(t, 2):
            incident.setdefault(e, []).append(t)
    for e, ts in incident.items():
        a, b = e
        mid = 0.5 * (pc[a] + pc[b])
        half = D[a, b] / 2
        attached = False
        for t in ts:
            (c,) = set(t) - set(e)
            if np.linalg.norm(pc[c] - mid) < half * (1 - 1e-12):
                attached = True
        value = min(tri_value[t] for t in ts) if attached else half
        entries.append((e, value))
    for t, v in tri_value.items():
        faces = [x for e, x in entries if len(e) == 2 and set(e) <= set(t)]
        entries.append((t, max([v] + faces)))
    return FilteredComplex(snap_values(entries), 2)


# --- witness family -------------------------------------------------------------


def _landmark_array(X: FiniteMetricSpace, landmarks: Sequence[int]) -> np.ndarray:
    L = np.asarray(sorted(set(int(l) for l in landmarks)), dtype=int)
    if len(L) == 0:
        raise ComplexError("landmark set is empty")
    if L[0] < 0 or L[-1] >= X.n:
        raise ComplexError("landmark index out of range")
    return L


def _strong_values(X: FiniteMetricSpace, L: np.ndarray, r_max: float, max_dim: int) -> dict:
    """Map landmark simplex -> least R at which some witness certifies it."""
    DL = X.d[:, L]
    m = DL.min(axis=1)
    values: dict[tuple, float] = {}
    for x in range(X.n):
        slack = DL[x] - m[x]
        near = np.nonzero(slack <= r_max)[0]
        for k in range(1, min(len(near), max_dim + 1) + 1):
            for sub in itertools.combinations(near, k):
                s = tuple(int(L[i]) for i in sub)
                v = float(max(slack[list(sub)]))
                if v < values.get(s, np.inf):
                    values[s] = v
    return values


def witness(X: FiniteMetricSpace, landmarks: Sequence[int], r_max: float, variant: str = "strong",
            max_dim: int = 2) -> FilteredComplex:
    """Witness filtration on ``landmarks`` (indices into ``X``).

    ``variant`` is ``"strong"``, ``"lazy"`` (strong edges, flag completion) or
    ``"weak"`` (edges certified against the second-closest landmark, flag
    completion).  Witnesses range over all of ``X``, landmarks included.
    """
    L = _landmark_array(X, landmarks)
    if variant == "strong":
        return FilteredComplex(_strong_values(X, L, r_max, max_dim).items(), max_dim)
    verts = {int(l): 0.0 for l in L}
    if variant == "lazy":
        edges = {s: v for s, v in _strong_values(X, L, r_max, min(max_dim, 1)).items() if len(s) == 2}
    elif variant == "weak":
        if len(L) < 2:
            raise ComplexError("weak witness complex needs at least two landmarks")
        DL = X.d[:, L]
        delta = np.sort(DL, axis=1)[:, 1]
        edges = {}
        if max_dim >= 1:
            for i, j in itertools.combinations(range(len(L)), 2):
                v = float(np.min(np.maximum(DL[:, i], DL[:, j]) - delta))
                v = max(v, 0.0)
                if v <= r_max:
                    edges[(int(L[i]), int(L[j]))] = v
    else:
        raise ComplexError(f"unknown witness variant {variant!r}")
    return flag_complex(verts, edges, max_dim)


@dataclass(frozen=True)
class BivariantWitness:
    """Witness complex on landmark pairs together with its two projections."""

    complex: FilteredComplex
    pairs: tuple  # vertex id -> (l1, l2)

    @property
    def proj1(self) -> dict:
        return {i: p[0] for i, p in enumerate(self.pairs)}

    @property
    def proj2(self) -> dict:
        return {i: p[1] for i, p in enumerate(self.pairs)}


def bivariant_witness(X: FiniteMetricSpace, L1: Sequence[int], L2: Sequence[int], R: float,
                      max_dim: int = 2) -> BivariantWitness:
    """Simplices of pairs ``(l1, l2)`` witnessed simultaneously in both landmark sets at scale ``R``."""
    A = _landmark_array(X, L1)
    B = _landmark_array(X, L2)
    DA, DB = X.d[:, A], X.d[:, B]
    sa = DA - DA.min(axis=1, keepdims=True)
    sb = DB - DB.min(axis=1, keepdims=True)
    values: dict[tuple, float] = {}
    for x in range(X.n):
        na = np.nonzero(sa[x] <= R)[0]
        nb = np.nonzero(sb[x] <= R)[0]
        pairs = [(int(i), int(j)) for i in na for j in nb]
        for k in range(1, min(len(pairs), max_dim + 1) + 1):
            for sub in itertools.combinations(pairs, k):
                v = max(max(sa[x, i], sb[x, j]) for i, j in sub)
                key = tuple((int(A[i]), int(B[j])) for i, j in sub)
                if v < values.get(key, np.inf):
                    values[key] = float(v)
    pair_list = sorted({p for s in values for p in s})
    pid = {p: i for i, p in enumerate(pair_list)}
    entries = [(tuple(sorted(pid[p] for p in s)), v) for s, v in values.items()]
    return BivariantWitness(FilteredComplex(entries, max_dim), tuple(pair_list))


# --- nerve ----------------------------------------------------------------------


def nerve(blocks: Sequence[Iterable], max_dim: int, ground: Iterable | None = None) -> FilteredComplex:
    """Nerve of a cover: block indices span a simplex iff the blocks share an element."""
    sets = [frozenset(b) for b in blocks]
    if ground is not None:
        missing = set(ground) - set().union(*sets) if sets else set(ground)
        if missing:
            warnings.warn(f"cover misses {len(missing)} ground element(s)", stacklevel=2)
    entries = []

    def expand(simplex, common):
        entries.append((simplex, 0.0))
        if len(simplex) > max_dim:
            return
        for j in range(simplex[-1] + 1, len(sets)):
            inter = common & sets[j]
            if inter:
                expand(simplex + (j,), inter)

    for i, s in enumerate(sets):
        if s:
            expand((i,), s)
    return FilteredComplex(entries, max_dim)
