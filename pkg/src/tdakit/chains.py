"""Simplicial chains over Z/p: boundary matrices, homology bases, induced maps.

These are dense routines meant for the small complexes that appear in
zig-zag diagrams, rank invariants and certificate checks; barcodes of large
filtrations go through the sparse reduction in :mod:`tdakit.persistence`.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _linalg as la


def by_dimension(simplices: Iterable[Sequence[int]], k: int) -> list[tuple]:
    return sorted(tuple(s) for s in simplices if len(s) == k + 1)


def boundary_dense(rows: Sequence[tuple], cols: Sequence[tuple], p: int) -> np.ndarray:
    """Matrix of the boundary map from chains on ``cols`` to chains on ``rows``."""
    index = {s: i for i, s in enumerate(rows)}
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            M[index[face], j] = (-1) ** i % p
    return M


class Homology:
    """Explicit degree-``k`` homology of a finite simplicial complex over Z/p.

    ``basis`` holds cycle representatives (as columns over ``simplices_k``)
    whose classes form a basis of H_k.
    """

    def __init__(self, simplices: Iterable[Sequence[int]], k: int, p: int = 2):
        simplices = {tuple(sorted(s)) for s in simplices}
        self.k, self.p = k, p
        self.cells = by_dimension(simplices, k)
        self.index = {s: i for i, s in enumerate(self.cells)}
        lower = by_dimension(simplices, k - 1) if k > 0 else []
        upper = by_dimension(simplices, k + 1)
        n = len(self.cells)
        if k > 0 and n:
            Z = la.nullspace(boundary_dense(lower, self.cells, p), p)
        else:
            Z = np.eye(n, dtype=np.int64)
        self.boundaries = la.column_basis(boundary_dense(self.cells, upper, p), p) if upper else np.zeros((n, 0), dtype=np.int64)
        nb = self.boundaries.shape[1]
        if n == 0:
            self.basis = np.zeros((0, 0), dtype=np.int64)
            return
        # extend a boundary basis by cycles; the added cycles represent H_k
        stacked = np.hstack([self.boundaries, Z])
        _, piv = la.rref(stacked, p)
        self.basis = stacked[:, [c for c in piv if c >= nb]].reshape(n, -1) % p

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def coordinates(self, chain: np.ndarray) -> np.ndarray:
        """Coordinates of the class of cycle ``chain`` (or a matrix of cycles) in ``basis``."""
        chain = np.asarray(chain, dtype=np.int64)
        h = self.rank
        A = np.hstack([self.basis, self.boundaries])
        x = la.solve(A, chain, self.p)
        if x is None:
            raise ValueError("chain is not a cycle of this complex")
        return x[:h] % self.p

    def chain(self, terms: Mapping[tuple, int]) -> np.ndarray:
        v = np.zeros(len(self.cells), dtype=np.int64)
        for s, c in terms.items():
            v[self.index[s]] = (v[self.index[s]] + c) % self.p
        return v


def push_forward(cells: Sequence[tuple], column: np.ndarray, vertex_map: Mapping[int, int] | None,
                 p: int) -> dict:
    """Image of a chain under a simplicial map (identity if ``vertex_map`` is None)."""
    out: dict[tuple, int] = {}
    for s, c in zip(cells, column):
        if c % p == 0:
            continue
        img = [vertex_map[v] for v in s] if vertex_map is not None else list(s)
        if len(set(img)) < len(img):
            continue
        order = sorted(range(len(img)), key=img.__getitem__)
        sign = _perm_sign(order)
        key = tuple(img[i] for i in order)
        out[key] = (out.get(key, 0) + sign * int(c)) % p
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def induced_map(source: Homology, target: Homology, vertex_map: Mapping[int, int] | None = None) -> np.ndarray:
    """Matrix (target rank x source rank) of the map on homology induced by a simplicial map."""
    p = source.p
    M = np.zeros((target.rank, source.rank), dtype=np.int64)
    if source.rank == 0 or target.rank == 0:
        return M
    cols = []
    for j in range(source.rank):
        img = push_forward(source.cells, source.basis[:, j], vertex_map, p)
        cols.append(target.chain(img))
    return target.coordinates(np.column_stack(cols)).reshape(target.rank, source.rank) % p


def betti(simplices: Iterable[Sequence[int]], k: int, p: int = 2) -> int:
    """Betti number by rank-nullity on dense boundary matrices."""
    simplices = {tuple(sorted(s)) for s in simplices}
    cells = by_dimension(simplices, k)
    lower = by_dimension(simplices, k - 1) if k > 0 else []
    upper = by_dimension(simplices, k + 1)
    rk = la.rank(boundary_dense(lower, cells, p), p) if (k > 0 and cells) else 0
    rk1 = la.rank(boundary_dense(cells, upper, p), p) if upper else 0
    return len(cells) - rk - rk1


def inclusion_rank(small: Iterable[Sequence[int]], big: Iterable[Sequence[int]], k: int, p: int = 2) -> int:
    """Rank of H_k(small) -> H_k(big) for a subcomplex ``small`` of ``big``."""
    small = {tuple(sorted(s)) for s in small}
    big = {tuple(sorted(s)) for s in big}
    if not small <= big:
        raise ValueError("not a subcomplex")
    cells = by_dimension(big, k)
    lower = by_dimension(big, k - 1) if k > 0 else []
    upper = by_dimension(big, k + 1)
    sub_cells = by_dimension(small, k)
    if not sub_cells:
        return 0
    idx = {s: i for i, s in enumerate(cells)}
    if k > 0:
        Zs = la.nullspace(boundary_dense(by_dimension(small, k - 1), sub_cells, p), p)
    else:
        Zs = np.eye(len(sub_cells), dtype=np.int64)
    Z = np.zeros((len(cells), Zs.shape[1]), dtype=np.int64)
    for i, s in enumerate(sub_cells):
        Z[idx[s]] = Zs[i]
    Bd = boundary_dense(cells, upper, p) if upper else np.zeros((len(cells), 0), dtype=np.int64)
    return la.rank(np.hstack([Z, Bd]), p) - la.rank(Bd, p)


def euler_characteristic(simplices: Iterable[Sequence[int]]) -> int:
    return sum((-1) ** (len(s) - 1) for s in {tuple(s) for s in simplices})


def all_faces(simplex: Sequence[int]):
    s = tuple(simplex)
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)
