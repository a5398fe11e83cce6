"""Persistence barcodes by boundary-matrix reduction, plus fixed-scale homology tools."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _core, chains
from ._linalg import is_prime
from .complexes import ComplexError, FilteredComplex
from .diagrams import Diagram


class ClosureError(ComplexError):
    pass


def check_field(p: int) -> int:
    if not is_prime(int(p)):
        raise ValueError(f"coefficient field needs a prime, got {p}")
    return int(p)


def check_closure(K: FilteredComplex) -> None:
    problems = K.audit()
    if problems:
        kind, face, s = problems[0]
        msg = "missing face" if kind == "missing" else "face enters after coface"
        raise ClosureError(f"{msg}: {face} of {s} ({len(problems)} problem(s))")


def boundary_csc(K: FilteredComplex, p: int = 2):
    """Sparse boundary matrix in filtration order as ``(indptr, indices, coefs)``.

    Row indices within a column are ascending; coefficients are the usual
    alternating signs reduced mod ``p``.
    """
    idx = K.index
    indptr = [0]
    indices: list[int] = []
    coefs: list[int] = []
    for s in K.simplices:
        if len(s) > 1:
            col = sorted((idx[s[:i] + s[i + 1:]], (-1) ** i % p) for i in range(len(s)))
            indices.extend(r for r, _ in col)
            coefs.extend(c for _, c in col)
        indptr.append(len(indices))
    as64 = lambda a: np.ascontiguousarray(a, dtype=np.int64)
    return as64(indptr), as64(indices), as64(coefs)


def reduce(K: FilteredComplex, p: int = 2, backend: str | None = None) -> np.ndarray:
    """Pivot row of every reduced column (``-1`` for zero columns)."""
    indptr, indices, coefs = boundary_csc(K, p)
    ker = _core.kernels(backend)
    if p == 2:
        return ker.reduce_z2(indptr, indices, len(K))
    return ker.reduce_zp(indptr, indices, coefs, len(K), p)


@dataclass(frozen=True)
class Barcode:
    """Per-dimension diagrams plus the simplex pairing that produced them.

    ``pairs`` lists ``(birth_index, death_index)`` into the complex's simplices
    in filtration order; ``death_index`` is ``-1`` for essential classes.
    Zero-length pairs are kept in ``pairs`` but dropped from the diagrams.
    """

    diagrams: Mapping[int, Diagram]
    pairs: tuple = field(default=(), repr=False)

    def __getitem__(self, k: int) -> Diagram:
        return self.diagrams.get(k, Diagram())

    def items(self):
        return sorted(self.diagrams.items())

    @property
    def dims(self) -> list[int]:
        return sorted(self.diagrams)

    def __eq__(self, other):
        if not isinstance(other, Barcode):
            return NotImplemented
        dims = set(self.diagrams) | set(other.diagrams)
        return all(self[k] == other[k] for k in dims)


def compute_barcodes(K: FilteredComplex, p: int = 2, max_hom_dim: int | None = None,
                     backend: str | None = None) -> Barcode:
    """Persistence barcode of a filtered complex over Z/p."""
    p = check_field(p)
    check_closure(K)
    if max_hom_dim is None:
        max_hom_dim = max(K.dim, 0)
    low = reduce(K, p, backend)
    dims = [len(s) - 1 for s in K.simplices]
    vals = K.values
    paired = set()
    pairs = []
    for j, i in enumerate(low):
        if i >= 0:
            paired.add(int(i))
            pairs.append((int(i), j))
    for j in range(len(K)):
        if low[j] < 0 and j not in paired:
            pairs.append((j, -1))
    pairs.sort()
    pts: dict[int, list] = {k: [] for k in range(max_hom_dim + 1)}
    for b, d in pairs:
        k = dims[b]
        if k <= max_hom_dim:
            pts[k].append((vals[b], vals[d] if d >= 0 else np.inf))
    return Barcode({k: Diagram(v) for k, v in pts.items()}, tuple(pairs))


def lower_star_filtration(K: FilteredComplex, f) -> FilteredComplex:
    """Re-filter ``K`` so each simplex enters at the max of ``f`` over its vertices."""
    if isinstance(f, Mapping):
        get = f.__getitem__
    else:
        arr = np.asarray(f, dtype=float)
        get = arr.__getitem__
    values = []
    for s in K.simplices:
        try:
            values.append(max(float(get(v)) for v in s))
        except (KeyError, IndexError):
            raise ValueError(f"vertex function is missing a value on {s}") from None
    return K.with_values(values)


def betti_at(K: FilteredComplex, r: float, dim: int, p: int = 2) -> int:
    """Betti number of the sublevel complex at ``r``."""
    p = check_field(p)
    return chains.betti(K.simplex_set(r), dim, p)


def boundary_kernel_rank(R, Fsub, p: int = 2, backend: str | None = None) -> int:
    """Dimension of ker(H_1(F) -> H_1(R)), the image of H_2(R, F) under the connecting map.

    Computed as the number of H_1 intervals of the two-step filtration
    ``F`` at 0, ``R`` at 1 that are born at 0 and die at 1.
    """
    p = check_field(p)
    big = R.simplex_set() if isinstance(R, FilteredComplex) else {tuple(sorted(s)) for s in R}
    small = Fsub.simplex_set() if isinstance(Fsub, FilteredComplex) else {tuple(sorted(s)) for s in Fsub}
    if not small <= big:
        raise ComplexError("F is not a subcomplex of R")
    K = FilteredComplex((s, 0.0 if s in small else 1.0) for s in big if len(s) <= 3)
    dgm = compute_barcodes(K, p, max_hom_dim=1, backend=backend)[1]
    return int(np.sum((dgm.births == 0.0) & (dgm.deaths == 1.0)))


def relative_h_certificate(R, Fsub, p: int = 2) -> bool:
    """Whether some class of H_2(R, F) has nonzero boundary in H_1(F).

    By exactness of the pair sequence the image of the connecting map equals
    the kernel of H_1(F) -> H_1(R), which is what is computed here.
    """
    return boundary_kernel_rank(R, Fsub, p) > 0


# --- two-parameter rank invariant -------------------------------------------------


class Bifiltration:
    """One-critical bifiltration: each simplex carries a grade ``(u, v)``."""

    def __init__(self, entries):
        self.entries = [(tuple(sorted(int(x) for x in s)), (float(g[0]), float(g[1]))) for s, g in entries]
        grade = dict(self.entries)
        for s, (u, v) in self.entries:
            if len(s) < 2:
                continue
            for face in itertools.combinations(s, len(s) - 1):
                if face not in grade:
                    raise ClosureError(f"missing face {face} of {s}")
                fu, fv = grade[face]
                if fu > u or fv > v:
                    raise ClosureError(f"face {face} has grade above its coface {s}")

    def sublevel(self, x) -> set:
        return {s for s, (u, v) in self.entries if u <= x[0] and v <= x[1]}

    @classmethod
    def from_filtration(cls, K: FilteredComplex, second: float = 0.0) -> "Bifiltration":
        return cls((s, (v, second)) for s, v in K)


def rank_invariant_2d(B: Bifiltration, p: int, hom_dim: int, grid: Sequence) -> dict:
    """``r(x, y)`` for every pair of grid grades: rank of H(B_x) -> H(B_y), zero unless x <= y."""
    p = check_field(p)
    grid = [(float(a), float(b)) for a, b in grid]
    levels = {x: B.sublevel(x) for x in grid}
    out = {}
    for x in grid:
        for y in grid:
            if x[0] <= y[0] and x[1] <= y[1]:
                out[(x, y)] = chains.inclusion_rank(levels[x], levels[y], hom_dim, p)
            else:
                out[(x, y)] = 0
    return out
