"""Zig-zag persistence: explicit diagrams over Z/p and their interval decomposition."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _linalg as la
from .chains import Homology, induced_map
from .complexes import FilteredComplex, bivariant_witness, vietoris_rips, witness
from .metric import FiniteMetricSpace
from .persistence import check_field

FORWARD, BACKWARD = "F", "B"


class ZigzagError(ValueError):
    pass


def _direction(d) -> str:
    d = str(d).upper()
    if d in ("F", "FORWARD", "->"):
        return FORWARD
    if d in ("B", "BACKWARD", "<-"):
        return BACKWARD
    raise ZigzagError(f"unknown arrow direction {d!r}")


@dataclass(frozen=True, eq=False)
class ZigzagDiagram:
    """Vector spaces ``K^dims[t]`` joined by arrows in either direction.

    ``arrows[t]`` joins slot ``t`` and slot ``t+1`` (0-based).  A forward
    matrix has shape ``(dims[t+1], dims[t])``, a backward one
    ``(dims[t], dims[t+1])``.
    """

    dims: tuple
    arrows: tuple  # of (direction, matrix)
    p: int = 2

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims or any(n < 0 for n in dims):
            raise ZigzagError("need at least one slot with non-negative dimension")
        if len(self.arrows) != len(dims) - 1:
            raise ZigzagError(f"{len(dims)} slots need {len(dims) - 1} arrows, got {len(self.arrows)}")
        check_field(self.p)
        arrows = []
        for t, (d, M) in enumerate(self.arrows):
            d = _direction(d)
            shape = (dims[t + 1], dims[t]) if d == FORWARD else (dims[t], dims[t + 1])
            M = np.asarray(M, dtype=np.int64)
            if M.size == 0 and shape[0] * shape[1] == 0:
                M = np.zeros(shape, dtype=np.int64)
            if M.shape != shape:
                raise ZigzagError(f"arrow {t} ({d}) has shape {M.shape}, expected {shape}")
            M = M % self.p
            M.setflags(write=False)
            arrows.append((d, M))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "arrows", tuple(arrows))

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def pattern(self) -> tuple:
        return tuple(d for d, _ in self.arrows)


def interval_module(i: int, j: int, m: int, pattern: Sequence, p: int = 2) -> ZigzagDiagram:
    """Indicator module of the slot interval ``[i, j]`` (1-based, inclusive)."""
    if not (1 <= i <= j <= m):
        raise ZigzagError(f"bad interval [{i}, {j}] for {m} slots")
    pattern = [_direction(d) for d in pattern]
    if len(pattern) != m - 1:
        raise ZigzagError("pattern length must be m - 1")
    dims = [1 if i <= t + 1 <= j else 0 for t in range(m)]
    arrows = []
    for t, d in enumerate(pattern):
        a, b = dims[t], dims[t + 1]
        shape = (b, a) if d == FORWARD else (a, b)
        arrows.append((d, np.ones(shape, dtype=np.int64) if a and b else np.zeros(shape, dtype=np.int64)))
    return ZigzagDiagram(tuple(dims), tuple(arrows), p)


def direct_sum(parts: Sequence[ZigzagDiagram]) -> ZigzagDiagram:
    if not parts:
        raise ZigzagError("empty direct sum")
    p, pattern, m = parts[0].p, parts[0].pattern, parts[0].m
    if any(z.p != p or z.pattern != pattern for z in parts):
        raise ZigzagError("summands must share field and orientation")
    dims = [sum(z.dims[t] for z in parts) for t in range(m)]
    arrows = []
    for t, d in enumerate(pattern):
        blocks = [z.arrows[t][1] for z in parts]
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        M = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            M[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        arrows.append((d, M))
    return ZigzagDiagram(tuple(dims), tuple(arrows), p)


def change_basis(Z: ZigzagDiagram, P: Sequence[np.ndarray]) -> ZigzagDiagram:
    """Conjugate by invertible ``P[t]`` acting on slot ``t`` (an isomorphic diagram)."""
    p = Z.p
    Pinv = [la.inverse(Q, p) if Q.size else Q for Q in P]
    arrows = []
    for t, (d, M) in enumerate(Z.arrows):
        if d == FORWARD:
            N = P[t + 1] @ M @ Pinv[t] if M.size else M
        else:
            N = P[t] @ M @ Pinv[t + 1] if M.size else M
        arrows.append((d, np.asarray(N) % p))
    return ZigzagDiagram(Z.dims, tuple(arrows), p)


def _order_key(birth: int, kind: str):
    # generators earlier in this order may be added to later ones
    return (0, -birth) if kind == BACKWARD else (1, birth)


def decompose(Z: ZigzagDiagram) -> list[tuple[int, int]]:
    """Interval summands ``[i, j]`` (1-based slots), sorted.

    Sweeps left to right keeping a basis of the current space adapted to a
    decomposition of the module restricted to the slots seen so far; each
    arrow is handled by elimination that only adds a generator to another
    when the corresponding interval modules admit a morphism.
    """
    p = Z.p
    basis = np.eye(Z.dims[0], dtype=np.int64)  # columns: generators in slot coordinates
    meta = [(0, FORWARD)] * Z.dims[0]
    out = []
    for t, (d, A) in enumerate(Z.arrows):
        n_next = Z.dims[t + 1]
        order = sorted(range(len(meta)), key=lambda j: _order_key(*meta[j]))
        if d == FORWARD:
            images = (A @ basis) % p if basis.size else np.zeros((n_next, 0), dtype=np.int64)
            kept, kept_meta = [], []
            echelon = []  # (reduced image, pivot row)
            for j in order:
                y = images[:, j].copy()
                for r, piv in echelon:
                    if y[piv]:
                        y = (y - y[piv] * la.inv_mod(r[piv], p) * r) % p
                if not y.any():
                    out.append((meta[j][0], t))
                    continue
                echelon.append((y, int(np.nonzero(y)[0][0])))
                kept.append(images[:, j])
                kept_meta.append(meta[j])
            new_basis = np.column_stack(kept) if kept else np.zeros((n_next, 0), dtype=np.int64)
            new_basis, born = _extend(new_basis, n_next, p)
            meta = kept_meta + [(t + 1, FORWARD)] * born
            basis = new_basis
        else:
            # A: V_{t+1} -> V_t; find generators spanning its image
            if basis.shape[1]:
                coords = la.solve(basis, A, p).reshape(basis.shape[1], -1)
            else:
                coords = np.zeros((0, n_next), dtype=np.int64)
            desc = order[::-1]
            if coords.size:
                R, piv = la.rref(coords[desc].T, p)
            else:
                R, piv = np.zeros((0, len(desc)), dtype=np.int64), []
            lead = {desc[c]: R[r] for r, c in enumerate(piv)}
            new_cols, new_meta = [], []
            for j in range(len(meta)):
                if j not in lead:
                    out.append((meta[j][0], t))
                    continue
                w = np.zeros(len(meta), dtype=np.int64)
                w[desc] = lead[j]
                target = (basis @ w) % p
                u = la.solve(A, target, p)
                new_cols.append(u % p)
                new_meta.append(meta[j])
            K = la.nullspace(A, p) if A.size else np.eye(n_next, dtype=np.int64)
            cols = new_cols + [K[:, c] for c in range(K.shape[1])]
            basis = np.column_stack(cols) if cols else np.zeros((n_next, 0), dtype=np.int64)
            meta = new_meta + [(t + 1, BACKWARD)] * K.shape[1]
    out.extend((b, Z.m - 1) for b, _ in meta)
    return sorted((b + 1, e + 1) for b, e in out)


def _extend(cols: np.ndarray, n: int, p: int) -> tuple[np.ndarray, int]:
    """Append standard basis vectors to independent ``cols`` until they span ``K^n``."""
    k = cols.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64), 0
    stacked = np.hstack([cols, np.eye(n, dtype=np.int64)])
    _, piv = la.rref(stacked, p)
    extra = [c for c in piv if c >= k]
    return stacked[:, list(range(k)) + extra].reshape(n, -1), len(extra)


def dimension_profile(intervals, m: int) -> list[int]:
    return [sum(1 for i, j in intervals if i <= t <= j) for t in range(1, m + 1)]


def multiset(intervals) -> Counter:
    return Counter(tuple(iv) for iv in intervals)


# --- diagrams built from data -----------------------------------------------------


def homology_zigzag(spaces: Sequence, arrows: Sequence[tuple], hom_dim: int, p: int = 2) -> ZigzagDiagram:
    """Apply H_k to a zig-zag of complexes.

    ``spaces`` are simplex collections; ``arrows[t]`` is ``(direction,
    vertex_map)`` where ``vertex_map`` sends vertices of the source complex to
    vertices of the target (``None`` for an inclusion).
    """
    H = [Homology(s, hom_dim, p) for s in spaces]
    mats = []
    for t, (d, vmap) in enumerate(arrows):
        d = _direction(d)
        src, dst = (H[t], H[t + 1]) if d == FORWARD else (H[t + 1], H[t])
        mats.append((d, induced_map(src, dst, vmap)))
    return ZigzagDiagram(tuple(h.rank for h in H), tuple(mats), p)


def _full_subcomplex(simplices, vertices) -> set:
    vs = set(vertices)
    return {s for s in simplices if vs.issuperset(s)}


def sample_zigzag(X: FiniteMetricSpace, samples: Sequence[Sequence[int]], r: float, hom_dim: int,
                  p: int = 2, max_dim: int | None = None) -> ZigzagDiagram:
    """``V(X1) <- V(X1 & X2) -> V(X2) <- ...`` at fixed scale ``r``, then H_k."""
    if len(samples) < 2:
        raise ZigzagError("need at least two samples")
    full = vietoris_rips(X, r, hom_dim + 1 if max_dim is None else max_dim).simplex_set()
    sets = [set(int(v) for v in s) for s in samples]
    spaces, arrows = [], []
    for k, s in enumerate(sets):
        if k:
            spaces.append(_full_subcomplex(full, sets[k - 1] & s))
            arrows += [(BACKWARD, None), (FORWARD, None)]
        spaces.append(_full_subcomplex(full, s))
    return homology_zigzag(spaces, arrows, hom_dim, p)


def levelset_zigzag(K: FilteredComplex, f, levels: Sequence[int], hom_dim: int, p: int = 2,
                    atol: float = 1e-9) -> ZigzagDiagram:
    """``L_0 -> S_0 <- L_1 -> S_1 <- ... L_N`` for levels ``k`` and slabs ``[k, k+1]``.

    Level and slab spaces are full subcomplexes of ``K`` on the vertices whose
    value lies on the level (within ``atol``) or in the slab.
    """
    levels = sorted(int(k) for k in levels)
    if any(b != a + 1 for a, b in zip(levels, levels[1:])):
        raise ZigzagError("levels must be consecutive integers")
    vals = dict(f) if isinstance(f, Mapping) else dict(enumerate(np.asarray(f, dtype=float).tolist()))
    simplices = K.simplex_set()
    verts = {s[0] for s in simplices if len(s) == 1}
    missing = verts - set(vals)
    if missing:
        raise ValueError(f"vertex function is missing values for {sorted(missing)[:5]}")

    def level(k):
        return _full_subcomplex(simplices, [v for v in verts if abs(vals[v] - k) <= atol])

    def slab(k):
        return _full_subcomplex(simplices, [v for v in verts if k - atol <= vals[v] <= k + 1 + atol])

    spaces, arrows = [level(levels[0])], []
    for k in levels[1:]:
        spaces += [slab(k - 1), level(k)]
        arrows += [(FORWARD, None), (BACKWARD, None)]
    return homology_zigzag(spaces, arrows, hom_dim, p)


def witness_comparison_zigzag(X: FiniteMetricSpace, landmark_sets: Sequence[Sequence[int]], R: float,
                              hom_dim: int, p: int = 2, max_dim: int | None = None) -> ZigzagDiagram:
    """``W(L0) <- W(L0, L1) -> W(L1) <- ...`` at scale ``R`` through bivariant witness complexes."""
    if len(landmark_sets) < 2:
        raise ZigzagError("need at least two landmark sets")
    max_dim = hom_dim + 1 if max_dim is None else max_dim
    singles = [witness(X, L, R, "strong", max_dim).simplex_set(R) for L in landmark_sets]
    spaces, arrows = [singles[0]], []
    for k in range(1, len(landmark_sets)):
        bw = bivariant_witness(X, landmark_sets[k - 1], landmark_sets[k], R, max_dim)
        spaces += [bw.complex.simplex_set(R), singles[k]]
        arrows += [(BACKWARD, bw.proj1), (FORWARD, bw.proj2)]
    return homology_zigzag(spaces, arrows, hom_dim, p)
