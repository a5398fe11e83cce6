"""Slow reference implementations used only by the tests.

Nothing here imports the package's algebra: ranks, barcodes, matchings,
miniballs and landscapes are recomputed from their definitions.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


# --- linear algebra over Z/p (plain Python integers) -------------------------------


def rank_mod_p(M, p: int) -> int:
    """Rank by Gaussian elimination (Smith normal form over a field is just the rank)."""
    A = np.asarray(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    A = A.copy()
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        f = A[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if len(hit):
            A[hit] = (A[hit] - np.outer(f[hit], A[r])) % p
        r += 1
        if r == rows:
            break
    return r


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Columns spanning the kernel of ``M``."""
    M = np.asarray(M, dtype=np.int64) % p
    rows, cols = M.shape
    A = M.tolist()
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-A[i][fc]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).T.reshape(cols, len(basis))


def boundary(rows, cols, p: int) -> np.ndarray:
    index = {s: i for i, s in enumerate(rows)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        if len(s) < 2:
            continue
        for i in range(len(s)):
            D[index[s[:i] + s[i + 1:]], j] = (-1) ** i % p
    return D


def cells(simplices, k):
    return sorted(tuple(sorted(s)) for s in simplices if len(s) == k + 1)


def betti(simplices, k: int, p: int = 2) -> int:
    ck, ck1, ckm = cells(simplices, k), cells(simplices, k + 1), cells(simplices, k - 1)
    if not ck:
        return 0
    rk = rank_mod_p(boundary(ckm, ck, p), p) if k > 0 and ckm else 0
    rk1 = rank_mod_p(boundary(ck, ck1, p), p) if ck1 else 0
    return len(ck) - rk - rk1


def inclusion_rank(small, big, k: int, p: int = 2) -> int:
    """rank H_k(small) -> H_k(big) = dim(Z_small + B_big) - dim(B_big)."""
    ck_big = cells(big, k)
    if not ck_big:
        return 0
    ck_small = cells(small, k)
    if not ck_small:
        return 0
    pos = {s: i for i, s in enumerate(ck_big)}
    if k > 0:
        Z = nullspace_mod_p(boundary(cells(small, k - 1), ck_small, p), p)
    else:
        Z = np.eye(len(ck_small), dtype=np.int64)
    Zb = np.zeros((len(ck_big), Z.shape[1]), dtype=np.int64)
    for i, s in enumerate(ck_small):
        Zb[pos[s]] = Z[i]
    up = cells(big, k + 1)
    Bb = boundary(ck_big, up, p) if up else np.zeros((len(ck_big), 0), dtype=np.int64)
    return rank_mod_p(np.hstack([Zb, Bb]), p) - rank_mod_p(Bb, p)


def barcode(entries, k: int, p: int = 2) -> list[tuple[float, float]]:
    """Barcode in dimension ``k`` from persistent Betti numbers at all critical values."""
    entries = [(tuple(sorted(s)), float(v)) for s, v in entries]
    crit = sorted({v for _, v in entries})
    sub = [{s for s, v in entries if v <= c} for c in crit]
    m = len(crit)
    beta = {}
    for i in range(m):
        for j in range(i, m):
            beta[i, j] = inclusion_rank(sub[i], sub[j], k, p)

    def b(i, j):
        return beta[i, j] if i >= 0 else 0

    out = []
    for i in range(m):
        for j in range(i + 1, m):
            cnt = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j)
            out += [(crit[i], crit[j])] * cnt
        cnt = b(i, m - 1) - b(i - 1, m - 1)
        out += [(crit[i], math.inf)] * cnt
    return sorted(out)


# --- diagram matchings ---------------------------------------------------------------


def _matchings(n: int, m: int):
    """All partial injections {0..n-1} -> {0..m-1}; None means the diagonal."""
    def rec(i, used):
        if i == n:
            yield ()
            return
        for tail in rec(i + 1, used):
            yield (None,) + tail
        for j in range(m):
            if j not in used:
                for tail in rec(i + 1, used | {j}):
                    yield (j,) + tail
    yield from rec(0, frozenset())


def _match_costs(P, Q, mt):
    costs = []
    used = set()
    for (a, b), j in zip(P, mt):
        if j is None:
            costs.append((b - a) / 2)
        else:
            c, d = Q[j]
            costs.append(max(abs(a - c), abs(b - d)))
            used.add(j)
    costs += [(d - c) / 2 for j, (c, d) in enumerate(Q) if j not in used]
    return costs


def bottleneck_bf(P, Q) -> float:
    P, Q = [tuple(x) for x in P if x[1] > x[0]], [tuple(x) for x in Q if x[1] > x[0]]
    return min((max(_match_costs(P, Q, mt), default=0.0) for mt in _matchings(len(P), len(Q))))


def wasserstein_bf(P, Q, p: float) -> float:
    P, Q = [tuple(x) for x in P if x[1] > x[0]], [tuple(x) for x in Q if x[1] > x[0]]
    best = min(sum(c ** p for c in _match_costs(P, Q, mt)) for mt in _matchings(len(P), len(Q)))
    return best ** (1 / p)


# --- geometry ----------------------------------------------------------------------------


def circumcenter_2d(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return np.array([ux, uy])


def miniball_2d(P) -> float:
    """Minimum enclosing circle radius: best of all point, midpoint and circumcenter centres."""
    P = np.asarray(P, dtype=float)
    cands = [p for p in P]
    cands += [(P[i] + P[j]) / 2 for i, j in itertools.combinations(range(len(P)), 2)]
    for i, j, k in itertools.combinations(range(len(P)), 3):
        c = circumcenter_2d(P[i], P[j], P[k])
        if c is not None:
            cands.append(c)
    return min(float(np.max(np.linalg.norm(P - c, axis=1))) for c in cands)


def alpha_edge_value(points, i: int, j: int, n_grid: int = 200001) -> float | None:
    """Least eps with a point of the bisector inside both Voronoi cells and the eps-balls.

    Scans the bisector of ``(i, j)`` on a fine grid; ``None`` if no grid
    point of the bisector lies in the common Voronoi face.
    """
    P = np.asarray(points, dtype=float)
    a, b = P[i], P[j]
    mid = (a + b) / 2
    u = b - a
    nrm = np.array([-u[1], u[0]]) / np.linalg.norm(u)
    span = 4 * (np.ptp(P, axis=0).max() + np.linalg.norm(u))
    t = np.linspace(-span, span, n_grid)
    Y = mid[None, :] + t[:, None] * nrm[None, :]
    da = np.linalg.norm(Y - a, axis=1)
    others = np.delete(P, [i, j], axis=0)
    if len(others):
        dmin = np.min(np.linalg.norm(Y[:, None, :] - others[None, :, :], axis=2), axis=1)
        ok = da <= dmin + 1e-12
    else:
        ok = np.ones(len(t), dtype=bool)
    if not ok.any():
        return None
    return float(da[ok].min())


# --- zig-zag limit/colimit rank -----------------------------------------------------


def zigzag_span_rank(dims, arrows, s: int, t: int, p: int) -> int:
    """Number of interval summands containing ``[s, t]`` (0-based, inclusive).

    Equals the rank of the map from the limit of the restricted diagram to
    its colimit.
    """
    dims = list(dims[s:t + 1])
    arrows = arrows[s:t]
    off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    N = int(off[-1])
    if N == 0:
        return 0
    # limit: vectors satisfying every arrow
    eqs = []
    for k, (d, M) in enumerate(arrows):
        M = np.asarray(M, dtype=np.int64)
        E = np.zeros((dims[k + 1] if d == "F" else dims[k], N), dtype=np.int64)
        if d == "F":
            E[:, off[k]:off[k + 1]] = M
            E[:, off[k + 1]:off[k + 2]] -= np.eye(dims[k + 1], dtype=np.int64)
        else:
            E[:, off[k + 1]:off[k + 2]] = M
            E[:, off[k]:off[k + 1]] -= np.eye(dims[k], dtype=np.int64)
        eqs.append(E)
    lim = nullspace_mod_p(np.vstack(eqs), p) if eqs else np.eye(N, dtype=np.int64)
    # colimit relations: e_src(v) - e_dst(M v)
    rels = []
    for k, (d, M) in enumerate(arrows):
        M = np.asarray(M, dtype=np.int64)
        src, dst = (k, k + 1) if d == "F" else (k + 1, k)
        for c in range(dims[src]):
            v = np.zeros(N, dtype=np.int64)
            v[off[src] + c] = 1
            v[off[dst]:off[dst + 1]] -= M[:, c]
            rels.append(v)
    R = np.array(rels, dtype=np.int64).T.reshape(N, len(rels))
    # the canonical map factors through the first slot: lim -> V_s -> colim
    through = np.zeros_like(lim)
    through[:dims[0]] = lim[:dims[0]]
    return rank_mod_p(np.hstack([through, R]) % p, p) - rank_mod_p(R % p, p)


# --- landscapes, images, Euler integrals ----------------------------------------------


def landscape_value(B, k: int, t: float) -> float:
    tents = sorted((max(min(t - a, b - t), 0.0) for a, b in B), reverse=True)
    return tents[k - 1] if k <= len(tents) else 0.0


def euler_integral(entries, x: float) -> float:
    """Integral over (-inf, x] of the Euler characteristic of the sublevel complex, slab by slab."""
    entries = [(tuple(s), float(v)) for s, v in entries]
    crit = sorted({v for _, v in entries if v < x}) + [x]
    total = 0.0
    for lo, hi in zip(crit, crit[1:]):
        chi = sum((-1) ** (len(s) - 1) for s, v in entries if v <= lo)
        total += chi * (hi - lo)
    return total
