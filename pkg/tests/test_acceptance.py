"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402

from tdakit.complexes import FilteredComplex, cech, vietoris_rips  # noqa: E402
from tdakit.coverage import SensorInput, simulate_deployment, verify_coverage  # noqa: E402
from tdakit.diagrams import Diagram, bottleneck, chi_pers, wasserstein  # noqa: E402
from tdakit.mapper import IntervalCover, mapper  # noqa: E402
from tdakit.metric import euclidean_metric, perturbation_bound, random_tree, tree_metric  # noqa: E402
from tdakit.persistence import Bifiltration, compute_barcodes, lower_star_filtration, rank_invariant_2d  # noqa: E402
from tdakit.vectorize import ImageConfig, algebraic_features, landscape, landscape_eval, persistence_image  # noqa: E402
from tdakit.zigzag import change_basis, decompose, direct_sum, homology_zigzag, interval_module  # noqa: E402

CRITERIA = []


def criterion(name):
    def wrap(fn):
        CRITERIA.append((name, fn))
        return fn
    return wrap


def pts_of(D):
    return sorted(map(tuple, D.points.tolist()))


def rand_diagram(rng, n_max):
    n = int(rng.integers(0, n_max + 1))
    b = rng.random(n) * 4
    if rng.random() < 0.3:  # ties exercise degenerate matchings
        b = np.round(b)
        return Diagram(np.column_stack([b, b + rng.integers(0, 3, n)]))
    return Diagram(np.column_stack([b, b + rng.random(n) * 4]))


# --- 1-3: pipelines and vanishing ---------------------------------------------------


@criterion("square pipeline")
def square_pipeline():
    t0 = time.perf_counter()
    K = vietoris_rips(euclidean_metric([(0, 0), (1, 0), (1, 1), (0, 1)]), 2.0, 2)
    B = compute_barcodes(K, 2)
    elapsed = time.perf_counter() - t0
    entries = list(K)
    exact = {0: [(0.0, 1.0)] * 3 + [(0.0, math.inf)], 1: [(1.0, math.sqrt(2))]}
    ok = elapsed < 1.0
    for k, want in exact.items():
        got = pts_of(B[k])
        ok &= len(got) == len(want) and all(
            abs(g[0] - w[0]) <= 1e-9 and (g[1] == w[1] or abs(g[1] - w[1]) <= 1e-9) for g, w in zip(got, want))
        ref = oracles.barcode(entries, k, 2)
        ok &= len(ref) == len(got) and all(
            abs(g[0] - r[0]) <= 1e-9 and (g[1] == r[1] or abs(g[1] - r[1]) <= 1e-9) for g, r in zip(got, ref))
    return ok, f"H0={pts_of(B[0])} H1={pts_of(B[1])} in {elapsed:.3f}s"


@criterion("circle detection")
def circle_detection():
    th = 2 * np.pi * np.arange(20) / 20
    X = euclidean_metric(np.column_stack([np.cos(th), np.sin(th)]))
    t0 = time.perf_counter()
    K = vietoris_rips(X, 2.0, 2)
    H1 = compute_barcodes(K, 2, 1)[1]
    elapsed = time.perf_counter() - t0
    lengths = sorted((H1.deaths - H1.births).tolist(), reverse=True)
    dominant = len(lengths) >= 1 and all(lengths[0] > 5 * x for x in lengths[1:])
    # oracle: H1 Betti numbers of every sublevel complex by Gaussian elimination
    crit = sorted(set(K.values.tolist()))
    agree = all(H1.count_containing(c, c) == oracles.betti(K.simplex_set(c), 1) for c in crit)
    ok = dominant and agree and elapsed < 5.0
    return ok, f"{len(lengths)} interval(s), longest {lengths[0] if lengths else 0:.4f}, {elapsed:.3f}s"


@criterion("tree vanishing")
def tree_vanishing():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(50):
        X = tree_metric(random_tree(int(rng.integers(2, 13)), rng))
        B = compute_barcodes(vietoris_rips(X, math.inf, 3), 2, 2)
        bad += len(B[1]) + len(B[2]) > 0
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed < 60, f"{bad} nonempty trial(s), {elapsed:.2f}s"


# --- 4: interleaving ------------------------------------------------------------------


@criterion("Cech/Rips interleaving")
def interleaving():
    rng = np.random.default_rng(4)
    violations = 0
    for _ in range(100):
        P = rng.random((int(rng.integers(2, 13)), 2))
        r = float(rng.uniform(0.05, 0.7))
        X = euclidean_metric(P)
        c = cech(P, r, 2).simplex_set()
        violations += len(c - vietoris_rips(X, 2 * r, 2).simplex_set())
        violations += len(vietoris_rips(X, r, 2).simplex_set() - c)
    return violations == 0, f"{violations} violation(s)"


# --- 5-7: metrics and stability ----------------------------------------------------------


@criterion("matching oracle")
def matching_oracle():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(200):
        A, B = rand_diagram(rng, 5), rand_diagram(rng, 5)
        P, Q = A.points.tolist(), B.points.tolist()
        worst = max(worst, abs(bottleneck(A, B) - oracles.bottleneck_bf(P, Q)))
        for p in (1, 2):
            worst = max(worst, abs(wasserstein(A, B, p) - oracles.wasserstein_bf(P, Q, p)))
    return worst <= 1e-9, f"max |delta| = {worst:.2e}"


def thirty_simplices() -> FilteredComplex:
    """Octahedron boundary (26 simplices) plus a two-edge tail."""
    verts = [(i,) for i in range(6)]
    opposite = {0: 1, 2: 3, 4: 5}
    edges = [(a, b) for a in range(6) for b in range(a + 1, 6) if opposite.get(a) != b]
    tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    tail = [(6,), (7,), (0, 6), (6, 7)]
    K = FilteredComplex((s, 0.0) for s in verts + edges + tris + tail)
    assert len(K) == 30
    return K


@criterion("function stability")
def function_stability():
    rng = np.random.default_rng(6)
    K = thirty_simplices()
    slack = math.inf
    for _ in range(100):
        f = rng.normal(size=8)
        g = f + rng.normal(scale=rng.choice([0.01, 0.3, 2.0]), size=8)
        Bf, Bg = compute_barcodes(lower_star_filtration(K, f)), compute_barcodes(lower_star_filtration(K, g))
        bound = float(np.max(np.abs(f - g)))
        for k in range(3):
            slack = min(slack, bound - bottleneck(Bf[k], Bg[k]))
    return slack >= -1e-9, f"min slack {slack:.3e}"


@criterion("metric stability")
def metric_stability():
    rng = np.random.default_rng(7)
    slack = math.inf
    for _ in range(100):
        n = int(rng.integers(3, 9))
        P = rng.random((n, int(rng.integers(1, 4))))
        X = euclidean_metric(P)
        Y = euclidean_metric(P + rng.normal(scale=rng.choice([0.01, 0.1]), size=P.shape))
        BX, BY = compute_barcodes(vietoris_rips(X, math.inf, 2)), compute_barcodes(vietoris_rips(Y, math.inf, 2))
        bound = perturbation_bound(X, Y)
        for k in range(3):
            slack = min(slack, bound - bottleneck(BX[k], BY[k]))
    return slack >= -1e-9, f"min slack {slack:.3e}"


# --- 8-10: vectorizations --------------------------------------------------------------


@criterion("landscape suite")
def landscape_suite():
    rng = np.random.default_rng(8)
    ok = True
    worst = 0.0
    for _ in range(100):
        A, B = rand_diagram(rng, 6), rand_diagram(rng, 6)
        kmax = 8
        LA, LB = landscape(A, kmax), landscape(B, kmax)
        w = bottleneck(A, B)
        ts = np.sort(rng.uniform(-1, 9, 200))
        vals = np.array([landscape_eval(LA, k, ts) for k in range(1, kmax + 1)])
        ok &= bool(np.all(vals >= 0))
        ok &= bool(np.all(np.diff(vals, axis=0) <= 1e-12))  # lambda_k >= lambda_{k+1}
        ok &= bool(np.all(np.abs(np.diff(vals, axis=1)) <= np.diff(ts) + 1e-12))
        ok &= bool(np.all(vals[len(A):] == 0))  # vanishing above the number of intervals
        for k in range(1, kmax + 1):
            ref = np.array([oracles.landscape_value(A.points.tolist(), k, t) for t in ts])
            worst = max(worst, float(np.max(np.abs(vals[k - 1] - ref))))
            ok &= bool(np.all(np.abs(vals[k - 1] - landscape_eval(LB, k, ts)) <= w + 1e-9))
    return ok and worst <= 1e-9, f"grid-oracle max error {worst:.2e}"


@criterion("algebraic features")
def algebraic():
    idx = [(1, 0), (1, 1), (2, 0), (2, 3)]
    f = algebraic_features(Diagram([(1, 3)]), [(1, 0), (1, 1)]).values.tolist()
    ok = f == [2.0, 8.0]
    rng = np.random.default_rng(9)
    for _ in range(50):
        D = rand_diagram(rng, 6)
        base = algebraic_features(D, idx).values
        b = rng.random(3) * 4
        padded = np.vstack([D.points, np.column_stack([b, b])])
        shuffled = padded[rng.permutation(len(padded))]
        ok &= np.array_equal(algebraic_features(Diagram(shuffled), idx).values, base)
    return ok, f"x_1_0, x_1_1 of [1,3] = {f}"


@criterion("persistence image")
def image():
    from scipy.integrate import dblquad

    ok = True
    cfg = ImageConfig((0, 1, 0, 1), (5, 5), 0.1)
    ok &= bool(np.all(persistence_image(Diagram([(0.3, 0.3), (0.7, 0.7)]), cfg).values == 0))
    rng = np.random.default_rng(10)
    worst_sum = 0.0
    for _ in range(30):
        D = rand_diagram(rng, 5)
        if not len(D):
            continue
        s = 0.2
        eta = D.deaths - D.births
        box = (D.births.min() - 6 * s, D.births.max() + 6 * s, -6 * s, eta.max() + 6 * s)
        c = ImageConfig(box, (9, 7), s, "persistence")
        worst_sum = max(worst_sum, abs(persistence_image(D, c).values.sum() - eta.sum()))
    D = Diagram([(0.2, 0.9), (0.5, 0.7), (0.1, 0.4)])
    c = ImageConfig((0, 1, 0, 1), (3, 3), 0.15)
    img = persistence_image(D, c).values.reshape(3, 3)
    ex, ee = c.edges()
    xi, eta = D.births, D.deaths - D.births
    w = c.weight_fn(eta)

    def rho(e, x):
        return float(np.sum(w * np.exp(-((x - xi) ** 2 + (e - eta) ** 2) / (2 * c.sigma ** 2))) / (2 * np.pi * c.sigma ** 2))

    worst_q = max(abs(img[i, j] - dblquad(rho, ex[i], ex[i + 1], ee[j], ee[j + 1], epsabs=1e-11, epsrel=1e-11)[0])
                  for i in range(3) for j in range(3))
    ok &= worst_sum <= 1e-6 and worst_q <= 1e-6
    return ok, f"pixel-sum error {worst_sum:.2e}, quadrature error {worst_q:.2e}"


# --- 11-12: zig-zag and rank invariant ----------------------------------------------------


def _invertible(n, p, rng):
    while True:
        M = rng.integers(0, p, (n, n))
        if oracles.rank_mod_p(M, p) == n:
            return M


@criterion("zig-zag round trip")
def zigzag_round_trip():
    failures = 0
    for p in (2, 5):
        rng = np.random.default_rng(100 + p)
        for _ in range(100):
            m = int(rng.integers(1, 9))
            pattern = rng.choice(["F", "B"], m - 1).tolist()
            ivs = []
            for _ in range(int(rng.integers(1, 7))):
                i = int(rng.integers(1, m + 1))
                ivs.append((i, int(rng.integers(i, m + 1))))
            Z = direct_sum([interval_module(i, j, m, pattern, p) for i, j in ivs])
            Z = change_basis(Z, [_invertible(n, p, rng) if n else np.zeros((0, 0), dtype=np.int64) for n in Z.dims])
            failures += Counter(decompose(Z)) != Counter(ivs)
    rng = np.random.default_rng(11)
    forward_bad = 0
    for _ in range(10):
        K = vietoris_rips(euclidean_metric(rng.random((8, 2))), 1.2, 2)
        crit = sorted(set(K.values.tolist()))
        for k in (0, 1):
            Z = homology_zigzag([K.simplex_set(c) for c in crit], [("F", None)] * (len(crit) - 1), k, 2)
            got = sorted((crit[i - 1], crit[j] if j < len(crit) else math.inf) for i, j in decompose(Z))
            forward_bad += got != pts_of(compute_barcodes(K, 2, 1)[k])
    return failures == 0 and forward_bad == 0, f"{failures} round-trip failure(s), {forward_bad} forward mismatch(es)"


@criterion("rank invariant")
def rank_invariant():
    rng = np.random.default_rng(12)
    bad = checked = 0
    for _ in range(5):
        K = vietoris_rips(euclidean_metric(rng.random((8, 2))), 0.8, 2)
        B = compute_barcodes(K, 2)
        grid = [(u, 0.0) for u in sorted(set(K.values.tolist()))]
        for k in (0, 1):
            table = rank_invariant_2d(Bifiltration.from_filtration(K), 2, k, grid)
            for (x, y), r in table.items():
                expect = B[k].count_containing(x[0], y[0]) if x[0] <= y[0] else 0
                bad += r != expect
                checked += 1
    return bad == 0, f"{bad} mismatch(es) over {checked} grid pairs"


# --- 13-15: coverage, Mapper, Euler integral ------------------------------------------------


def _grid_sensors(k, h, R):
    P = np.array([(c * h, r * h) for r in range(k + 1) for c in range(k + 1)], dtype=float)
    idx = lambda c, r: r * (k + 1) + c  # noqa: E731
    ring = [idx(c, 0) for c in range(k)] + [idx(k, r) for r in range(k)] + \
           [idx(c, k) for c in range(k, 0, -1)] + [idx(0, r) for r in range(k, 0, -1)]
    edges = tuple((i, j) for i in range(len(P)) for j in range(i + 1, len(P)) if np.linalg.norm(P[i] - P[j]) <= R)
    return SensorInput(len(P), edges, tuple(ring), R, R / math.sqrt(3))


def _annulus_sensors(R=1.6):
    th = 2 * np.pi * np.arange(12) / 12
    P = np.vstack([3 * np.column_stack([np.cos(th), np.sin(th)]),
                   2 * np.column_stack([np.cos(th + np.pi / 12), np.sin(th + np.pi / 12)])])
    edges = tuple((i, j) for i in range(24) for j in range(i + 1, 24) if np.linalg.norm(P[i] - P[j]) <= R)
    return SensorInput(24, edges, tuple(range(12)), R, R)


@criterion("coverage soundness")
def coverage_soundness():
    t0 = time.perf_counter()
    unsound = certified = 0
    hyp_ok = True
    for seed in range(200):
        n = 30 + 10 * (seed % 6)
        s, covered = simulate_deployment((0, 3, 0, 3), n, 1.0, 1 / math.sqrt(3), seed)
        rep = verify_coverage(s)
        hyp_ok &= rep.hypotheses_ok
        certified += rep.certificate
        unsound += rep.certificate and not covered
    grid = verify_coverage(_grid_sensors(4, 1.0, 1.5)).certificate
    annulus = verify_coverage(_annulus_sensors()).certificate
    elapsed = time.perf_counter() - t0
    ok = unsound == 0 and hyp_ok and grid and not annulus and elapsed < 120
    return ok, (f"{unsound} unsound of {certified} certified; disc-grid={grid} annulus={annulus}; "
                f"{elapsed:.1f}s")


@criterion("Mapper circle")
def mapper_circle():
    th = 2 * np.pi * np.arange(16) / 16
    P = np.column_stack([np.cos(th), np.sin(th)])
    X = euclidean_metric(P)
    G = mapper(X, P[:, 0], IntervalCover(4, 0.5))
    b1 = oracles.betti(G.complex.simplex_set(), 1)
    same = mapper(X, P[:, 0].copy(), IntervalCover(4, 0.5)).to_json() == G.to_json()
    return b1 == 1 and same, f"b1={b1}, deterministic={same}"


@criterion("Euler integral")
def euler_integral():
    rng = np.random.default_rng(15)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(4, 10))
        K = vietoris_rips(euclidean_metric(rng.random((n, 2))), float(rng.uniform(0.4, 1.2)), 3)
        L = lower_star_filtration(K, rng.normal(size=n))
        B = compute_barcodes(L, 2)
        lo, hi = float(L.values.min()), float(L.values.max())
        for x in rng.uniform(lo - 0.5, hi + 0.5, 5):
            worst = max(worst, abs(chi_pers(B, x) - oracles.euler_integral(list(L), x)))
    return worst <= 1e-9, f"max |delta| = {worst:.2e}"


# --- runners ------------------------------------------------------------------------------


def _report(i, name, fn):
    try:
        ok, detail = fn()
    except Exception as e:  # a crash is a failure, reported like any other
        ok, detail = False, f"{type(e).__name__}: {e}"
    line = f"{'PASS' if ok else 'FAIL'} [{i:2d}] {name}: {detail}"
    return ok, line


@pytest.mark.parametrize("i,name,fn", [(i + 1, n, f) for i, (n, f) in enumerate(CRITERIA)],
                         ids=[n.replace(" ", "_") for n, _ in CRITERIA])
def test_criterion(i, name, fn, capsys):
    ok, line = _report(i, name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_report(i + 1, n, f) for i, (n, f) in enumerate(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
