import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from tdakit.mapper import IntervalCover, gap_threshold, mapper
from tdakit.metric import euclidean_metric


def circle(n, r=1.0):
    th = 2 * np.pi * np.arange(n) / n
    return r * np.column_stack([np.cos(th), np.sin(th)])


def first_betti(G):
    return oracles.betti(G.complex.simplex_set(), 1)


def test_gap_threshold_examples():
    t = gap_threshold([0.1, 0.1, 5.0], 10)
    assert t == pytest.approx(0.5, abs=1e-15)
    assert gap_threshold([], 10) == math.inf
    assert gap_threshold([2.0, 2.0, 2.0], 10) == math.inf
    assert gap_threshold([1.0, 2.0, 3.0], 2) == math.inf


def test_gap_threshold_against_direct_histogram():
    rng = np.random.default_rng(0)
    for _ in range(50):
        h = rng.exponential(size=int(rng.integers(1, 12)))
        counts = [0] * 10
        top = max(h)
        for x in h:
            counts[min(int(x / top * 10), 9)] += 1
        first = next(i for i, c in enumerate(counts) if c)
        empty = next((i for i in range(first, 10) if counts[i] == 0), None)
        expect = math.inf if empty is None else empty * top / 10
        assert gap_threshold(h, 10) == pytest.approx(expect, rel=1e-12)


def test_interval_cover():
    ivs = IntervalCover(4, 0.5).intervals(0, 5)
    assert ivs[0][0] == 0 and ivs[-1][1] == 5
    lengths = [b - a for a, b in ivs]
    assert np.allclose(lengths, lengths[0])
    for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
        assert (b0 - a1) == pytest.approx(0.5 * lengths[0])
    with pytest.raises(ValueError):
        IntervalCover(0, 0.1)
    with pytest.raises(ValueError):
        IntervalCover(3, 1.0)


def test_two_clumps_constant_filter():
    rng = np.random.default_rng(1)
    P = np.vstack([rng.normal(0, 0.05, (10, 2)), rng.normal(10, 0.05, (10, 2))])
    G = mapper(euclidean_metric(P), np.zeros(20), IntervalCover(1, 0.0))
    assert len(G.nodes) == 2 and G.edges == []
    assert sorted(sorted(m) for _, m in G.nodes) == [list(range(10)), list(range(10, 20))]


def test_single_point():
    G = mapper(euclidean_metric([(0, 0)]), [0.0], IntervalCover(3, 0.2))
    assert len(G.nodes) == 1 and G.edges == []
    with pytest.raises(ValueError):
        mapper(euclidean_metric([(0, 0), (1, 1)]), [0.0], IntervalCover(3, 0.2))


def test_circle_has_one_loop_and_is_deterministic():
    P = circle(16)
    X = euclidean_metric(P)
    G = mapper(X, P[:, 0], IntervalCover(4, 0.5))
    assert first_betti(G) == 1
    assert mapper(X, P[:, 0], IntervalCover(4, 0.5)).to_json() == G.to_json()


@given(st.integers(5, 30), st.integers(0, 9999), st.integers(1, 6), st.floats(0, 0.49))
def test_mapper_invariants(n, seed, k, g):
    rng = np.random.default_rng(seed)
    P = rng.random((n, 2))
    f = P[:, 0] + 0.3 * P[:, 1]
    G = mapper(euclidean_metric(P), f, IntervalCover(k, g))
    covered = set().union(*(m for _, m in G.nodes))
    assert covered == set(range(n))
    for iv, m in G.nodes:
        a, b = G.intervals[iv]
        assert all(a <= f[i] <= b for i in m)
    assert G.complex.audit() == []
    assert all(len(s) <= 2 for s in G.simplices)  # overlap below 1/2: no triple intersections
