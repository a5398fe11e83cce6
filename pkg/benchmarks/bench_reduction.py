"""Time boundary-matrix reduction with the compiled and the pure-Python kernels.

    python benchmarks/bench_reduction.py [--sizes 60 120 180] [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from tdakit import _core
from tdakit.complexes import vietoris_rips
from tdakit.metric import euclidean_metric
from tdakit.persistence import boundary_csc


def run(K, backend: str, p: int, repeat: int) -> tuple[float, np.ndarray]:
    indptr, indices, coefs = boundary_csc(K, p)
    ker = _core.kernels(backend)
    best, low = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        low = ker.reduce_z2(indptr, indices, len(K)) if p == 2 else ker.reduce_zp(indptr, indices, coefs, len(K), p)
        best = min(best, time.perf_counter() - t)
    return best, low


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[60, 120, 180])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--field", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = _core.available_backends()
    rng = np.random.default_rng(args.seed)
    print(f"{'points':>6} {'simplices':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.sizes:
        # noisy circle: a realistic mix of short and long columns
        th = rng.uniform(0, 2 * np.pi, n)
        pts = np.column_stack([np.cos(th), np.sin(th)]) + rng.normal(scale=0.1, size=(n, 2))
        K = vietoris_rips(euclidean_metric(pts), 0.9, 2)
        times, lows = {}, {}
        for b in backends:
            times[b], lows[b] = run(K, b, args.field, args.repeat)
        if len(backends) == 2:
            assert np.array_equal(lows["cython"], lows["python"]), "backends disagree"
            speed = f"{times['python'] / times['cython']:8.1f}x"
        else:
            speed = "     n/a"
        print(f"{n:>6} {len(K):>10} " + " ".join(f"{times[b]:>9.4f}s" for b in backends) + f"  {speed}")


if __name__ == "__main__":
    main()
