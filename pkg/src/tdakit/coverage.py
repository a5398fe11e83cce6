"""Coordinate-free coverage certificates for planar sensor networks.

The verifier sees only which sensors detect each other and which sensors
form the fence around the domain.  If the fence cycle bounds a 2-chain in
the Rips complex of the detection graph, the covering discs leave no hole
inside the fence.  Coordinates only appear in :func:`simulate_deployment`,
which produces test cases together with their ground truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .complexes import flag_complex
from .persistence import boundary_kernel_rank, check_field


@dataclass(frozen=True)
class SensorInput:
    n: int
    edges: tuple  # detection pairs (i, j), i != j
    fence: tuple  # cyclic order of fence sensor ids
    R: float
    R_c: float

    def __post_init__(self):
        edges = {tuple(sorted((int(a), int(b)))) for a, b in self.edges}
        for a, b in edges:
            if a == b:
                raise ValueError(f"detection edge ({a}, {b}) is a loop")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"detection edge ({a}, {b}) out of range")
        fence = tuple(int(v) for v in self.fence)
        if len(set(fence)) != len(fence):
            raise ValueError("fence ids must be distinct")
        if any(not 0 <= v < self.n for v in fence):
            raise ValueError("fence id out of range")
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "fence", fence)

    @classmethod
    def from_json(cls, d: dict) -> "SensorInput":
        return cls(int(d["n"]), tuple(map(tuple, d["edges"])), tuple(d["fence"]), float(d["R"]), float(d["R_c"]))

    def to_json(self) -> dict:
        return {"n": self.n, "R": self.R, "R_c": self.R_c,
                "edges": [list(e) for e in self.edges], "fence": list(self.fence)}


@dataclass(frozen=True)
class CoverageReport:
    hypotheses_ok: bool
    checks: dict
    certificate: bool
    kernel_rank: int
    detail: str = field(default="")

    def to_json(self) -> dict:
        return {"hypotheses_ok": self.hypotheses_ok, "checks": self.checks, "certificate": self.certificate,
                "kernel_rank": self.kernel_rank, "detail": self.detail}


def fence_cycle(fence) -> set:
    """The fence as a 1-dimensional subcomplex: its vertices and consecutive edges."""
    f = list(fence)
    out = {(v,) for v in f}
    if len(f) > 1:
        out |= {tuple(sorted((a, b))) for a, b in zip(f, f[1:] + f[:1]) if a != b}
    return out


def verify_coverage(s: SensorInput, p: int = 2) -> CoverageReport:
    p = check_field(p)
    edge_set = set(s.edges)
    fence_edges = fence_cycle(s.fence) - {(v,) for v in s.fence}
    missing = sorted(e for e in fence_edges if e not in edge_set)
    checks = {
        "fence_length": len(s.fence) >= 3,
        "fence_adjacent": not missing,
        "radius_ratio": s.R_c >= s.R / math.sqrt(3) * (1 - 1e-12),
    }
    ok = all(checks.values())
    R = flag_complex({v: 0.0 for v in range(s.n)}, {e: 0.0 for e in edge_set}, 2).simplex_set()
    F = fence_cycle(s.fence) & R
    rank = boundary_kernel_rank(R, F, p)
    cert = rank > 0
    if not ok:
        detail = "hypotheses fail; the certificate carries no coverage guarantee"
        if missing:
            detail += f" (fence edges not detected: {missing[:5]})"
    elif cert:
        detail = "the fence cycle bounds a 2-chain in the Rips complex"
    else:
        detail = "no 2-chain bounds the fence cycle; coverage not certified"
    return CoverageReport(ok, checks, cert, rank, detail)


def _fence_points(domain, R, spacing):
    x0, x1, y0, y1 = domain
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    pts = []
    for (ax, ay), (bx, by) in zip(corners, corners[1:] + corners[:1]):
        L = math.hypot(bx - ax, by - ay)
        k = max(1, math.ceil(L / (spacing * R)))
        for i in range(k):
            pts.append((ax + (bx - ax) * i / k, ay + (by - ay) * i / k))
    return np.array(pts)


def sample_positions(domain, n: int, R: float, seed: int, fence_spacing: float = 0.95) -> tuple[np.ndarray, int]:
    """Fence nodes along the rectangle boundary followed by ``n`` uniform interior sensors."""
    x0, x1, y0, y1 = map(float, domain)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("degenerate domain")
    if not 0 < fence_spacing < 1:
        raise ValueError("fence spacing must be a fraction of R in (0, 1)")
    rng = np.random.default_rng(seed)
    fence = _fence_points((x0, x1, y0, y1), R, fence_spacing)
    inner = np.column_stack([rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
    return np.vstack([fence, inner]), len(fence)


def grid_covered(positions: np.ndarray, domain, R_c: float, resolution: int = 101) -> bool:
    x0, x1, y0, y1 = domain
    gx, gy = np.meshgrid(np.linspace(x0, x1, resolution), np.linspace(y0, y1, resolution))
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    dist, _ = cKDTree(positions).query(grid)
    return bool(np.all(dist <= R_c + 1e-12))


def sensors_from_positions(positions: np.ndarray, n_fence: int, R: float, R_c: float) -> SensorInput:
    pairs = cKDTree(positions).query_pairs(R)
    return SensorInput(len(positions), tuple(sorted(pairs)), tuple(range(n_fence)), R, R_c)


def simulate_deployment(domain, n: int, R: float, R_c: float, seed: int, fence_spacing: float = 0.95,
                        resolution: int = 101) -> tuple[SensorInput, bool]:
    """Random deployment in a rectangle and its grid-tested ground truth."""
    positions, n_fence = sample_positions(domain, n, R, seed, fence_spacing)
    return sensors_from_positions(positions, n_fence, R, R_c), grid_covered(positions, domain, R_c, resolution)
