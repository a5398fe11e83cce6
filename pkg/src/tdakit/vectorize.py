"""Barcode vectorizations: algebraic coordinates, persistence landscapes, persistence images."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from .diagrams import Diagram, DiagramError, as_diagram


@dataclass(frozen=True)
class FeatureVector:
    labels: tuple
    values: np.ndarray

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("feature labels must be unique")
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.labels)

    def as_dict(self) -> dict:
        return dict(zip(self.labels, self.values.tolist()))


def _finite(B) -> Diagram:
    B = as_diagram(B)
    if not B.is_finite:
        raise DiagramError("vectorizations need a finite diagram")
    return B


# --- algebraic functions -------------------------------------------------------------


def algebraic_features(B, indices: Sequence[tuple[int, int]]) -> FeatureVector:
    """``x_{i,j}(B) = sum (y - x)^i (y + x)^j`` for each requested ``(i, j)``, ``i >= 1``."""
    B = _finite(B)
    pers = B.deaths - B.births
    tot = B.deaths + B.births
    vals, labels = [], []
    for i, j in indices:
        i, j = int(i), int(j)
        if i < 1 or j < 0:
            raise ValueError(f"algebraic feature needs i >= 1 and j >= 0, got ({i}, {j})")
        vals.append(float(np.sum(pers ** i * tot ** j)))
        labels.append(f"x_{i}_{j}")
    return FeatureVector(tuple(labels), np.array(vals))


# --- landscapes ------------------------------------------------------------------------


@dataclass(frozen=True)
class Landscape:
    """Exact piecewise-linear landscape levels ``1..k_max``.

    ``levels[k-1]`` is an array of shape ``(m, 2)`` of critical points
    ``(t, value)`` sorted by ``t``; the function is zero outside their span
    and linear between them.  A level that vanishes identically is empty.
    """

    levels: tuple = field(default=())

    @property
    def k_max(self) -> int:
        return len(self.levels)

    def breakpoints(self) -> np.ndarray:
        pts = [lv[:, 0] for lv in self.levels if len(lv)]
        return np.unique(np.concatenate(pts)) if pts else np.zeros(0)


def _tents(B: Diagram, t: np.ndarray) -> np.ndarray:
    """Tent values ``min(t - a, b - t)_+`` with shape ``(len(B), len(t))``."""
    a, b = B.births[:, None], B.deaths[:, None]
    return np.maximum(np.minimum(t[None, :] - a, b - t[None, :]), 0.0)


def _simplify(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Drop collinear interior points and leading/trailing zero runs."""
    nz = np.nonzero(v)[0]
    if len(nz) == 0:
        return np.zeros((0, 2))
    lo, hi = max(nz[0] - 1, 0), min(nz[-1] + 1, len(t) - 1)
    t, v = t[lo:hi + 1], v[lo:hi + 1]
    keep = [0]
    for i in range(1, len(t) - 1):
        s1 = (v[i] - v[keep[-1]]) / (t[i] - t[keep[-1]])
        s2 = (v[i + 1] - v[i]) / (t[i + 1] - t[i])
        if not math.isclose(s1, s2, abs_tol=1e-12):
            keep.append(i)
    keep.append(len(t) - 1)
    return np.column_stack([t[keep], v[keep]])


def landscape(B, k_max: int) -> Landscape:
    """Persistence landscape ``lambda_1..lambda_{k_max}`` computed exactly.

    Between consecutive candidate breakpoints (interval endpoints and the
    crossings ``(a_i + b_j) / 2``) no two tents cross, so each level is the
    linear interpolation of its values at those points.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    B = _finite(B)
    n = len(B)
    if n == 0:
        return Landscape(tuple(np.zeros((0, 2)) for _ in range(k_max)))
    a, b = B.births, B.deaths
    t = np.unique(np.concatenate([a, b, ((a[:, None] + b[None, :]) / 2).ravel()]))
    vals = -np.sort(-_tents(B, t), axis=0)  # descending per column
    levels = []
    for k in range(k_max):
        if k < n:
            levels.append(_simplify(t, vals[k]))
        else:
            levels.append(np.zeros((0, 2)))
    return Landscape(tuple(levels))


def landscape_eval(L: Landscape, k: int, t) -> np.ndarray | float:
    if k < 1:
        raise ValueError("landscape levels start at 1")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if k > L.k_max or len(L.levels[k - 1]) == 0:
        out = np.zeros_like(t)
    else:
        lv = L.levels[k - 1]
        out = np.interp(t, lv[:, 0], lv[:, 1], left=0.0, right=0.0)
    return float(out[0]) if scalar else out


def _segment_integral(d0: np.ndarray, d1: np.ndarray, h: np.ndarray, p: float) -> float:
    if p == 1:
        same = d0 * d1 >= 0
        a0, a1 = np.abs(d0), np.abs(d1)
        with np.errstate(invalid="ignore", divide="ignore"):
            cross = np.where(a0 + a1 > 0, (a0 ** 2 + a1 ** 2) / (2 * (a0 + a1)), 0.0)
        return float(np.sum(np.where(same, (a0 + a1) / 2, cross) * h))
    if p == 2:
        return float(np.sum(h * (d0 ** 2 + d0 * d1 + d1 ** 2) / 3))
    raise ValueError(f"unsupported p={p}")


def landscape_distance(L1: Landscape, L2: Landscape, p: float = 2) -> float:
    """L_p distance between landscapes over all levels; ``p`` in ``{1, 2, inf}``."""
    if p not in (1, 2, math.inf):
        raise ValueError(f"landscape distance supports p in (1, 2, inf), got {p}")
    k_max = max(L1.k_max, L2.k_max)
    acc = 0.0
    for k in range(1, k_max + 1):
        pts = [lv[:, 0] for L in (L1, L2) if k <= L.k_max for lv in [L.levels[k - 1]] if len(lv)]
        if not pts:
            continue
        t = np.unique(np.concatenate(pts))
        diff = landscape_eval(L1, k, t) - landscape_eval(L2, k, t)
        if p == math.inf:
            acc = max(acc, float(np.max(np.abs(diff))))
        else:
            acc += _segment_integral(diff[:-1], diff[1:], np.diff(t), p)
    return acc if p == math.inf else acc ** (1.0 / p)


def landscape_features(L: Landscape, grid: Sequence[float]) -> "FeatureVector":
    labels, vals = [], []
    for k in range(1, L.k_max + 1):
        for t in grid:
            labels.append(f"ls_{k}_{t:g}")
            vals.append(landscape_eval(L, k, float(t)))
    return FeatureVector(tuple(labels), np.array(vals))


# --- persistence images ------------------------------------------------------------------


@dataclass(frozen=True)
class ImageConfig:
    """Pixel grid over (birth, persistence) space and the Gaussian kernel width.

    ``weight`` is ``"linear"`` for ``min(persistence / cap, 1)`` with ``cap``
    defaulting to the top of the box, or ``"persistence"`` for the raw
    persistence.  Both vanish on the birth axis.
    """

    box: tuple  # (xi_min, xi_max, eta_min, eta_max)
    resolution: tuple  # (n_xi, n_eta)
    sigma: float
    weight: str = "linear"
    weight_cap: float | None = None

    def __post_init__(self):
        x0, x1, e0, e1 = map(float, self.box)
        if not (x1 > x0 and e1 > e0):
            raise ValueError("image box is degenerate")
        nx, ne = map(int, self.resolution)
        if nx < 1 or ne < 1:
            raise ValueError("image resolution must be >= 1")
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.weight not in ("linear", "persistence"):
            raise ValueError(f"unknown weight {self.weight!r}")
        object.__setattr__(self, "box", (x0, x1, e0, e1))
        object.__setattr__(self, "resolution", (nx, ne))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        x0, x1, e0, e1 = self.box
        return np.linspace(x0, x1, self.resolution[0] + 1), np.linspace(e0, e1, self.resolution[1] + 1)

    def weight_fn(self, eta: np.ndarray) -> np.ndarray:
        eta = np.asarray(eta, dtype=float)
        if self.weight == "persistence":
            return eta
        cap = self.weight_cap if self.weight_cap is not None else self.box[3]
        return np.clip(eta / cap, 0.0, 1.0)

    @classmethod
    def from_dict(cls, d: dict) -> "ImageConfig":
        return cls(tuple(d["box"]), tuple(d["resolution"]), float(d["sigma"]), d.get("weight", "linear"),
                   d.get("weight_cap"))

    def to_dict(self) -> dict:
        return {"box": list(self.box), "resolution": list(self.resolution), "sigma": self.sigma,
                "weight": self.weight, "weight_cap": self.weight_cap}


def persistence_image(B, cfg: ImageConfig) -> FeatureVector:
    """Pixel integrals of the weighted Gaussian persistence surface.

    Pixel ``(i, j)`` covers the ``i``-th birth bin and ``j``-th persistence bin;
    its value is computed in closed form as a product of normal CDF
    differences, so no quadrature is involved.
    """
    B = _finite(B)
    ex, ee = cfg.edges()
    xi = B.births
    eta = B.deaths - B.births
    w = cfg.weight_fn(eta)
    Fx = ndtr((ex[None, :] - xi[:, None]) / cfg.sigma)
    Fe = ndtr((ee[None, :] - eta[:, None]) / cfg.sigma)
    px = np.diff(Fx, axis=1)
    pe = np.diff(Fe, axis=1)
    img = np.einsum("n,ni,nj->ij", w, px, pe)
    nx, ne = cfg.resolution
    labels = tuple(f"px_{i}_{j}" for i in range(nx) for j in range(ne))
    return FeatureVector(labels, img.ravel())
