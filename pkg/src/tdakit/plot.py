"""Static SVG renderings: barcodes, persistence diagrams, landscapes and Mapper graphs."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .diagrams import Diagram
from .vectorize import Landscape

W, H, PAD = 480, 360, 40
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _num(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


class _Canvas:
    def __init__(self, title: str, x_range, y_range):
        self.parts = []
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0
        self.title = title

    def X(self, x):
        return PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2 * PAD)

    def Y(self, y):
        return H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2 * PAD)

    def line(self, x0, y0, x1, y1, color="#000", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<line x1="{_num(self.X(x0))}" y1="{_num(self.Y(y0))}" x2="{_num(self.X(x1))}" '
                          f'y2="{_num(self.Y(y1))}" stroke="{color}" stroke-width="{width}"{d}/>')

    def circle(self, x, y, r=3.0, color="#000"):
        self.parts.append(f'<circle cx="{_num(self.X(x))}" cy="{_num(self.Y(y))}" r="{r}" fill="{color}"/>')

    def polyline(self, pts, color="#000"):
        coords = " ".join(f"{_num(self.X(x))},{_num(self.Y(y))}" for x, y in pts)
        self.parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')

    def text(self, px, py, s, anchor="middle", size=11):
        self.parts.append(f'<text x="{_num(px)}" y="{_num(py)}" font-size="{size}" '
                          f'text-anchor="{anchor}" font-family="sans-serif">{escape(s)}</text>')

    def axes(self, xlabel="", ylabel=""):
        self.parts.append(f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" '
                          'fill="none" stroke="#888"/>')
        self.text(PAD, H - PAD + 14, _num(self.x0))
        self.text(W - PAD, H - PAD + 14, _num(self.x1))
        self.text(PAD - 4, H - PAD, _num(self.y0), anchor="end")
        self.text(PAD - 4, PAD + 4, _num(self.y1), anchor="end")
        if xlabel:
            self.text(W / 2, H - 8, xlabel)
        if ylabel:
            self.text(12, H / 2, ylabel)

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
                f'<rect width="{W}" height="{H}" fill="white"/>\n')
        title = f'<text x="{W / 2}" y="20" font-size="13" text-anchor="middle" font-family="sans-serif">' \
                f'{escape(self.title)}</text>\n'
        return head + title + "\n".join(self.parts) + "\n</svg>\n"


def _extent(diagrams) -> tuple[float, float]:
    vals = [v for D in diagrams for b, d in D for v in (b, d) if math.isfinite(v)]
    if not vals:
        return 0.0, 1.0
    lo, hi = min(vals), max(vals)
    return lo, hi + 0.1 * (hi - lo or 1.0)


def barcode_svg(barcode: dict, title: str = "barcode") -> str:
    """Horizontal bars, one strip per homological dimension; essential bars run to the right edge."""
    items = sorted(barcode.items())
    lo, hi = _extent([D for _, D in items])
    n = sum(len(D) for _, D in items)
    c = _Canvas(title, (lo, hi), (0, max(n, 1) + len(items)))
    c.axes("scale")
    row = max(n, 1) + len(items) - 0.5
    for k, D in items:
        color = COLORS[k % len(COLORS)]
        c.text(W - PAD + 4, c.Y(row) + 4, f"H{k}", anchor="start")
        for b, d in D:
            c.line(b, row, d if math.isfinite(d) else hi, row, color, 2.0)
            row -= 1
        row -= 1
    return c.svg()


def diagram_svg(barcode: dict, title: str = "persistence diagram") -> str:
    """Points above the dashed diagonal; essential points sit on the top edge."""
    items = sorted(barcode.items())
    lo, hi = _extent([D for _, D in items])
    c = _Canvas(title, (lo, hi), (lo, hi))
    c.axes("birth", "death")
    c.line(lo, lo, hi, hi, "#888", 1.0, dash="4 3")
    for k, D in items:
        color = COLORS[k % len(COLORS)]
        for b, d in D:
            c.circle(b, d if math.isfinite(d) else hi, 3.0, color)
        c.text(W - PAD + 4, PAD + 14 * (k + 1), f"H{k}", anchor="start")
    return c.svg()


def landscape_svg(L: Landscape, title: str = "landscape") -> str:
    levels = [lv for lv in L.levels if len(lv)]
    if not levels:
        return _Canvas(title, (0, 1), (0, 1)).svg()
    ts = np.concatenate([lv[:, 0] for lv in levels])
    top = max(float(lv[:, 1].max()) for lv in levels)
    c = _Canvas(title, (float(ts.min()), float(ts.max())), (0.0, top * 1.1))
    c.axes("t", "lambda")
    for k, lv in enumerate(L.levels):
        if len(lv):
            c.polyline(lv.tolist(), COLORS[k % len(COLORS)])
    return c.svg()


def mapper_svg(graph_json: dict, title: str = "mapper") -> str:
    """Nodes placed by interval midpoint (x) and order within the interval (y)."""
    nodes = graph_json["nodes"]
    if not nodes:
        return _Canvas(title, (0, 1), (0, 1)).svg()
    slot: dict[tuple, int] = {}
    pos = {}
    for nd in nodes:
        key = tuple(nd["interval"])
        k = slot.get(key, 0)
        slot[key] = k + 1
        pos[nd["id"]] = ((key[0] + key[1]) / 2, float(k))
    xs = [x for x, _ in pos.values()]
    ys = [y for _, y in pos.values()]
    c = _Canvas(title, (min(xs) - 0.5, max(xs) + 0.5), (min(ys) - 1, max(ys) + 1))
    for a, b in graph_json["edges"]:
        c.line(*pos[a], *pos[b], "#555", 1.5)
    for nd in nodes:
        x, y = pos[nd["id"]]
        c.circle(x, y, 3 + math.sqrt(len(nd["members"])), COLORS[0])
    c.text(W / 2, H - 8, "filter value")
    return c.svg()
