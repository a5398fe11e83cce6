"""Plain-text file formats.  Every writer is atomic and every reader inverts its writer."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .complexes import FilteredComplex
from .diagrams import Diagram
from .metric import FiniteMetricSpace, as_point_cloud, from_iterable_rows
from .persistence import Barcode
from .vectorize import FeatureVector
from .zigzag import ZigzagDiagram, ZigzagError


class FormatError(ValueError):
    pass


def fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _lines(path) -> list[str]:
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def _float(tok: str, where: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"{where}: not a number: {tok!r}") from None


# --- point clouds and distance matrices ---------------------------------------------


def points_to_text(points) -> str:
    P = as_point_cloud(points)
    return "".join(",".join(fmt(v) for v in row) + "\n" for row in P)


def write_points(path, points) -> None:
    atomic_write(path, points_to_text(points))


def _csv_rows(path) -> list[list[float]]:
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            row = [c.strip() for c in row if c.strip()]
            if row:
                rows.append([_float(c, f"{path}:{i + 1}") for c in row])
    return rows


def read_points(path) -> np.ndarray:
    rows = _csv_rows(path)
    if not rows:
        raise FormatError(f"{path}: no points")
    if len({len(r) for r in rows}) != 1:
        raise FormatError(f"{path}: rows have different lengths")
    return as_point_cloud(rows)


def write_distances(path, X: FiniteMetricSpace) -> None:
    atomic_write(path, "".join(",".join(fmt(v) for v in row) + "\n" for row in X.d))


def read_distances(path) -> FiniteMetricSpace:
    return from_iterable_rows(_csv_rows(path))


def looks_like_distances(path) -> bool:
    """Lower-triangular row lengths, or a square symmetric matrix with zero diagonal."""
    rows = _csv_rows(path)
    n = len(rows)
    lens = [len(r) for r in rows]
    if n > 1 and lens == list(range(1, n + 1)):
        return True
    if n > 1 and all(k == n for k in lens):
        A = np.array(rows)
        return bool(np.all(np.diag(A) == 0) and np.array_equal(A, A.T))
    return False


# --- complexes ---------------------------------------------------------------------------


def complex_to_text(K: FilteredComplex) -> str:
    return "".join(f"{fmt(v)} " + " ".join(map(str, s)) + "\n" for s, v in K)


def write_complex(path, K: FilteredComplex) -> None:
    atomic_write(path, complex_to_text(K))


def read_complex(path) -> FilteredComplex:
    entries = []
    for i, ln in enumerate(_lines(path)):
        toks = ln.replace(",", " ").split()
        if len(toks) < 2:
            raise FormatError(f"{path}:{i + 1}: expected 'value v0 ... vk'")
        try:
            verts = [int(t) for t in toks[1:]]
        except ValueError:
            raise FormatError(f"{path}:{i + 1}: vertex ids must be integers") from None
        if len(set(verts)) != len(verts):
            raise FormatError(f"{path}:{i + 1}: repeated vertex")
        entries.append((verts, _float(toks[0], f"{path}:{i + 1}")))
    return FilteredComplex(entries)


# --- diagrams ----------------------------------------------------------------------------


def barcode_to_text(B) -> str:
    """``k birth death`` lines sorted by ``(k, birth, death)``; a bare Diagram is written as dimension 0."""
    items = B.items() if isinstance(B, Barcode) else sorted(B.items()) if isinstance(B, dict) else [(0, B)]
    out = []
    for k, D in items:
        for b, d in D:  # Diagram iterates in sorted order
            out.append(f"{k} {fmt(b)} {fmt(d)}\n")
    return "".join(out)


def write_barcode(path, B) -> None:
    atomic_write(path, barcode_to_text(B))


def read_barcode(path) -> dict[int, Diagram]:
    pts: dict[int, list] = {}
    for i, ln in enumerate(_lines(path)):
        toks = ln.replace(",", " ").split()
        if len(toks) != 3:
            raise FormatError(f"{path}:{i + 1}: expected 'k birth death'")
        try:
            k = int(toks[0])
        except ValueError:
            raise FormatError(f"{path}:{i + 1}: dimension must be an integer") from None
        b, d = _float(toks[1], f"{path}:{i + 1}"), _float(toks[2], f"{path}:{i + 1}")
        if d < b:
            raise FormatError(f"{path}:{i + 1}: death before birth")
        pts.setdefault(k, []).append((b, d))
    return {k: Diagram(v) for k, v in sorted(pts.items())}


def read_diagram(path, dim: int | None = None) -> Diagram:
    """One diagram from a diagram file: dimension ``dim``, or all lines when the file has a single dimension."""
    bc = read_barcode(path)
    if dim is None:
        if len(bc) > 1:
            raise FormatError(f"{path}: several dimensions present, choose one")
        return next(iter(bc.values()), Diagram())
    return bc.get(dim, Diagram())


# --- zig-zag -----------------------------------------------------------------------------


def zigzag_to_text(Z: ZigzagDiagram) -> str:
    out = io.StringIO()
    out.write(f"{Z.m} {Z.p}\n")
    out.write(" ".join(map(str, Z.dims)) + "\n")
    for d, M in Z.arrows:
        out.write(f"{d} {M.shape[0]} {M.shape[1]}\n")
        for row in M if M.shape[1] else ():  # zero-width rows are omitted
            out.write(" ".join(map(str, row)) + "\n")
    return out.getvalue()


def write_zigzag(path, Z: ZigzagDiagram) -> None:
    atomic_write(path, zigzag_to_text(Z))


def read_zigzag(path) -> ZigzagDiagram:
    toks = iter(_lines(path))
    try:
        m, p = map(int, next(toks).split())
        dims = [int(t) for t in next(toks).split()]
        if len(dims) != m:
            raise FormatError(f"{path}: header says {m} slots, dims line has {len(dims)}")
        arrows = []
        for _ in range(m - 1):
            d, r, c = next(toks).split()
            r, c = int(r), int(c)
            rows = [[int(t) for t in next(toks).split()] for _ in range(r if c else 0)]
            if any(len(row) != c for row in rows):
                raise FormatError(f"{path}: matrix row length differs from {c}")
            M = np.array(rows, dtype=np.int64).reshape(r, c) if c else np.zeros((r, 0), dtype=np.int64)
            arrows.append((d, M))
        rest = list(toks)
        if rest:
            raise FormatError(f"{path}: trailing content after last arrow")
    except StopIteration:
        raise FormatError(f"{path}: truncated zig-zag file") from None
    except ValueError as e:
        if isinstance(e, (FormatError, ZigzagError)):
            raise
        raise FormatError(f"{path}: malformed zig-zag file ({e})") from None
    return ZigzagDiagram(tuple(dims), tuple(arrows), p)


def intervals_to_text(intervals) -> str:
    return "".join(f"{i} {j}\n" for i, j in sorted(intervals))


def read_intervals(path) -> list[tuple[int, int]]:
    return [tuple(int(t) for t in ln.split()) for ln in _lines(path)]


# --- features and JSON documents -------------------------------------------------------


def features_to_text(rows: list[FeatureVector]) -> str:
    if not rows:
        return ""
    labels = rows[0].labels
    if any(r.labels != labels for r in rows):
        raise FormatError("feature vectors have different labels")
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(labels)
    for r in rows:
        w.writerow([fmt(v) for v in r.values])
    return out.getvalue()


def read_features(path) -> list[FeatureVector]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        return []
    labels = tuple(rows[0])
    return [FeatureVector(labels, np.array([_float(c, str(path)) for c in r])) for r in rows[1:]]


def json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path, doc) -> None:
    atomic_write(path, json_text(doc))


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e})") from None


def read_vector(path) -> np.ndarray:
    """A column of numbers (one per line, or the first CSV column)."""
    rows = _csv_rows(path)
    if any(len(r) != 1 for r in rows):
        raise FormatError(f"{path}: expected one value per line")
    return np.array([r[0] for r in rows])
