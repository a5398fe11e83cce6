"""Batch command line front end.

Every run echoes the toolkit version and the resolved configuration to
standard error.  Errors go to standard error as ``E:<code>: message``; the
exit status is 2 for usage errors, 1 for computation errors and 0 otherwise.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, io
from .complexes import ComplexError, alpha_complex_2d, cech, vietoris_rips, witness
from .coverage import SensorInput, grid_covered, sample_positions, sensors_from_positions, verify_coverage
from .diagrams import Diagram, DiagramError, bottleneck, wasserstein
from .mapper import IntervalCover, mapper
from .metric import MetricError, euclidean_metric, random_tree, tree_metric
from .persistence import ClosureError, compute_barcodes, lower_star_filtration
from .plot import barcode_svg, diagram_svg, landscape_svg, mapper_svg
from .vectorize import FeatureVector, ImageConfig, algebraic_features, landscape, landscape_features, persistence_image
from .zigzag import ZigzagError, decompose, levelset_zigzag, sample_zigzag, witness_comparison_zigzag


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        io.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _metric_input(path, force_distances: bool = False):
    """Returns ``(metric, points or None)``."""
    if force_distances or io.looks_like_distances(path):
        return io.read_distances(path), None
    pts = io.read_points(path)
    return euclidean_metric(pts), pts


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


def _index_sets(path) -> list[list[int]]:
    return [_int_list(ln) for ln in io._lines(path)]


# --- subcommands ---------------------------------------------------------------------


def cmd_complex(args):
    X, pts = _metric_input(args.input, args.distances)
    if args.method in ("rips", "cech", "witness") and args.rmax is None:
        raise UsageError(f"--rmax is required for method {args.method}")
    if args.method == "rips":
        K = vietoris_rips(X, args.rmax, args.maxdim)
    elif args.method in ("cech", "alpha2d"):
        if pts is None:
            raise UsageError(f"method {args.method} needs point coordinates, not a distance matrix")
        K = cech(pts, args.rmax, args.maxdim) if args.method == "cech" else alpha_complex_2d(pts)
    else:
        if args.landmarks:
            L = _int_list(args.landmarks)
        elif args.n_landmarks:
            if args.seed is None:
                raise UsageError("--n-landmarks draws at random and needs --seed")
            rng = np.random.default_rng(args.seed)
            L = sorted(rng.choice(X.n, size=min(args.n_landmarks, X.n), replace=False).tolist())
        else:
            raise UsageError("witness complexes need --landmarks or --n-landmarks")
        K = witness(X, L, args.rmax, args.variant, args.maxdim)
    _emit(args, io.complex_to_text(K))


def cmd_persist(args):
    K = io.read_complex(args.complex)
    if args.function:
        K = lower_star_filtration(K, io.read_vector(args.function))
    B = compute_barcodes(K, args.field, args.maxdim, args.backend)
    _emit(args, io.barcode_to_text(B))


def _metric(a: Diagram, b: Diagram, args) -> float:
    return bottleneck(a, b) if args.metric == "bottleneck" else wasserstein(a, b, args.p)


def cmd_distance(args):
    A, B = io.read_barcode(args.a), io.read_barcode(args.b)
    if args.dim is not None:
        d = _metric(A.get(args.dim, Diagram()), B.get(args.dim, Diagram()), args)
    else:
        # all dimensions at once: max for the bottleneck, l_p combination for W_p
        per = [_metric(A.get(k, Diagram()), B.get(k, Diagram()), args) for k in sorted(set(A) | set(B))]
        if not per:
            d = 0.0
        elif args.metric == "bottleneck":
            d = max(per)
        else:
            d = sum(x ** args.p for x in per) ** (1 / args.p)
    sys.stdout.write(io.fmt(d) + "\n")


def _featurize_one(D: Diagram, method: str, cfg: dict):
    if method == "algebraic":
        return algebraic_features(D, [tuple(ij) for ij in cfg.get("indices", [[1, 0], [1, 1], [2, 0]])])
    if method == "landscape":
        L = landscape(D, int(cfg.get("k_max", 3)))
        grid = cfg.get("grid")
        if grid is None:
            lo, hi = map(float, cfg.get("range", [0.0, 1.0]))
            grid = np.linspace(lo, hi, int(cfg.get("n", 20))).tolist()
        return landscape_features(L, grid)
    return persistence_image(D, ImageConfig.from_dict(cfg))


def cmd_featurize(args):
    cfg = io.read_json(args.config) if args.config else {}
    if args.method == "image" and not cfg:
        raise UsageError("image features need --config with box, resolution and sigma")
    bc = io.read_barcode(args.dgm)
    dims = [args.dim] if args.dim is not None else sorted(bc)
    rows = []
    for k in dims:
        D = bc.get(k, Diagram())
        dropped = len(D.essential())
        if dropped:
            print(f"# dimension {k}: {dropped} essential interval(s) dropped", file=sys.stderr)
        rows.append(_featurize_one(D.finite(), args.method, cfg))
    if len(rows) > 1:
        # one row per dimension would need matching labels; prefix instead and concatenate
        labels = tuple(f"h{k}_{lab}" for k, r in zip(dims, rows) for lab in r.labels)
        rows = [FeatureVector(labels, np.concatenate([r.values for r in rows]))]
    _emit(args, io.features_to_text(rows))


def cmd_mapper(args):
    X, pts = _metric_input(args.input, args.distances)
    if args.filter.startswith("coord:"):
        if pts is None:
            raise UsageError("coord:<i> filters need point coordinates")
        i = int(args.filter.split(":", 1)[1])
        if not 0 <= i < pts.shape[1]:
            raise UsageError(f"coordinate {i} out of range")
        f = pts[:, i]
    else:
        f = io.read_vector(args.filter)
    G = mapper(X, f, IntervalCover(args.intervals, args.overlap), args.maxdim, args.bins)
    doc = G.to_json()
    _emit(args, io.json_text(doc))
    if args.svg:
        io.atomic_write(args.svg, mapper_svg(doc))


def cmd_zigzag(args):
    if bool(args.diagram) == bool(args.build):
        raise UsageError("give exactly one of --diagram and --build")
    if args.diagram:
        Z = io.read_zigzag(args.diagram)
    elif args.build == "sample":
        if not (args.input and args.samples and args.r is not None):
            raise UsageError("--build sample needs --input, --samples and --r")
        X, _ = _metric_input(args.input, args.distances)
        Z = sample_zigzag(X, _index_sets(args.samples), args.r, args.hom_dim, args.field)
    elif args.build == "witness":
        if not (args.input and args.samples and args.r is not None):
            raise UsageError("--build witness needs --input, --samples (landmark sets) and --r")
        X, _ = _metric_input(args.input, args.distances)
        Z = witness_comparison_zigzag(X, _index_sets(args.samples), args.r, args.hom_dim, args.field)
    else:
        if not (args.complex and args.function and args.levels):
            raise UsageError("--build levelset needs --complex, --function and --levels")
        K = io.read_complex(args.complex)
        Z = levelset_zigzag(K, io.read_vector(args.function), _int_list(args.levels), args.hom_dim, args.field)
    _emit(args, io.intervals_to_text(decompose(Z)))


def cmd_coverage(args):
    if bool(args.input) == bool(args.simulate):
        raise UsageError("give exactly one of --input and --simulate")
    if args.input:
        s = SensorInput.from_json(io.read_json(args.input))
        doc = verify_coverage(s, args.field).to_json()
    else:
        if args.seed is None:
            raise UsageError("--simulate draws a random deployment and needs --seed")
        if args.R is None or args.Rc is None:
            raise UsageError("--simulate needs --R and --Rc")
        domain = [float(t) for t in args.domain.replace(",", " ").split()]
        if len(domain) != 4:
            raise UsageError("--domain takes x0,x1,y0,y1")
        pos, nf = sample_positions(domain, args.n, args.R, args.seed)
        s = sensors_from_positions(pos, nf, args.R, args.Rc)
        if args.sensors_out:
            io.write_json(args.sensors_out, s.to_json())
        doc = verify_coverage(s, args.field).to_json()
        doc["ground_truth_covered"] = grid_covered(pos, domain, args.Rc)
    _emit(args, io.json_text(doc))


def cmd_synth(args):
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    random_shape = args.shape in ("tree", "noisy-circle")
    if random_shape and args.seed is None:
        raise UsageError(f"shape {args.shape} is random and needs --seed")
    rng = np.random.default_rng(args.seed)
    if args.shape == "tree":
        _emit(args, "".join(",".join(io.fmt(v) for v in row) + "\n" for row in tree_metric(random_tree(n, rng)).d))
        return
    if args.shape == "square":
        # n points evenly spaced along the unit square's perimeter; n = 4 gives the corners
        corners = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
        s = np.arange(n) * 4.0 / n
        side = np.minimum(s.astype(int), 3)
        frac = s - side
        pts = corners[side] + (corners[side + 1] - corners[side]) * frac[:, None]
    else:
        theta = 2 * np.pi * np.arange(n) / n
        pts = np.column_stack([np.cos(theta), np.sin(theta)])
        if args.shape == "noisy-circle":
            pts = pts + rng.normal(scale=args.noise, size=pts.shape)
    _emit(args, io.points_to_text(pts))


def cmd_plot(args):
    sources = [x for x in (args.dgm, args.barcode, args.landscape) if x]
    if len(sources) != 1:
        raise UsageError("give exactly one of --dgm, --barcode and --landscape")
    if args.dgm:
        svg = diagram_svg(io.read_barcode(args.dgm))
    elif args.barcode:
        svg = barcode_svg(io.read_barcode(args.barcode))
    else:
        D = io.read_barcode(args.landscape).get(args.dim, Diagram())
        svg = landscape_svg(landscape(D.finite(), args.kmax), f"landscape H{args.dim}")
    io.atomic_write(args.out, svg)


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tdakit", description="Topological data analysis batch tools.")
    ap.add_argument("--version", action="version", version=f"tdakit {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, fn, help):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(fn=fn)
        return p

    p = add("complex", cmd_complex, "Build a filtered complex from points or distances.")
    p.add_argument("--input", required=True, help="point CSV or distance CSV (square or lower-triangular)")
    p.add_argument("--distances", action="store_true", help="treat --input as a distance matrix")
    p.add_argument("--method", choices=["rips", "cech", "alpha2d", "witness"], default="rips")
    p.add_argument("--rmax", type=float)
    p.add_argument("--maxdim", type=int, default=2)
    p.add_argument("--landmarks", help="comma-separated landmark indices")
    p.add_argument("--n-landmarks", type=int, help="number of random landmarks (needs --seed)")
    p.add_argument("--variant", choices=["strong", "lazy", "weak"], default="strong")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = add("persist", cmd_persist, "Compute the persistence barcode of a complex file.")
    p.add_argument("--complex", required=True)
    p.add_argument("--function", help="vertex values (one per line) for a lower-star filtration")
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--maxdim", type=int)
    p.add_argument("--backend", choices=["cython", "python"])
    p.add_argument("--out")

    p = add("distance", cmd_distance, "Bottleneck or Wasserstein distance between two diagram files.")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=["bottleneck", "wasserstein"], default="bottleneck")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--dim", type=int, help="homology dimension (default: combine all)")

    p = add("featurize", cmd_featurize, "Vectorize a diagram file.")
    p.add_argument("--dgm", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--method", choices=["algebraic", "landscape", "image"], required=True)
    p.add_argument("--config", help="JSON config (indices / k_max,grid / image box,resolution,sigma)")
    p.add_argument("--out")

    p = add("mapper", cmd_mapper, "Mapper graph of a point cloud.")
    p.add_argument("--input", required=True)
    p.add_argument("--distances", action="store_true")
    p.add_argument("--filter", required=True, help="filter values file, or coord:<i>")
    p.add_argument("--intervals", type=int, default=10)
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--maxdim", type=int, default=2)
    p.add_argument("--svg")
    p.add_argument("--out")

    p = add("zigzag", cmd_zigzag, "Interval decomposition of a zig-zag diagram.")
    p.add_argument("--diagram", help="zig-zag file")
    p.add_argument("--build", choices=["sample", "levelset", "witness"])
    p.add_argument("--input")
    p.add_argument("--distances", action="store_true")
    p.add_argument("--samples", help="index sets, one per line (samples or landmark sets)")
    p.add_argument("--r", type=float)
    p.add_argument("--complex")
    p.add_argument("--function")
    p.add_argument("--levels", help="consecutive integer levels, e.g. 0,1,2")
    p.add_argument("--hom-dim", type=int, default=1)
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--out")

    p = add("coverage", cmd_coverage, "Coordinate-free coverage certificate.")
    p.add_argument("--input", help="sensors JSON")
    p.add_argument("--simulate", action="store_true", help="draw a random deployment instead")
    p.add_argument("--domain", default="0,1,0,1")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--R", type=float)
    p.add_argument("--Rc", type=float)
    p.add_argument("--sensors-out")
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = add("synth", cmd_synth, "Synthetic point clouds and tree metrics.")
    p.add_argument("--shape", choices=["circle", "square", "tree", "noisy-circle"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = add("plot", cmd_plot, "Static SVG plots of diagram files.")
    p.add_argument("--dgm")
    p.add_argument("--barcode")
    p.add_argument("--landscape")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--out", required=True)
    return ap


ERROR_CODES = [
    (ClosureError, "closure"),
    (io.FormatError, "format"),
    (MetricError, "metric"),
    (ComplexError, "complex"),
    (DiagramError, "diagram"),
    (ZigzagError, "zigzag"),
    (OSError, "io"),
    (ValueError, "value"),
]


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "fn"}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except UsageError as e:
        print(f"E:usage: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    print(f"# tdakit {__version__} " + json.dumps(_config(args), sort_keys=True), file=sys.stderr)
    try:
        args.fn(args)
    except UsageError as e:
        print(f"E:usage: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        for cls, code in ERROR_CODES:
            if isinstance(e, cls):
                print(f"E:{code}: {e}", file=sys.stderr)
                return 1
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
