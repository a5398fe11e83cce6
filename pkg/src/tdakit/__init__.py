"""Topological data analysis toolkit: filtered complexes, persistence, zig-zags, vectorizations, coverage."""

__version__ = "0.1.0"

from ._core import BACKEND
from .complexes import (
    ComplexError, FilteredComplex, alpha_complex_2d, bivariant_witness, cech, flag_complex, nerve,
    vietoris_rips, witness,
)
from .coverage import CoverageReport, SensorInput, simulate_deployment, verify_coverage
from .diagrams import Diagram, DiagramError, bottleneck, chi_pers, lambda_stat, median_distance_stat, wasserstein
from .mapper import IntervalCover, MapperGraph, mapper
from .metric import FiniteMetricSpace, MetricError, euclidean_metric, single_linkage_dendrogram, tree_metric
from .persistence import (
    Barcode, Bifiltration, ClosureError, betti_at, compute_barcodes, lower_star_filtration, rank_invariant_2d,
    relative_h_certificate,
)
from .vectorize import ImageConfig, Landscape, algebraic_features, landscape, persistence_image
from .zigzag import ZigzagDiagram, decompose

__all__ = [
    "BACKEND", "Barcode", "Bifiltration", "ClosureError", "ComplexError", "CoverageReport", "Diagram",
    "DiagramError", "FilteredComplex", "FiniteMetricSpace", "ImageConfig", "IntervalCover", "Landscape",
    "MapperGraph", "MetricError", "SensorInput", "ZigzagDiagram", "algebraic_features", "alpha_complex_2d",
    "betti_at", "bivariant_witness", "bottleneck", "cech", "chi_pers", "compute_barcodes", "decompose",
    "euclidean_metric", "flag_complex", "lambda_stat", "landscape", "lower_star_filtration", "mapper",
    "median_distance_stat", "nerve", "persistence_image", "rank_invariant_2d", "relative_h_certificate",
    "simulate_deployment", "single_linkage_dendrogram", "tree_metric", "verify_coverage", "vietoris_rips",
    "wasserstein", "witness",
]
