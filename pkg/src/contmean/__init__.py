"""Continuous mean distance of weighted graphs.

Two exact backends compute it for any graph: a shortest-path-tree case
analysis and roof-diagram volumes.  Linear-time engines cover trees and
cacti.  Subdivision bounds and a quadrature oracle sit alongside.
"""

__version__ = "0.1.0"

from .aggregate import (
    MeanDistanceResult,
    continuous_mean,
    discrete_mean,
    scale_graph,
    vertex_graph_mean,
    wiener_index,
)
from .closed_forms import (
    SubtreeSummary,
    block_decomposition,
    cactus_mean,
    complete_uniform_mean,
    detect_class,
    merge_at_cut_vertex,
    tree_mean,
)
from .errors import (
    CapExceeded,
    ContMeanError,
    EmptyEdgeSet,
    InvalidParameter,
    MetricEdgeViolation,
    NotACactus,
    NotATree,
    NotUniform,
    ParseError,
    ValidationError,
)
from .generators import generate
from .graph import Edge, WeightedGraph, parse_graph, read_graph, serialize, total_length
from .oracle import OracleConfig, oracle_graph_mean, oracle_pair_mean
from .pair_spt import classify_pair, pair_mean, vertex_edge_mean
from .roof import build_roof, roof_mean, same_edge_mean
from .shortest_paths import DistanceMatrix, all_pairs_distances, continuous_spt
from .subdivision import (
    canonical_subdivision,
    line_graph_bounds,
    omega_sandwich,
    pair_bounds,
    subdivide_tree_arbitrary,
    subdivision_limits,
    tree_subdivision_bound_check,
)
from .tolerance import DEFAULT_TOL, Tolerance

__all__ = [
    "__version__",
    "all_pairs_distances",
    "block_decomposition",
    "build_roof",
    "cactus_mean",
    "canonical_subdivision",
    "CapExceeded",
    "classify_pair",
    "complete_uniform_mean",
    "continuous_mean",
    "continuous_spt",
    "ContMeanError",
    "DEFAULT_TOL",
    "detect_class",
    "discrete_mean",
    "DistanceMatrix",
    "Edge",
    "EmptyEdgeSet",
    "generate",
    "InvalidParameter",
    "line_graph_bounds",
    "MeanDistanceResult",
    "merge_at_cut_vertex",
    "MetricEdgeViolation",
    "NotACactus",
    "NotATree",
    "NotUniform",
    "omega_sandwich",
    "oracle_graph_mean",
    "oracle_pair_mean",
    "OracleConfig",
    "pair_bounds",
    "pair_mean",
    "parse_graph",
    "ParseError",
    "read_graph",
    "roof_mean",
    "same_edge_mean",
    "scale_graph",
    "serialize",
    "subdivide_tree_arbitrary",
    "subdivision_limits",
    "SubtreeSummary",
    "Tolerance",
    "total_length",
    "tree_mean",
    "tree_subdivision_bound_check",
    "ValidationError",
    "vertex_edge_mean",
    "vertex_graph_mean",
    "WeightedGraph",
    "wiener_index",
]
