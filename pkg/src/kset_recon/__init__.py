"""Reconstructing graphs from the connectivity of their k-vertex subsets."""

from .bounded_degree import (
    Skeleton,
    bd_enumerate,
    bd_skeletons,
    completions,
    edge_importance,
    skeletons_from_text,
    skeletons_to_text,
)
from .core import (
    ContractError,
    Graph,
    InvalidParameter,
    KSetInstance,
    NoConnectedCompletion,
    PartialGraph,
    QueryCounter,
    ReconstructionError,
    UnsupportedInstance,
    connected_ksets,
    is_connected_subset,
    is_consistent,
    neighborhood_of_set,
)
from .formats import ParseError, parse_graph, parse_instance, serialize_graph, serialize_instance
from .hardness import CnfFormula, parse_dimacs, reduce_3sat, solve_partial
from .layering import ProbeStats, build_layering, layer_single
from .triangle_free import tf_enumerate, tf_finish, tf_kernel, tf_large_degree
from .uniqueness import (
    certify_unique,
    clear_non_neighbors,
    fake_neighbor_analysis,
    isolated_certificate,
    swap_property_holds,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "PartialGraph",
    "KSetInstance",
    "QueryCounter",
    "ReconstructionError",
    "InvalidParameter",
    "ContractError",
    "NoConnectedCompletion",
    "UnsupportedInstance",
    "ParseError",
    "connected_ksets",
    "is_connected_subset",
    "is_consistent",
    "neighborhood_of_set",
    "parse_graph",
    "serialize_graph",
    "parse_instance",
    "serialize_instance",
    "ProbeStats",
    "layer_single",
    "build_layering",
    "tf_finish",
    "tf_kernel",
    "tf_large_degree",
    "tf_enumerate",
    "Skeleton",
    "edge_importance",
    "skeletons_from_text",
    "skeletons_to_text",
    "bd_skeletons",
    "completions",
    "bd_enumerate",
    "swap_property_holds",
    "clear_non_neighbors",
    "isolated_certificate",
    "fake_neighbor_analysis",
    "certify_unique",
    "CnfFormula",
    "parse_dimacs",
    "reduce_3sat",
    "solve_partial",
]
