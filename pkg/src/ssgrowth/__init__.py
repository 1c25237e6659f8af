"""Finite approximations of self-similar graphs and checks of their scaling laws.

The core pipeline: a :class:`CellModel` (substitution rule) is iterated by
:func:`generate` into ``G_n``; the invariant and growth modules measure
boundary sizes, diameters, degrees and ball volumes on ``G_n`` and compare them
with closed-form predictions, ending in the growth dimension ``log mu / log nu``.
"""

__version__ = "0.1.0"

from .graph import FiniteGraph, bfs_distances, diameter, isomorphism, reduce
from .model import BUILTIN_NAMES, CellModel, Parameters, builtin, model_parameters, validate
from .reports import TheoremReport
from .substitution import (CapExceeded, HierarchicalGraph, check_self_similarity, detect_origin, generate,
                           substitute, verify_reduction_isomorphism)
from .invariants import (check_bounded_geometry, check_cell_volume, check_cells_lemma, check_diameters,
                         check_edge_boundary, classify_geometry, deep_parameters)
from .growth import (check_growth_sandwich, doubling_ratio, estimate_dimensions, global_growth,
                     growth_function, safe_radius)
from .io import dump_model, export_graph, parse_model, write_growth_csv

__all__ = [
    "FiniteGraph", "bfs_distances", "diameter", "isomorphism", "reduce",
    "BUILTIN_NAMES", "CellModel", "Parameters", "builtin", "model_parameters", "validate",
    "TheoremReport",
    "CapExceeded", "HierarchicalGraph", "check_self_similarity", "detect_origin", "generate", "substitute",
    "verify_reduction_isomorphism",
    "check_bounded_geometry", "check_cell_volume", "check_cells_lemma", "check_diameters",
    "check_edge_boundary", "classify_geometry", "deep_parameters",
    "check_growth_sandwich", "doubling_ratio", "estimate_dimensions", "global_growth", "growth_function",
    "safe_radius",
    "dump_model", "export_graph", "parse_model", "write_growth_csv",
]
