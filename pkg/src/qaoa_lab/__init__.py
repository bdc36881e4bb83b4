"""Statevector simulation and experiment harness for warm-started QAOA on Max-Cut."""

from .classical import gw_local_search_cut, local_search, random_lo_cut
from .graph import CutAssignment, Graph, cut_value, generate_regular, max_cut_brute_force, read_graph, write_graph
from .metrics import approximation_ratio, bsp, expectation, gsp
from .optimize import Objective, OptimizerConfig, OptResult, optimize, tate_region_seeds
from .sim import CircuitParams, WarmStart, qaoa_state, warm_start_state

__version__ = "0.1.0"

__all__ = [
    "CircuitParams",
    "CutAssignment",
    "Graph",
    "Objective",
    "OptResult",
    "OptimizerConfig",
    "WarmStart",
    "approximation_ratio",
    "bsp",
    "cut_value",
    "expectation",
    "generate_regular",
    "gsp",
    "gw_local_search_cut",
    "local_search",
    "max_cut_brute_force",
    "optimize",
    "qaoa_state",
    "random_lo_cut",
    "read_graph",
    "tate_region_seeds",
    "warm_start_state",
    "write_graph",
]
