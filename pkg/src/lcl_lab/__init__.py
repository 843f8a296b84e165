"""Simulated LOCAL-model algorithms for partial colorings of regular graphs."""

from .graph import Ball, Graph, GraphError, ball, gen_random_regular, gen_regular_tree
from .partial import (
    Mode,
    PreconditionError,
    compose_proper_coloring,
    layered_mis_coloring,
    two_sweep_coloring,
)
from .reduction import Disqualified, MemoizedOracle, constant_oracle, run_reduction
from .sim import RoundAlgorithm, choose_N, dc_local_run, run_rounds
from .symmetry import Coloring, compute_proper_coloring, linial_coloring, mis_from_coloring
from .verify import (
    Kind,
    Policy,
    Violation,
    verify_distance_coloring,
    verify_locally_optimal_cut,
    verify_partial_coloring,
    verify_proper_coloring,
    verify_sinkless,
)

__all__ = [name for name in dir() if not name.startswith("_")]
