"""Finite-length graphs, decoders and exact oracles."""

from .decoder import GF2Basis, GuessExpr, MaxwellRun, guess_count_lower_bound, maxwell_decode, peel_bp
from .graph import TannerGraph, from_edges, from_matrix, load_graph, parse_adjacency, random_tree, sample_graph
from .oracle import (
    OracleSizeError,
    brute_force_list,
    exact_exit_polynomial,
    gf2_rank,
    hamming_parity_check,
    repetition_code,
    single_parity_check,
)
from .stats import entropy_concentration, run_trials, trajectory_stats
