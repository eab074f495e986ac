"""Asymptotic and finite-length analysis of LDPC ensembles on the binary
erasure channel: density evolution, (E)BP/MAP EXIT curves via the Maxwell
construction, residual-graph counting and the Maxwell decoder."""

__version__ = "0.1.0"

from .counting import check_tightness, conditional_entropy, growth_rate, psi, residual_ensemble
from .density import (
    ConvergenceError,
    bp_threshold,
    bp_threshold_point,
    de_fixed_point,
    epsilon_of_x,
    shannon_threshold,
    stability_threshold,
    three_valued_de,
)
from .exit import (
    bp_area,
    compute_partition,
    curve_entropy,
    curve_entropy_polynomial,
    ebp_area,
    first_upper_bound,
    map_exit_curve,
    map_threshold,
    maxwell_trajectory,
    trial_entropy,
)
from .poly import DDPair, EnsembleError, Poly, ensemble_from_dict, load_ensemble, regular
