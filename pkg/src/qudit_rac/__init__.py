"""Classical and quantum random access codes with d-level communication."""

__version__ = "0.1.0"

from .classical import (
    ClassicalStrategy,
    brute_force_optimal,
    classical_success,
    closed_form_success,
    count_strings,
    majority_strategy_success,
    partitions,
)
from .experiment import analyze, ideal_success, load_table2, prepare_optics_state
from .linalg import (
    computational_basis,
    fourier_basis,
    mub_overlap_check,
    outcome_prob,
    third_mub,
    weyl_x,
    weyl_z,
)
from .qrac2 import advantage2, encode2, success2_closed, success2_simulated
from .qrac3 import (
    base_state,
    encode3,
    quadratic_coeffs,
    success3,
    success_for_a,
    t_solutions,
    xi,
)
from .seesaw import StrategyQ, SeesawReport, seesaw_run
