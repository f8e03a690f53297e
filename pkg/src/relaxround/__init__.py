"""Relax-and-round for cardinality-constrained concave coverage."""

from .greedy import GreedyResult, greedy_select
from .hardgen import HardInstance, generate_hard_instance, greedy_gap_report
from .instance import (
    CoverageInstance,
    InstanceError,
    ParseError,
    build_symmetric_bipartite,
    load_native,
    load_snap_edgelist,
    save_native,
)
from .kernels import BACKEND
from .objective import (
    FractionalPoint,
    coverage_discrete,
    coverage_fractional,
    multilinear_extension,
    smooth_gradient,
    smooth_value,
)
from .ratios import alpha, alpha_curve
from .reward import Reward, parse_reward
from .rounding import caratheodory_decompose, round_best_of, swap_round
from .solver import DegenerateSmoothing, accelerated_solve, hypersimplex_project, make_schedule

__version__ = "0.1.0"
