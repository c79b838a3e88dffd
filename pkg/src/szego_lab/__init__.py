"""Szego outer functions on Jordan curves, constrained L^p extremal polynomials,
and numerical checks of the resulting transport bound."""

from .bounds import (
    InequalityReport,
    check_embedding_inequality,
    fejer_riesz_check,
    inequality_constants,
    lp_norm_boundary,
    mu_p,
    theorem_chain,
    theorem_rhs,
)
from .curve import BoundaryGrid, ConformalPair, make_boundary_grid, map_forward, map_inverse
from .errors import (
    ConfigError,
    ConsistencyFailure,
    ExponentMismatch,
    IllConditioned,
    NonConvergence,
    TruncationWarning,
)
from .extremal import ExtremalSolution, ls_oracle_p2, solve_extremal
from .numerics import ComplexPoly, integrate_periodic, integrate_segment, poly_antiderivative, poly_eval, poly_pow
from .szego import OuterFunction, build_outer, eval_outer, eval_outer_power, eval_target
from .transport import TransportPair, compute_Jn, compute_phi_integral, make_transport, sup_diff_on_compact
from .weight import NuWeight, WeightSpec, eval_weight, make_nu_weight, validate_szego_condition

__version__ = "0.1.0"
