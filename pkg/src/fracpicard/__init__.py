"""Complex fractional differential equations ``D^a u = f(z, u)`` on the unit disc.

Solutions are truncated power series found by Picard iteration on the
equivalent Volterra integral equation; real-line Riemann-Liouville and
Caputo problems are handled through the real part of the complex solution.
"""
from ._accel import USE_NUMBA
from .conditions import CheckResult, GrowthEnvelope, check_condition_II, check_growth, check_regularized_compat
from .corpus import corpus_list, corpus_run, corpus_run_all
from .fracops import (
    JacobiRule,
    frac_derivative_series,
    frac_integral_quad,
    frac_integral_series,
    gauss_jacobi_rule,
)
from .realline import check_real_compat, real_residual, solve_real
from .series import (
    BivariateSeries,
    FracPowerSeries,
    compose_rhs,
    eval_series,
    schwarz_check,
    sup_norm_estimate,
)
from .solver import (
    ConditionIIViolated,
    ContractionEstimate,
    Kind,
    ProblemSpec,
    SolveReport,
    estimate_lipschitz,
    estimate_radius,
    picard_step,
    shift_to_homogeneous,
    solve_picard,
    univalence_check,
)
from .specfun import beta, gamma_ratio, log_gamma

__version__ = "0.1.0"
