"""Numerical toolkit for Voronoi summation, the delta method, stationary
phase analysis, and Rankin-Selberg L-values at desk scale."""

from . import (
    cli,
    delta_method,
    errors,
    forms,
    lfunction,
    pipeline,
    quadrature,
    special_fn,
    voronoi,
)
from .delta_method import build, delta_eval, g_function, ramanujan_sum
from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    InvariantError,
    NonConvergenceError,
    OscillaxError,
    PoleError,
    RegimeError,
    SchemaError,
    StationaryPointError,
    TailBudgetError,
    TruncationError,
)
from .forms import (
    HolomorphicForm,
    MaassFormData,
    delta_qexp,
    eigenform_weight16,
    hecke_check,
    load_maass_coefficients,
)
from .lfunction import (
    LSeriesContext,
    afe_eval,
    context_delta_e4delta,
    dirichlet_eval,
    exponent_scan,
    functional_equation_residual,
)
from .pipeline import (
    DESK1,
    PRESETS,
    PipelineParams,
    h_integral,
    h_property_suite,
    i_phase,
    k_asymptotic,
    k_integral,
)
from .quadrature import (
    OscillatoryIntegral,
    Scales,
    integrate_adaptive,
    integrate_oscillatory,
    mellin_barnes,
    stationary_phase_main_term,
)
from .special_fn import (
    StirlingConfig,
    gamma_factor,
    gamma_factor_asymptotic,
    gamma_stirling,
    ln_gamma,
)
from .voronoi import (
    phi_asymptotic,
    phi_holomorphic,
    phi_maass,
    psi_asymptotic,
    psi_mellin,
    standard_test_function,
    voronoi_verify,
)

__version__ = "0.1.0"
