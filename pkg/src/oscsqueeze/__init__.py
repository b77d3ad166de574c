"""Numerical laboratory for frequency-modulated harmonic oscillators.

Evolves the complex mode function of a single oscillator with
time-dependent frequency, extracts the quadratic invariant that tracks
the instantaneous squeezing of the state, and maps the result onto
thermodynamic quantities (entropy, energy, temperature, frequency
force).  A hypergeometric closed form for the smooth tanh switching
profile provides exact cross-checks.  Units: hbar = k_B = 1.
"""

from .analytic import (
    BogoliubovCoefficients,
    HypergeometricParams,
    PoleError,
    SeriesConvergenceError,
    TerminalSFactor,
    bogoliubov,
    bogoliubov_magnitudes,
    digamma_complex,
    exact_g_minus,
    exact_mode,
    hyp2f1_complex,
    hypergeometric_params,
    large_ratio_sfactor,
    log_gamma_complex,
    sudden_jump_sfactor,
    terminal_sfactor,
)
from .dopri import IntegrationError, IntegratorStats, integrate_dopri54
from .dynamics import (
    ModeInitialCondition,
    ModeTrajectory,
    SqueezeRecord,
    integrate_mode,
    invariant_coeffs,
    nonadiabaticity,
    positive_mode_ic,
    squeeze_record,
    squeezing_factor,
    squeezing_factor_integral,
    terminal_average,
    theta_phase,
    wronskian_drift,
)
from .profiles import (
    ConstantProfile,
    TabulatedProfile,
    TanhProfile,
    Violation,
    validate,
    validate_table,
)
from .thermo import (
    ConstraintViolationError,
    FirstLawCheck,
    ReconstructionResult,
    ThermalState,
    energy,
    entropy_from_eps,
    entropy_slope,
    eps_from_entropy,
    first_law_residual,
    force,
    husimi_q,
    reconstruct_from_omega_prime,
    squeezing_parameter,
    temperature,
    thermal_state_at,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BogoliubovCoefficients",
    "ConstantProfile",
    "ConstraintViolationError",
    "FirstLawCheck",
    "HypergeometricParams",
    "IntegrationError",
    "IntegratorStats",
    "ModeInitialCondition",
    "ModeTrajectory",
    "PoleError",
    "ReconstructionResult",
    "SeriesConvergenceError",
    "SqueezeRecord",
    "TabulatedProfile",
    "TanhProfile",
    "TerminalSFactor",
    "ThermalState",
    "Violation",
    "bogoliubov",
    "bogoliubov_magnitudes",
    "digamma_complex",
    "energy",
    "entropy_from_eps",
    "entropy_slope",
    "eps_from_entropy",
    "exact_g_minus",
    "exact_mode",
    "first_law_residual",
    "force",
    "husimi_q",
    "hyp2f1_complex",
    "hypergeometric_params",
    "integrate_dopri54",
    "integrate_mode",
    "invariant_coeffs",
    "large_ratio_sfactor",
    "log_gamma_complex",
    "nonadiabaticity",
    "positive_mode_ic",
    "reconstruct_from_omega_prime",
    "squeeze_record",
    "squeezing_factor",
    "squeezing_factor_integral",
    "squeezing_parameter",
    "sudden_jump_sfactor",
    "temperature",
    "terminal_average",
    "terminal_sfactor",
    "thermal_state_at",
    "theta_phase",
    "validate",
    "validate_table",
    "wronskian_drift",
]
