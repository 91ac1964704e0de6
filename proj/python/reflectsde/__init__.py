"""Reflected SDEs driven by generalized approximations of Brownian motion.

Thin Python surface over the C++ core: reflection maps (Skorohod problem),
seeded Brownian sampling, the approximation drivers with their correction
statistics, coupled reflected integrators, and strong-convergence studies.
"""

from ._core import (
    GENERATOR_ID,
    ApproxDriver,
    BrownianPath,
    Coefficients,
    ConfigurationError,
    DomainError,
    DomainShape,
    IoError,
    NumericError,
    ReflectedSolution,
    SampledPath,
    TimeGrid,
    __version__,
    coefficients_preset,
    corrected_drift,
    coupled_sup_error,
    estimate_c,
    estimate_c_star,
    estimate_s,
    integrate_driven_reflected,
    integrate_ito_reflected,
    limit_correction,
    moment_scaling_check,
    reflect_increment,
    run_convergence_study_config,
    run_convergence_study_file,
    sample_brownian,
    skorohod_halfline,
    skorohod_interval,
    skorohod_reflect,
    total_variation,
    verify_correction_trend,
    verify_recursion,
    zero_brownian,
)

__all__ = [
    "GENERATOR_ID",
    "ApproxDriver",
    "BrownianPath",
    "Coefficients",
    "ConfigurationError",
    "DomainError",
    "DomainShape",
    "IoError",
    "NumericError",
    "ReflectedSolution",
    "SampledPath",
    "TimeGrid",
    "__version__",
    "coefficients_preset",
    "corrected_drift",
    "coupled_sup_error",
    "estimate_c",
    "estimate_c_star",
    "estimate_s",
    "integrate_driven_reflected",
    "integrate_ito_reflected",
    "limit_correction",
    "moment_scaling_check",
    "reflect_increment",
    "run_convergence_study_config",
    "run_convergence_study_file",
    "sample_brownian",
    "skorohod_halfline",
    "skorohod_interval",
    "skorohod_reflect",
    "total_variation",
    "verify_correction_trend",
    "verify_recursion",
    "zero_brownian",
]
