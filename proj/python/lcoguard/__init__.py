"""Stability, normal-form and continuation analysis of tuned vibration absorbers."""

from ._lcoguard import (
    DomainError,
    NumericalError,
    System,
    __version__,
    beta3_tuning,
    branch,
    compare_time_series,
    critical_mu1,
    delta,
    eigenvalues,
    is_stable,
    lco_amplitude,
    nes_mu1_max,
    optimal_tuning,
    run_cli,
    supercritical_probability,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "System",
    "__version__",
    "beta3_tuning",
    "branch",
    "compare_time_series",
    "critical_mu1",
    "delta",
    "eigenvalues",
    "is_stable",
    "lco_amplitude",
    "nes_mu1_max",
    "optimal_tuning",
    "run_cli",
    "supercritical_probability",
]
