"""Entropy fluctuations and the mixedness parameter ``Q_S = exp(-(Delta S)^2 / S)``."""

from .errors import ConvergenceError, MixmeterError, ValidationError
from .mixedness import (
    entropy_variance,
    linear_entropy,
    mixedness_parameter,
    report,
    von_neumann_entropy,
)
from .models import DensityMatrix, MixednessReport, Spectrum
from .qmatrix import hermitian_eigenvalues, validate_density
from .scenarios import ScenarioResult, ScenarioSpec, run_scenario

__all__ = [
    "ConvergenceError",
    "DensityMatrix",
    "MixednessReport",
    "MixmeterError",
    "Spectrum",
    "ValidationError",
    "entropy_variance",
    "hermitian_eigenvalues",
    "linear_entropy",
    "mixedness_parameter",
    "report",
    "run_scenario",
    "ScenarioResult",
    "ScenarioSpec",
    "validate_density",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
