#!/usr/bin/env python3
"""
Simulation Errors
-----------------

Exception family shared by the numerical core and the command-line front end.
The CLI maps configuration problems to exit status 2 and numerical failures
to exit status 3.
"""

from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulation engine."""


class QuadratureFailure(SimulationError):
    """An integral could not be evaluated."""


class ToleranceNotMet(QuadratureFailure):
    """Quadrature finished but the error estimate exceeds the requested target."""

    def __init__(self, message: str, best_estimate: complex, error_estimate: float):
        super().__init__(f"{message} (estimate={best_estimate!r}, error={error_estimate:.3e})")
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class DomainError(SimulationError, ValueError):
    """An argument lies outside the domain of an operation."""


class ShapeError(SimulationError, ValueError):
    """A matrix does not have the structure an operation requires."""


class InvariantViolation(SimulationError):
    """A computed state broke trace, Hermiticity or positivity tolerances."""


class NumericalFailure(SimulationError):
    """A linear-algebra routine failed."""


class ConfigError(SimulationError, ValueError):
    """A run configuration value is missing or invalid."""

    def __init__(self, key: str, message: str, value: Optional[str] = None):
        detail = f"{key}: {message}"
        if value is not None:
            detail += f" (got {value!r})"
        super().__init__(detail)
        self.key = key
        self.value = value
