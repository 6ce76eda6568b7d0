#!/usr/bin/env python3
"""
Quadrature Kernel
-----------------

Thin, error-checked layer over QUADPACK (``scipy.integrate.quad``):

- adaptive integration on finite or semi-infinite ranges
- Cauchy principal values by odd-part subtraction around the pole
- oscillatory integrals, finite (QAWO) and semi-infinite with a cutoff
  factor e^{-eps k} (QAWF, cycle-by-cycle with series extrapolation)

Every routine returns ``(value, error_estimate)`` and raises
``ToleranceNotMet`` when the reported error exceeds
``max(abs_tol, rel_tol * |value|)``.
"""

import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional, Sequence, Union

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, ToleranceNotMet

logger = logging.getLogger(__name__)

Number = Union[float, complex]


@dataclass(frozen=True)
class QuadratureSpec:
    """Error targets and budgets for one family of integrals."""
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 200  # QUADPACK subinterval budget
    pole: Optional[float] = None
    cutoff_eps: float = 0.0
    max_cycles: int = 200  # QAWF cycle budget

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError(f"tolerances must be positive, got abs={self.abs_tol}, rel={self.rel_tol}")
        if self.max_depth < 10:
            raise DomainError(f"max_depth must be at least 10, got {self.max_depth}")
        if self.cutoff_eps < 0:
            raise DomainError(f"cutoff_eps must be non-negative, got {self.cutoff_eps}")

    def with_abs_tol(self, abs_tol: float) -> "QuadratureSpec":
        return replace(self, abs_tol=abs_tol)

    def with_budget(self, max_depth: int) -> "QuadratureSpec":
        return replace(self, max_depth=max(self.max_depth, max_depth))


class QuadratureResult(NamedTuple):
    value: Number
    error: float


DEFAULT_SPEC = QuadratureSpec()


# --- Helpers ---

def _checked(value: float, error: float, spec: QuadratureSpec, what: str) -> QuadratureResult:
    target = max(spec.abs_tol, spec.rel_tol * abs(value))
    if not math.isfinite(value) or not math.isfinite(error) or error > target:
        raise ToleranceNotMet(f"{what} did not converge", value, error)
    return QuadratureResult(value, error)


def _run_quad(func: Callable[[float], float], a: float, b: float,
              spec: QuadratureSpec, what: str, **kwargs) -> QuadratureResult:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = quad(func, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                            limit=spec.max_depth, **kwargs)[:2]
    if caught:
        logger.debug("%s on [%g, %g]: %s (error %.3e)", what, a, b, caught[-1].message, error)
    return _checked(value, error, spec, what)


def _split_points(a: float, b: float, points: Optional[Sequence[float]]) -> Optional[list]:
    if not points:
        return None
    inside = sorted({p for p in points if a < p < b})
    return inside or None


# --- Adaptive integration ---

def integrate(f: Callable[[float], float], a: float, b: float,
              spec: QuadratureSpec = DEFAULT_SPEC,
              points: Optional[Sequence[float]] = None) -> QuadratureResult:
    """Integrate a real function over [a, b]; b may be +inf."""
    if not a < b:
        raise DomainError(f"integration range must satisfy a < b, got [{a}, {b}]")
    if math.isinf(b):
        if points:
            head = max(points) * 2.0
            first = integrate(f, a, head, spec, points)
            tail = integrate(f, head, b, spec)
            return QuadratureResult(first.value + tail.value, first.error + tail.error)
        return _run_quad(f, a, b, spec, "integrate")
    return _run_quad(f, a, b, spec, "integrate", points=_split_points(a, b, points))


def integrate_complex(f: Callable[[float], complex], a: float, b: float,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      points: Optional[Sequence[float]] = None) -> QuadratureResult:
    """Integrate a complex-valued function part by part."""
    re = integrate(lambda x: f(x).real, a, b, spec, points)
    im = integrate(lambda x: f(x).imag, a, b, spec, points)
    return QuadratureResult(complex(re.value, im.value), re.error + im.error)


def pv_integrate(f: Callable[[float], float], pole: float, a: float, b: float,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> QuadratureResult:
    """
    Principal value of the integral of f(x)/(x - pole) over [a, b].

    The symmetric window around the pole is reduced to the regular integral
    of (f(pole+u) - f(pole-u))/u; whatever remains of [a, b] is integrated
    directly. b may be +inf.
    """
    if not a < pole < b:
        raise DomainError(f"pole {pole} must lie strictly inside [{a}, {b}]")

    half_width = min(pole - a, b - pole)

    def odd_part(u: float) -> float:
        return (f(pole + u) - f(pole - u)) / u

    result = _run_quad(odd_part, 0.0, half_width, spec, "pv_integrate")
    value, error = result.value, result.error

    def regular(x: float) -> float:
        return f(x) / (x - pole)

    if pole + half_width < b:
        rest = integrate(regular, pole + half_width, b, spec)
        value, error = value + rest.value, error + rest.error
    if pole - half_width > a:
        rest = integrate(regular, a, pole - half_width, spec)
        value, error = value + rest.value, error + rest.error
    return QuadratureResult(value, error)


# --- Oscillatory integrals ---

def _fourier_parts(f: Callable[[float], complex], a: float, b: float, omega: float,
                   spec: QuadratureSpec, what: str, **kwargs) -> QuadratureResult:
    sign = 1.0 if omega > 0 else -1.0
    w = abs(omega)
    parts = {}
    for name, part in (("re", lambda x: f(x).real), ("im", lambda x: f(x).imag)):
        for weight in ("cos", "sin"):
            parts[name, weight] = _run_quad(part, a, b, spec, what, weight=weight, wvar=w, **kwargs)
    real = parts["re", "cos"].value - sign * parts["im", "sin"].value
    imag = sign * parts["re", "sin"].value + parts["im", "cos"].value
    error = sum(p.error for p in parts.values())
    return QuadratureResult(complex(real, imag), error)


def oscillatory_segment(f: Callable[[float], complex], a: float, b: float, omega: float,
                        spec: QuadratureSpec = DEFAULT_SPEC) -> QuadratureResult:
    """Integral of f(k)·exp(i·omega·k) over a finite range [a, b]."""
    if not a < b or math.isinf(b):
        raise DomainError(f"oscillatory_segment needs a finite range a < b, got [{a}, {b}]")
    if omega == 0.0:
        return integrate_complex(f, a, b, spec)
    return _fourier_parts(f, a, b, omega, spec, "oscillatory_segment")


def oscillatory_tail(f: Callable[[float], complex], a: float, omega_osc: float,
                     cutoff_eps: float, spec: QuadratureSpec = DEFAULT_SPEC) -> QuadratureResult:
    """
    Integral of f(k)·exp(-cutoff_eps·k)·exp(i·omega_osc·k) over [a, inf).

    Non-zero frequencies go through QAWF, which integrates cycle by cycle and
    extrapolates the partial sums with the epsilon algorithm.
    """
    if cutoff_eps < 0:
        raise DomainError(f"cutoff_eps must be non-negative, got {cutoff_eps}")

    def damped(k: float) -> complex:
        return f(k) * math.exp(-cutoff_eps * k)

    if omega_osc == 0.0:
        return integrate_complex(damped, a, math.inf, spec)
    return _fourier_parts(damped, a, math.inf, omega_osc, spec, "oscillatory_tail",
                          limlst=spec.max_cycles)
