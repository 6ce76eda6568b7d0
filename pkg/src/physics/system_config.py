#!/usr/bin/env python3
"""
Physical Parameters and Rates
-----------------------------

Two qubits coupled only through the common vacuum field:

- SystemConfig: coupling λ², transition frequency ω₀, separation r,
  dipole orientation d̂·r̂ and the UV cutoff ε (factor e^{-εk})
- RateSet: single-qubit rate Γ₀, exchange rate Γ_r and collective shift σ
- dipole_kernel: Γ_r/Γ₀ as a function of ω₀r, used by every mode integral
  that carries an e^{ik·r} phase
- beta_quadrature: the phased self-energy β(E, r) by quadrature

Natural units throughout (ħ = c = 1).
"""

import logging
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from numpy.polynomial.polynomial import polyval
from scipy.special import factorial2, spherical_jn

sys.path.append(str(Path(__file__).parent.parent))

from numerics.errors import DomainError
from numerics.quadrature import (
    QuadratureSpec,
    integrate,
    oscillatory_segment,
    oscillatory_tail,
    pv_integrate,
)

logger = logging.getLogger(__name__)

# Below this ω₀r the Bessel form loses digits to cancellation
SERIES_THRESHOLD = 1e-3
SERIES_TERMS = 5

# k·r beyond which the kernel is integrated through its e^{ikr} envelope
ENVELOPE_PHASE = 4.0 * math.pi

# e^{-ε k_max} < 1e-12
CUTOFF_DECADES = math.log(1e12)

WEAK_COUPLING_LIMIT = 0.1
TWO_LEVEL_LIMIT = 0.1

BETA_SPEC = QuadratureSpec(abs_tol=1e-9, rel_tol=1e-8, max_depth=500, max_cycles=500)


@dataclass(frozen=True)
class SystemConfig:
    """Physical parameters of the qubit pair."""
    lambda_sq: float = 0.01
    omega0: float = 1.0
    r: float = 1.0
    dipole_cos: float = 0.0
    cutoff_eps: float = 1e-3

    def __post_init__(self):
        if not self.lambda_sq > 0:
            raise DomainError(f"lambda_sq must be positive, got {self.lambda_sq}")
        if not self.omega0 > 0:
            raise DomainError(f"omega0 must be positive, got {self.omega0}")
        if not self.r >= 0:
            raise DomainError(f"r must be non-negative, got {self.r}")
        if not abs(self.dipole_cos) <= 1:
            raise DomainError(f"dipole_cos must lie in [-1, 1], got {self.dipole_cos}")
        if not self.cutoff_eps > 0:
            raise DomainError(f"cutoff_eps must be positive, got {self.cutoff_eps}")
        if not self.omega0 * self.cutoff_eps < TWO_LEVEL_LIMIT:
            raise DomainError(
                f"omega0 * cutoff_eps must stay below {TWO_LEVEL_LIMIT}, got {self.omega0 * self.cutoff_eps}"
            )

    @property
    def x(self) -> float:
        """Dimensionless separation ω₀r."""
        return self.omega0 * self.r

    @property
    def weak_coupling(self) -> bool:
        return self.lambda_sq <= WEAK_COUPLING_LIMIT

    @property
    def k_max(self) -> float:
        """Momentum where the cutoff factor has fallen below 1e-12."""
        return CUTOFF_DECADES / self.cutoff_eps

    def with_separation(self, r: float) -> "SystemConfig":
        return replace(self, r=r)

    def validity_warnings(self, t_max: Optional[float] = None) -> List[str]:
        warnings = []
        if not self.weak_coupling:
            warnings.append(f"weak coupling: lambda_sq = {self.lambda_sq:g} exceeds {WEAK_COUPLING_LIMIT:g}")
        if t_max is not None and t_max < self.r:
            warnings.append(
                f"rotating wave approximation: t_max = {t_max:g} is shorter than the separation r = {self.r:g}"
            )
        return warnings


@dataclass(frozen=True)
class RateSet:
    """Γ₀, Γ_r and σ for one separation. Γ_r may be negative."""
    gamma0: float
    gamma_r: float
    sigma: float = 0.0
    valid_r_flag: bool = True

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise DomainError(f"gamma0 must be positive, got {self.gamma0}")

    @property
    def superradiant(self) -> float:
        return self.gamma0 + self.gamma_r

    @property
    def subradiant(self) -> float:
        return self.gamma0 - self.gamma_r

    @property
    def ratio(self) -> float:
        return self.gamma_r / self.gamma0


# --- Angular kernel ---

def orientation_weight(dipole_cos: float) -> float:
    """Weight q = (3(d̂·r̂)² − 1)/2 of the j₂ term."""
    return 0.5 * (3.0 * dipole_cos * dipole_cos - 1.0)


def _series_coefficients(n: int) -> np.ndarray:
    return np.array([
        (-1) ** k / (2.0 ** k * math.factorial(k) * float(factorial2(2 * n + 2 * k + 1)))
        for k in range(SERIES_TERMS)
    ])


_J0_SERIES = _series_coefficients(0)
_J2_SERIES = _series_coefficients(2)


def _spherical_jn_series(n: int, coefficients: np.ndarray, x: np.ndarray) -> np.ndarray:
    return x ** n * polyval(x * x, coefficients)


def dipole_kernel(x: Union[float, np.ndarray], dipole_cos: float = 0.0) -> Union[float, np.ndarray]:
    """
    Γ_r/Γ₀ at dimensionless separation x = ω₀r.

    Equal to j₀(x) + q·j₂(x), the closed sin/cos bracket divided by (2/3)x.
    Below SERIES_THRESHOLD a truncated Taylor series replaces the Bessel
    functions. Accepts scalars or arrays.
    """
    q = orientation_weight(dipole_cos)
    xs = np.abs(np.asarray(x, dtype=float))
    small = xs < SERIES_THRESHOLD
    series = _spherical_jn_series(0, _J0_SERIES, xs) + q * _spherical_jn_series(2, _J2_SERIES, xs)
    closed = spherical_jn(0, xs) + q * spherical_jn(2, xs)
    value = np.where(small, series, closed)
    if value.ndim == 0:
        return float(value)
    return value


def kernel_envelope(x: float, dipole_cos: float = 0.0) -> complex:
    """
    H(x) with dipole_kernel(x) = Re[e^{ix} H(x)].

    Only used for x ≥ ENVELOPE_PHASE, where the 1/x³ term is harmless.
    """
    q = orientation_weight(dipole_cos)
    sine_part = (1.0 - q) / x + 3.0 * q / x ** 3
    cosine_part = -3.0 * q / x ** 2
    return complex(cosine_part, -sine_part)


def angular_kernel_quadrature(x: float, dipole_cos: float = 0.0,
                              spec: QuadratureSpec = BETA_SPEC) -> float:
    """
    Direction average of (1 − (d̂·k̂)²)·e^{ik·r}, normalized to 1 at x = 0.

    Done by quadrature over μ = k̂·r̂ with the azimuth averaged in closed form.
    """
    c2 = dipole_cos * dipole_cos

    def transverse_weight(mu: float) -> float:
        return 0.75 * (1.0 - 0.5 * (1.0 - c2) * (1.0 - mu * mu) - c2 * mu * mu)

    return oscillatory_segment(transverse_weight, -1.0, 1.0, x, spec).value.real


# --- Rates ---

def coupling_density(cfg: SystemConfig) -> float:
    """Prefactor P of the mode sum: Σ g² h(k) → P∫ k h(k) dk."""
    return cfg.lambda_sq / (3.0 * math.pi ** 2)


def gamma0(cfg: SystemConfig) -> float:
    return cfg.lambda_sq * cfg.omega0 / (3.0 * math.pi)


def gamma_r(cfg: SystemConfig) -> float:
    if cfg.r == 0:
        return gamma0(cfg)
    return gamma0(cfg) * dipole_kernel(cfg.x, cfg.dipole_cos)


def _beta_real(cfg: SystemConfig, energy: float, spec: QuadratureSpec) -> float:
    """P·PV∫ k K(kr) e^{-εk}/(E − k) dk, split into window, middle and tail."""
    r, eps = cfg.r, cfg.cutoff_eps
    window_end = 2.0 * energy
    switch = min(max(window_end, ENVELOPE_PHASE / r), cfg.k_max)
    spec = spec.with_budget(spec.max_depth + int(4 * window_end * r))

    def weighted(k: float) -> float:
        return k * dipole_kernel(k * r, cfg.dipole_cos) * math.exp(-eps * k)

    total = pv_integrate(weighted, energy, 0.0, window_end, spec).value
    if switch > window_end:
        total += integrate(lambda k: weighted(k) / (k - energy), window_end, switch, spec).value
    if switch < cfg.k_max:
        def envelope(k: float) -> complex:
            return k * kernel_envelope(k * r, cfg.dipole_cos) / (k - energy)

        total += oscillatory_tail(envelope, switch, r, eps, spec).value.real
    else:
        logger.debug("beta tail skipped: envelope switch %.3g beyond cutoff range", switch)
    return -coupling_density(cfg) * total


def beta_quadrature(cfg: SystemConfig, energy: float, spec: QuadratureSpec = BETA_SPEC) -> complex:
    """
    β(E, r) = Σ_a g_a² e^{ik·r}/(E − ω_a), signed so that β(ω₀) = −σ + iΓ_r.

    The real part is a principal value; the imaginary part is the on-shell
    contribution Γ₀·(E/ω₀)·K(Er), with K from the direction quadrature.
    """
    if not energy > 0:
        raise DomainError(f"energy must be positive, got {energy}")
    if not cfg.r > 0:
        raise DomainError(f"beta needs a positive separation, got r = {cfg.r}")
    on_shell = gamma0(cfg) * (energy / cfg.omega0) * angular_kernel_quadrature(energy * cfg.r, cfg.dipole_cos, spec)
    return complex(_beta_real(cfg, energy, spec), on_shell)


def sigma_shift(cfg: SystemConfig, spec: QuadratureSpec = BETA_SPEC) -> float:
    """Collective shift σ(r) = −Re β(ω₀, r)."""
    if not cfg.r > 0:
        raise DomainError(f"sigma needs a positive separation, got r = {cfg.r}")
    return -_beta_real(cfg, cfg.omega0, spec)


def compute_rates(cfg: SystemConfig, include_shift: bool = True,
                  spec: QuadratureSpec = BETA_SPEC) -> RateSet:
    g0 = gamma0(cfg)
    gr = gamma_r(cfg)
    sigma = sigma_shift(cfg, spec) if include_shift and cfg.r > 0 else 0.0
    valid = abs(gr) <= g0 * (1.0 + 1e-12)
    if not valid:
        logger.debug("|gamma_r| exceeds gamma0 at omega0*r = %g", cfg.x)
    return RateSet(gamma0=g0, gamma_r=gr, sigma=sigma, valid_r_flag=valid)
