#!/usr/bin/env python3
"""
Evolution Functions
-------------------

The seven functions of time that fully determine the reduced two-qubit
dynamics:

- u(t): decay amplitude of the doubly excited state
- v±(t): single-excitation amplitudes (direct and swapped)
- κ₁(t), κ₂(t): weights with which |11⟩ feeds the single-excitation block
- μ₁(t), μ₂(t): weights with which |11⟩⟨01|, |11⟩⟨10| feed ⟨01|, ⟨10| coherences

u and v± are exact pole expressions. κ comes either from the resonance
(delta-function) closed form or from quadrature over the field modes; μ
exists only as a quadrature.

Mode integrals run over k ∈ [0, ∞) with the cutoff factor e^{-εk}. The
resonance window [0, 2(ω₀+|σ|)] is integrated directly with breakpoints at
the resonances. Beyond it, each integrand is split into smooth amplitudes
times e^{iωk} and handed to the oscillatory routines; the angular kernel
K(kr) is written as Re[e^{ikr}H(kr)] once kr ≥ 4π.
"""

import cmath
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, List, Tuple

sys.path.append(str(Path(__file__).parent.parent))

from numerics.errors import DomainError
from numerics.quadrature import (
    QuadratureSpec,
    integrate_complex,
    oscillatory_segment,
    oscillatory_tail,
)

from .system_config import (
    ENVELOPE_PHASE,
    RateSet,
    SystemConfig,
    coupling_density,
    dipole_kernel,
    kernel_envelope,
)

logger = logging.getLogger(__name__)

# Below this |Γ₀−Γ_r|/Γ₀ the κ closed form switches to its expansion
DEGENERATE_THRESHOLD = 1e-6

# Beyond the window, integrate directly if the integrand has at most this many cycles
DIRECT_CYCLES = 200

MODE_SPEC = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-8, max_depth=400, max_cycles=400)

# Smooth amplitude f(k) paired with its oscillation frequency ω in e^{iωk}
Term = Tuple[float, Callable[[float], complex]]


class EvolutionMode(Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class EvolutionFunctions:
    """Snapshot of u, v±, κ₁,₂ and μ₁,₂ at time t."""
    t: float
    u: complex
    v_plus: complex
    v_minus: complex
    kappa1: float
    kappa2: float
    mu1: complex = 0j
    mu2: complex = 0j
    mode: EvolutionMode = EvolutionMode.CLOSED_FORM

    @classmethod
    def identity(cls, mode: EvolutionMode = EvolutionMode.CLOSED_FORM) -> "EvolutionFunctions":
        return cls(t=0.0, u=1 + 0j, v_plus=1 + 0j, v_minus=0j, kappa1=0.0, kappa2=0.0, mode=mode)


def _check_time(t: float):
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got {t}")


def decay_window(rate: float, t: float) -> float:
    """(1 − e^{-2·rate·t})/rate, with its limit 2t at rate = 0."""
    if rate == 0.0:
        return 2.0 * t
    return -math.expm1(-2.0 * rate * t) / rate


# --- Pole expressions ---

def u_fn(rates: RateSet, omega0: float, t: float) -> complex:
    _check_time(t)
    return cmath.exp(complex(-2.0 * rates.gamma0 * t, -2.0 * omega0 * t))


def v_pm(rates: RateSet, omega0: float, t: float) -> Tuple[complex, complex]:
    """
    v± = e^{-iω₀t−Γ₀t}·(e^{-iσt−Γ_rt} ± e^{iσt+Γ_rt})/2, written as cosh and −sinh
    of z = (Γ_r + iσ)t so v₋ carries no cancellation near t = 0.
    """
    _check_time(t)
    carrier = cmath.exp(complex(-rates.gamma0 * t, -omega0 * t))
    z = complex(rates.gamma_r * t, rates.sigma * t)
    return carrier * cmath.cosh(z), -carrier * cmath.sinh(z)


def kappa_closed(rates: RateSet, t: float) -> Tuple[float, float]:
    """κ₁ = Γ₀κ and κ₂ = Γ_rκ with κ = e^{-2Γ₀t}(e^{-Γ₀t} − e^{-Γ_rt})²/(Γ₀ − Γ_r)."""
    _check_time(t)
    w = rates.subradiant
    envelope = math.exp(-2.0 * rates.superradiant * t)
    if w == 0.0:
        kappa = 0.0
    elif abs(w) / rates.gamma0 < DEGENERATE_THRESHOLD:
        wt = w * t
        kappa = w * t * t * (1.0 - wt + 7.0 * wt * wt / 12.0) * envelope
    else:
        kappa = envelope * math.expm1(-w * t) ** 2 / w
    return rates.gamma0 * kappa, rates.gamma_r * kappa


def kappa_lorentzian(rates: RateSet, t: float) -> Tuple[float, float]:
    """
    κ₁,₂ with the resonance Lorentzian integrated exactly:
    (Γ₀, Γ_r)/(Γ₀ − Γ_r)·e^{-2Γ₀t}(e^{-2Γ_rt} − e^{-2Γ₀t}).
    """
    _check_time(t)
    weight = math.exp(-2.0 * rates.superradiant * t) * decay_window(rates.subradiant, t)
    return rates.gamma0 * weight, rates.gamma_r * weight


# --- Mode integrals ---

def _window_end(rates: RateSet, omega0: float) -> float:
    return 2.0 * (omega0 + abs(rates.sigma))


def _cycle_budget(frequency: float, length: float, base: int) -> int:
    return base + int(4.0 * abs(frequency) * length / (2.0 * math.pi))


def _mode_tail(cfg: SystemConfig, terms: List[Term], start: float, angular: bool,
               spec: QuadratureSpec) -> complex:
    """
    ∫_start^∞ Σ f(k)·e^{iωk}·[K(kr)]·e^{-εk} dk for the given (ω, f) terms.

    Between start and the envelope switch K(kr) is used directly; past it,
    K = (e^{ikr}H + e^{-ikr}H*)/2 shifts each frequency by ±r.
    """
    r, eps = cfg.r, cfg.cutoff_eps
    total = 0j
    if not angular:
        for omega, amplitude in terms:
            total += oscillatory_tail(amplitude, start, omega, eps, spec).value
        return total

    switch = min(max(start, ENVELOPE_PHASE / r), cfg.k_max)
    if switch > start:
        for omega, amplitude in terms:
            def phased(k: float, amplitude=amplitude) -> complex:
                return amplitude(k) * dipole_kernel(k * r, cfg.dipole_cos) * math.exp(-eps * k)

            budget = spec.with_budget(_cycle_budget(r, switch - start, spec.max_depth))
            total += oscillatory_segment(phased, start, switch, omega, budget).value
    if switch < cfg.k_max:
        for omega, amplitude in terms:
            def outgoing(k: float, amplitude=amplitude) -> complex:
                return 0.5 * amplitude(k) * kernel_envelope(k * r, cfg.dipole_cos)

            def incoming(k: float, amplitude=amplitude) -> complex:
                return 0.5 * amplitude(k) * kernel_envelope(k * r, cfg.dipole_cos).conjugate()

            total += oscillatory_tail(outgoing, switch, omega + r, eps, spec).value
            total += oscillatory_tail(incoming, switch, omega - r, eps, spec).value
    return total


def _mode_integral(cfg: SystemConfig, rates: RateSet, t: float,
                   direct: Callable[[float], complex], terms: List[Term],
                   points: List[float], angular: bool, spec: QuadratureSpec) -> complex:
    """
    ∫_0^∞ direct(k)·[K(kr)]·e^{-εk} dk, where direct equals Σ f(k)e^{iωk} of terms.

    direct is integrated over the resonance window and, when the remaining
    integrand is slow enough, over the rest of the cutoff range as well.
    """
    angular = angular and cfg.r > 0
    r, eps = cfg.r, cfg.cutoff_eps
    window_end = _window_end(rates, cfg.omega0)

    def weighted(k: float) -> complex:
        value = direct(k) * math.exp(-eps * k)
        if angular:
            value *= dipole_kernel(k * r, cfg.dipole_cos)
        return value

    frequency = t + (r if angular else 0.0)
    window_spec = spec.with_budget(_cycle_budget(frequency, window_end, spec.max_depth))
    total = integrate_complex(weighted, 0.0, window_end, window_spec, points).value

    rest = cfg.k_max - window_end
    if frequency * rest / (2.0 * math.pi) <= DIRECT_CYCLES:
        logger.debug("mode integral beyond window done directly (t=%g)", t)
        rest_spec = spec.with_budget(_cycle_budget(frequency, rest, spec.max_depth))
        total += integrate_complex(weighted, window_end, cfg.k_max, rest_spec).value
    else:
        total += _mode_tail(cfg, terms, window_end, angular, spec)
    return total


def _scaled_spec(spec: QuadratureSpec, prefactor: float) -> QuadratureSpec:
    return spec.with_abs_tol(spec.abs_tol / prefactor) if prefactor > 0 else spec


def kappa_quadrature(cfg: SystemConfig, rates: RateSet, t: float,
                     spec: QuadratureSpec = MODE_SPEC) -> Tuple[float, float]:
    """
    κ₁, κ₂ from the mode integrals

        κ₁ = P e^{-2Γ₀t} ∫ k e^{-εk} [A² + B² − 2AB cos((k₀ − k)t)] / ((k − k₀)² + w²) dk

    with A = e^{-Γ₀t}, B = e^{-Γ_rt}, k₀ = ω₀ − σ and w = Γ₀ − Γ_r. κ₂ carries
    the extra angular factor K(kr).
    """
    if not t > 0:
        raise DomainError(f"kappa_quadrature needs t > 0, got {t}")

    a = math.exp(-rates.gamma0 * t)
    b = math.exp(-rates.gamma_r * t)
    k0 = cfg.omega0 - rates.sigma
    w = rates.subradiant
    prefactor = coupling_density(cfg) * math.exp(-2.0 * rates.gamma0 * t)
    local_spec = _scaled_spec(spec, prefactor)

    def lorentzian(k: float) -> float:
        return k / ((k - k0) ** 2 + w * w)

    def direct(k: float) -> float:
        # (A−B)² + 4AB sin² avoids the A² + B² − 2AB cos cancellation
        half_phase = math.sin(0.5 * (k0 - k) * t)
        return lorentzian(k) * ((a - b) ** 2 + 4.0 * a * b * half_phase * half_phase)

    beat = -a * b * cmath.exp(1j * k0 * t)
    terms: List[Term] = [
        (0.0, lambda k: (a * a + b * b) * lorentzian(k)),
        (-t, lambda k: beat * lorentzian(k)),
        (t, lambda k: beat.conjugate() * lorentzian(k)),
    ]

    values = []
    for angular in (False, True):
        integral = _mode_integral(cfg, rates, t, direct, terms, [k0], angular, local_spec)
        values.append(prefactor * integral.real)
    return values[0], values[1]


def mu_fns(cfg: SystemConfig, rates: RateSet, t: float,
           spec: QuadratureSpec = MODE_SPEC) -> Tuple[complex, complex]:
    """
    μ₁ = P∫ k e^{-εk} n(k) s*(k) dk and μ₂ with the extra K(kr), using the
    pole forms

        n(k)  = c₀(c₀ − c₂e^{-ikt}) / (ω₀ − σ − k − iw)
        s*(k) = (e^{ikt} − e^{iz*t}) / (k − z*),  z = ω₀ + σ − i(Γ₀ + Γ_r)

    with c₀ = e^{-iω₀t−Γ₀t} and c₂ = e^{-iσt−Γ_rt}.
    """
    _check_time(t)
    if t == 0:
        return 0j, 0j

    sigma, w = rates.sigma, rates.subradiant
    c0 = cmath.exp(complex(-rates.gamma0 * t, -cfg.omega0 * t))
    c2 = cmath.exp(complex(-rates.gamma_r * t, -sigma * t))
    z_conj = complex(cfg.omega0 + sigma, rates.superradiant)
    c3 = cmath.exp(1j * z_conj * t)
    prefactor = coupling_density(cfg)
    local_spec = _scaled_spec(spec, prefactor)

    def denominator(k: float) -> complex:
        return complex(cfg.omega0 - sigma - k, -w) * (k - z_conj)

    def direct(k: float) -> complex:
        phase = cmath.exp(1j * k * t)
        return k * c0 * (c0 - c2 / phase) * (phase - c3) / denominator(k)

    terms: List[Term] = [
        (t, lambda k: k * c0 * c0 / denominator(k)),
        (0.0, lambda k: -k * c0 * (c0 * c3 + c2) / denominator(k)),
        (-t, lambda k: k * c0 * c2 * c3 / denominator(k)),
    ]
    points = [cfg.omega0 - sigma, cfg.omega0 + sigma]
    logger.debug("mu denominator: symmetric-channel self-energy, no extra e^{ik.r} phase (t=%g)", t)

    mu1 = prefactor * _mode_integral(cfg, rates, t, direct, terms, points, False, local_spec)
    mu2 = prefactor * _mode_integral(cfg, rates, t, direct, terms, points, True, local_spec)
    return mu1, mu2


def evolution_functions(cfg: SystemConfig, rates: RateSet, t: float,
                        mode: EvolutionMode = EvolutionMode.CLOSED_FORM,
                        include_mu: bool = False,
                        spec: QuadratureSpec = MODE_SPEC) -> EvolutionFunctions:
    _check_time(t)
    if t == 0:
        return EvolutionFunctions.identity(mode)

    v_plus, v_minus = v_pm(rates, cfg.omega0, t)
    if mode is EvolutionMode.QUADRATURE:
        kappa1, kappa2 = kappa_quadrature(cfg, rates, t, spec)
    else:
        kappa1, kappa2 = kappa_closed(rates, t)
    mu1, mu2 = mu_fns(cfg, rates, t, spec) if include_mu else (0j, 0j)
    return EvolutionFunctions(
        t=t,
        u=u_fn(rates, cfg.omega0, t),
        v_plus=v_plus,
        v_minus=v_minus,
        kappa1=kappa1,
        kappa2=kappa2,
        mu1=mu1,
        mu2=mu2,
        mode=mode,
    )
