#!/usr/bin/env python3
"""
Tests for the evolution functions
---------------------------------
"""

import cmath
import math

import numpy as np
import pytest

from numerics.errors import DomainError
from physics.evolution_functions import (
    EvolutionFunctions,
    EvolutionMode,
    decay_window,
    evolution_functions,
    kappa_closed,
    kappa_lorentzian,
    kappa_quadrature,
    mu_fns,
    u_fn,
    v_pm,
)
from physics.system_config import RateSet, SystemConfig, compute_rates

G0 = 1e-3


def rates_with(ratio: float, sigma: float = 0.0) -> RateSet:
    return RateSet(gamma0=G0, gamma_r=ratio * G0, sigma=sigma)


# --- u and v± ---

def test_u_identity_and_decay():
    rates = rates_with(0.3)
    assert u_fn(rates, 1.0, 0.0) == 1
    t = math.log(2.0) / G0
    assert abs(abs(u_fn(rates, 1.0, t)) - 0.25) < 1e-14


def test_u_phase():
    t = 3.7
    u = u_fn(rates_with(0.0), 1.0, t)
    assert abs(cmath.phase(u) - math.remainder(-2.0 * t, 2 * math.pi)) < 1e-12


def test_v_identity():
    v_plus, v_minus = v_pm(rates_with(0.5, sigma=1e-4), 1.0, 0.0)
    assert v_plus == 1
    assert v_minus == 0


def test_v_closed_form_literal():
    rates = rates_with(0.4, sigma=2e-4)
    t = 800.0
    v_plus, v_minus = v_pm(rates, 1.0, t)
    carrier = cmath.exp(complex(-G0 * t, -t)) / 2
    down = cmath.exp(complex(-rates.gamma_r * t, -rates.sigma * t))
    up = cmath.exp(complex(rates.gamma_r * t, rates.sigma * t))
    assert abs(v_plus - carrier * (down + up)) < 1e-14
    assert abs(v_minus - carrier * (down - up)) < 1e-14


def test_v_norm_at_full_exchange():
    t = 20.0 / G0
    v_plus, v_minus = v_pm(rates_with(1.0), 1.0, t)
    total = abs(v_plus) ** 2 + abs(v_minus) ** 2
    assert abs(total - math.exp(-2 * G0 * t) * math.cosh(2 * G0 * t)) < 1e-14
    assert abs(total - 0.5) < 1e-12


def test_v_decoupled_qubits():
    t = 1.3 / G0
    v_plus, v_minus = v_pm(rates_with(0.0), 1.0, t)
    assert abs(abs(v_plus) - math.exp(-G0 * t)) < 1e-14
    assert v_minus == 0


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        u_fn(rates_with(0.0), 1.0, -1.0)


# --- κ closed forms ---

def test_kappa_closed_at_zero():
    assert kappa_closed(rates_with(0.7), 0.0) == (0.0, 0.0)


def test_kappa_closed_decoupled_value():
    kappa1, kappa2 = kappa_closed(rates_with(0.0), math.log(2.0) / G0)
    assert abs(kappa1 - 0.0625) < 1e-14
    assert kappa2 == 0.0


@pytest.mark.parametrize("ratio", [-0.15, 0.2, 0.81, 0.99])
def test_kappa_closed_identities(ratio):
    rates = rates_with(ratio)
    t = 1.7 / G0
    kappa1, kappa2 = kappa_closed(rates, t)
    kappa = math.exp(-2 * G0 * t) * (math.exp(-G0 * t) - math.exp(-rates.gamma_r * t)) ** 2 / rates.subradiant
    assert abs((kappa1 + kappa2) - rates.superradiant * kappa) < 1e-14
    assert abs((kappa1 - kappa2) - rates.subradiant * kappa) < 1e-14
    assert kappa1 >= 0 and kappa1 + kappa2 >= 0 and kappa1 - kappa2 >= 0


@pytest.mark.parametrize("gap", [1e-3, 1e-6, 1e-9])
def test_kappa_closed_degenerate_limit(gap):
    rates = rates_with(1.0 - gap)
    t = 1.0 / G0
    kappa1, _ = kappa_closed(rates, t)
    w = rates.subradiant
    leading = w * t * t * math.exp(-2 * rates.superradiant * t)
    assert math.isfinite(kappa1)
    assert abs(kappa1 / G0 - leading) <= 2 * gap * leading


def test_kappa_closed_expansion_matches_exact_form():
    rates = rates_with(1.0 - 0.99e-6)
    t = 2.0 / G0
    w = rates.subradiant
    exact = G0 * math.exp(-2 * rates.superradiant * t) * math.expm1(-w * t) ** 2 / w
    expanded, _ = kappa_closed(rates, t)
    assert abs(expanded / exact - 1.0) < 1e-10


def test_kappa_closed_continuous_in_time():
    rates = rates_with(0.6)
    times = np.linspace(0.0, 10.0 / G0, 4001)
    values = np.array([kappa_closed(rates, t)[0] for t in times])
    steps = np.abs(np.diff(values))
    slope = np.max(np.abs(np.gradient(values, times)))
    assert np.max(steps) <= 10 * (times[1] - times[0]) * slope


def test_decay_window_limit():
    assert decay_window(0.0, 3.0) == 6.0
    assert abs(decay_window(1e-12, 3.0) - 6.0) < 1e-9


def test_kappa_lorentzian_sum_is_markov_population():
    rates = rates_with(0.5)
    t = 1.2 / G0
    kappa1, kappa2 = kappa_lorentzian(rates, t)
    expected = (rates.superradiant * math.exp(-2 * G0 * t) * math.exp(-2 * rates.gamma_r * t)
                * (1 - math.exp(-2 * rates.subradiant * t)) / rates.subradiant)
    assert abs((kappa1 + kappa2) - expected) < 1e-14


def test_kappa_lorentzian_reference_values():
    cfg = SystemConfig(lambda_sq=0.01, r=1.0)
    rates = compute_rates(cfg, include_shift=False)
    kappa1, kappa2 = kappa_lorentzian(rates, 1.0 / rates.gamma0)
    assert kappa1 == pytest.approx(0.04455, rel=2e-3)
    assert kappa2 == pytest.approx(0.03610, rel=2e-3)


@pytest.mark.parametrize("separation", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("omega0_t", [100.0, 1e3, 1e4])
def test_kappa_closed_to_lorentzian_ratio(separation, omega0_t):
    rates = compute_rates(SystemConfig(lambda_sq=0.01, r=separation), include_shift=False)
    closed1, closed2 = kappa_closed(rates, omega0_t)
    lorentz1, lorentz2 = kappa_lorentzian(rates, omega0_t)
    ratio = math.tanh(0.5 * rates.subradiant * omega0_t)
    assert closed1 / lorentz1 == pytest.approx(ratio, rel=1e-9)
    assert closed2 / lorentz2 == pytest.approx(ratio, rel=1e-9)


# --- κ by quadrature ---

@pytest.fixture(scope="module")
def unit_separation():
    cfg = SystemConfig(lambda_sq=0.01, omega0=1.0, r=1.0)
    return cfg, compute_rates(cfg)


@pytest.mark.parametrize("scaled_time", [1.0, 2.0])
def test_kappa_quadrature_tracks_lorentzian(unit_separation, scaled_time):
    cfg, rates = unit_separation
    t = scaled_time / rates.gamma0
    quad1, quad2 = kappa_quadrature(cfg, rates, t)
    ref1, ref2 = kappa_lorentzian(rates, t)
    assert abs(quad1 - ref1) <= 0.03 * ref1
    assert abs(quad2 - ref2) <= 0.03 * ref2
    assert quad1 >= abs(quad2)


def test_kappa_quadrature_far_above_closed_form_at_early_times(unit_separation):
    cfg, rates = unit_separation
    t = 100.0
    quad1, quad2 = kappa_quadrature(cfg, rates, t)
    ref1, ref2 = kappa_lorentzian(rates, t)
    closed1, closed2 = kappa_closed(rates, t)
    assert quad1 == pytest.approx(ref1, rel=0.05)
    assert quad2 == pytest.approx(ref2, rel=0.05)
    # the resonance-only form falls short by 1/tanh((Γ₀−Γ_r)t/2), about 99 here
    enhancement = 1.0 / math.tanh(0.5 * rates.subradiant * t)
    assert enhancement > 90
    assert quad1 / closed1 == pytest.approx(enhancement, rel=0.05)
    assert quad2 / closed2 == pytest.approx(enhancement, rel=0.05)


def test_kappa_quadrature_vanishes_at_short_times(unit_separation):
    cfg, rates = unit_separation
    quad1, quad2 = kappa_quadrature(cfg, rates, 1e-6)
    assert abs(quad1) < 1e-8
    assert abs(quad2) < 1e-8


def test_kappa_quadrature_exchange_fades_with_distance():
    cfg = SystemConfig(lambda_sq=0.01, r=1e3)
    rates = compute_rates(cfg)
    quad1, quad2 = kappa_quadrature(cfg, rates, 1.0 / rates.gamma0)
    assert abs(quad2) < 0.05 * quad1


def test_kappa_quadrature_needs_positive_time(unit_separation):
    cfg, rates = unit_separation
    with pytest.raises(DomainError):
        kappa_quadrature(cfg, rates, 0.0)


# --- μ ---

def test_mu_vanishes_at_zero(unit_separation):
    cfg, rates = unit_separation
    assert mu_fns(cfg, rates, 0.0) == (0j, 0j)


def test_mu_bounded_by_coupling(unit_separation):
    cfg, rates = unit_separation
    mu1, mu2 = mu_fns(cfg, rates, 1.0 / rates.gamma0)
    bound = 10 * math.sqrt(cfg.lambda_sq)
    assert abs(mu1) <= bound
    assert abs(mu2) <= bound
    assert abs(mu1) > 0


def test_mu_phased_sum_fades_with_distance():
    cfg = SystemConfig(lambda_sq=0.01, r=1e3)
    rates = compute_rates(cfg)
    mu1, mu2 = mu_fns(cfg, rates, 1.0 / rates.gamma0)
    assert abs(mu2) < 0.05 * abs(mu1)


# --- assembly ---

def test_evolution_functions_identity_at_zero(unit_separation):
    cfg, rates = unit_separation
    ev = evolution_functions(cfg, rates, 0.0, EvolutionMode.QUADRATURE)
    assert ev == EvolutionFunctions.identity(EvolutionMode.QUADRATURE)


def test_evolution_functions_closed_form(unit_separation):
    cfg, rates = unit_separation
    t = 2.5 / rates.gamma0
    ev = evolution_functions(cfg, rates, t)
    assert ev.mode is EvolutionMode.CLOSED_FORM
    assert ev.u == u_fn(rates, cfg.omega0, t)
    assert (ev.v_plus, ev.v_minus) == v_pm(rates, cfg.omega0, t)
    assert (ev.kappa1, ev.kappa2) == kappa_closed(rates, t)
    assert ev.mu1 == 0j and ev.mu2 == 0j
    assert abs(ev.u) <= 1
    assert abs(ev.v_plus) ** 2 + abs(ev.v_minus) ** 2 <= 1
