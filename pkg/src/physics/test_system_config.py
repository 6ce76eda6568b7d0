#!/usr/bin/env python3
"""
Tests for physical parameters and rates
---------------------------------------
"""

import math

import numpy as np
import pytest

from numerics.errors import DomainError
from physics.system_config import (
    SERIES_THRESHOLD,
    RateSet,
    SystemConfig,
    angular_kernel_quadrature,
    beta_quadrature,
    compute_rates,
    dipole_kernel,
    gamma0,
    gamma_r,
    sigma_shift,
)


def test_gamma0_closed_form():
    assert abs(gamma0(SystemConfig(lambda_sq=0.01, omega0=1.0)) - 1.061033e-3) < 1e-9
    assert abs(gamma0(SystemConfig(lambda_sq=0.03, omega0=2.0)) - 6.366198e-3) < 1e-9


def test_gamma_r_at_half_wavelength():
    cfg = SystemConfig(lambda_sq=0.01, omega0=1.0, r=math.pi, dipole_cos=0.0)
    assert abs(gamma_r(cfg) / gamma0(cfg) + 3.0 / (2.0 * math.pi ** 2)) < 1e-12
    assert abs(gamma_r(cfg) + 0.01 / (2.0 * math.pi ** 3)) < 1e-15


def test_gamma_r_matches_printed_bracket():
    lam, x, c = 0.01, 2.3, 0.4
    cfg = SystemConfig(lambda_sq=lam, omega0=1.0, r=x, dipole_cos=c)
    s, co = math.sin(x), math.cos(x)
    bracket = (s + co / x - s / x ** 2) - c * c * (s + 3 * co / x - 3 * s / x ** 2)
    assert abs(gamma_r(cfg) - lam / (2 * math.pi * x) * bracket) < 1e-15


@pytest.mark.parametrize("dipole_cos", [0.0, 0.5, 1.0])
def test_gamma_r_small_separation_limit(dipole_cos):
    cfg = SystemConfig(r=1e-4, dipole_cos=dipole_cos)
    assert abs(gamma_r(cfg) / gamma0(cfg) - 1.0) < 1e-6


def test_gamma_r_zero_separation_is_gamma0():
    cfg = SystemConfig(r=0.0)
    assert gamma_r(cfg) == gamma0(cfg)


def test_gamma_r_large_separation():
    cfg = SystemConfig(r=1e3)
    assert abs(gamma_r(cfg) / gamma0(cfg)) < 0.01


def test_series_branch_continuous_at_threshold():
    below = dipole_kernel(SERIES_THRESHOLD * (1 - 1e-12), 0.3)
    above = dipole_kernel(SERIES_THRESHOLD, 0.3)
    assert abs(below - above) / abs(above) < 1e-10


def test_dipole_kernel_accepts_arrays():
    xs = np.array([1e-5, 0.5, math.pi, 50.0])
    values = dipole_kernel(xs, 0.0)
    assert values.shape == xs.shape
    assert all(abs(values[i] - dipole_kernel(x, 0.0)) < 1e-15 for i, x in enumerate(xs))


def test_exchange_rate_never_exceeds_single_rate():
    rng = np.random.default_rng(7)
    xs = 10 ** rng.uniform(-3, 3, size=400)
    cosines = rng.uniform(-1, 1, size=400)
    for x, c in zip(xs, cosines):
        assert abs(dipole_kernel(x, c)) <= 1.0 + 1e-12


def test_scale_invariance():
    cfg = SystemConfig(lambda_sq=0.02, omega0=2.5, r=0.8, dipole_cos=0.2)
    unit = SystemConfig(lambda_sq=0.02, omega0=1.0, r=2.5 * 0.8, dipole_cos=0.2)
    assert abs(gamma_r(cfg) - 2.5 * gamma_r(unit)) < 1e-15


@pytest.mark.parametrize("x", [0.0, 0.1, 1.0, math.pi, 10.0, 200.0])
@pytest.mark.parametrize("dipole_cos", [0.0, 0.6, 1.0])
def test_direction_quadrature_matches_bessel_form(x, dipole_cos):
    assert abs(angular_kernel_quadrature(x, dipole_cos) - dipole_kernel(x, dipole_cos)) < 1e-9


@pytest.mark.parametrize("x", [0.1, 1.0, math.pi, 10.0])
@pytest.mark.parametrize("dipole_cos", [0.0, 1.0])
def test_beta_on_shell_reproduces_gamma_r(x, dipole_cos):
    cfg = SystemConfig(r=x, dipole_cos=dipole_cos)
    beta = beta_quadrature(cfg, cfg.omega0)
    assert abs(beta.imag - gamma_r(cfg)) <= 1e-6 * abs(gamma_r(cfg))


def test_beta_orientation_difference():
    x = math.pi / 2
    j2 = (3 / x ** 3 - 1 / x) * math.sin(x) - 3 * math.cos(x) / x ** 2
    transverse = beta_quadrature(SystemConfig(r=x, dipole_cos=0.0), 1.0)
    axial = beta_quadrature(SystemConfig(r=x, dipole_cos=1.0), 1.0)
    g0 = gamma0(SystemConfig())
    assert abs((transverse.imag - axial.imag) - g0 * (-1.5) * j2) < 1e-10


def test_beta_on_shell_vanishes_at_low_energy():
    beta = beta_quadrature(SystemConfig(r=1.0), 1e-6)
    assert abs(beta.imag) < 1e-8


def test_beta_rejects_bad_arguments():
    with pytest.raises(DomainError):
        beta_quadrature(SystemConfig(r=1.0), 0.0)
    with pytest.raises(DomainError):
        beta_quadrature(SystemConfig(r=0.0), 1.0)


def test_sigma_is_cutoff_stable():
    coarse = sigma_shift(SystemConfig(r=1.0, cutoff_eps=1e-3))
    fine = sigma_shift(SystemConfig(r=1.0, cutoff_eps=1e-4))
    g0 = gamma0(SystemConfig())
    assert abs(coarse - fine) / g0 < 1e-2


def test_sigma_far_field_oscillation():
    x = 100.0
    sigma = sigma_shift(SystemConfig(r=x))
    g0 = gamma0(SystemConfig())
    assert abs(sigma / g0 - 1.5 * math.cos(x) / x) < 2e-3


def test_sigma_decays_with_separation():
    g0 = gamma0(SystemConfig())
    assert abs(sigma_shift(SystemConfig(r=1e3))) / g0 < 0.01


def test_compute_rates_bundle():
    rates = compute_rates(SystemConfig(r=1.0))
    assert rates.valid_r_flag
    assert rates.gamma0 > abs(rates.gamma_r)
    assert rates.superradiant + rates.subradiant == pytest.approx(2 * rates.gamma0)
    assert rates.sigma == sigma_shift(SystemConfig(r=1.0))


def test_compute_rates_without_shift_or_separation():
    assert compute_rates(SystemConfig(r=2.0), include_shift=False).sigma == 0.0
    collapsed = compute_rates(SystemConfig(r=0.0))
    assert collapsed.sigma == 0.0
    assert collapsed.gamma_r == collapsed.gamma0


@pytest.mark.parametrize("field,value", [
    ("lambda_sq", 0.0),
    ("omega0", -1.0),
    ("r", -0.1),
    ("dipole_cos", 1.5),
    ("cutoff_eps", 0.0),
    ("cutoff_eps", 0.2),
])
def test_invalid_config_rejected(field, value):
    with pytest.raises(DomainError):
        SystemConfig(**{field: value})


def test_validity_warnings():
    assert SystemConfig().validity_warnings(t_max=1e4) == []
    warnings = SystemConfig(lambda_sq=0.2, r=50.0).validity_warnings(t_max=10.0)
    assert len(warnings) == 2
    assert any("weak coupling" in w for w in warnings)
    assert any("rotating wave" in w for w in warnings)


def test_rate_set_requires_positive_gamma0():
    with pytest.raises(DomainError):
        RateSet(gamma0=0.0, gamma_r=0.0)
