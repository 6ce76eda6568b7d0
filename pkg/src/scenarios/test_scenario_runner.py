#!/usr/bin/env python3
"""
Tests for sweep-point simulation
--------------------------------
"""

import math

import numpy as np
import pytest

from dynamics.density_dynamics import make_class_a
from physics.evolution_functions import EvolutionMode, kappa_quadrature
from physics.system_config import compute_rates
from scenarios.run_config import RunConfig
from scenarios.scenario_runner import (
    SweepRunner,
    initial_state,
    needs_mu,
    point_report,
    rate_table,
    run_point,
)
from reporting.run_logger import RunLogger


def config_for(**overrides) -> RunConfig:
    values = dict(n_steps=401)
    values.update(overrides)
    return RunConfig(**values)


def test_initial_states():
    assert initial_state("class_a", 0.3).labels["scenario"] == "class_a"
    assert initial_state("bell_plus", 0.3).labels["scenario"] == "bell_plus"
    assert initial_state("bell_minus", 0.3).labels["scenario"] == "bell_minus"
    assert abs(initial_state("product_superposition", 0.3)[2, 2] - 0.3) < 1e-15


def test_mu_only_for_doubly_excited_coherences():
    assert not needs_mu(make_class_a(0.5))
    assert not needs_mu(initial_state("bell_plus", 0.0))


def test_bell_minus_has_no_death():
    result = run_point(config_for(scenario="bell_minus"), 0.5, 0.0)
    assert result.events.death_times == []
    concurrence = result.trajectory.observables["concurrence"]
    expected = np.exp(-2 * result.rates.subradiant * result.trajectory.times)
    assert np.max(np.abs(concurrence - expected)) < 1e-12


def test_close_separation_compare():
    result = run_point(config_for(compare_markov=True), 0.2, 0.8)
    assert result.events.first_death is None
    assert result.markov_events.first_death is not None
    assert result.markov_events.first_revival is not None
    assert result.markov_events.first_death < result.markov_events.first_revival
    assert result.min_concurrence > 0


def test_distant_separation_compare():
    result = run_point(config_for(compare_markov=True), 20.0, 0.8)
    assert result.events.first_death is not None
    assert result.events.first_revival is None
    assert result.markov_events.first_death is not None
    assert result.markov_events.first_revival is None


def test_event_times_in_configured_units():
    result = run_point(config_for(), 1e3, 0.8)
    # Γ_r is nearly zero this far out, so the death time is close to the decoupled root
    expected = -math.log(1 - (0.8 * 0.2) ** 0.25 / math.sqrt(0.8))
    assert abs(result.display_time(result.events.first_death) - expected) < 1e-2
    assert result.time_scale == pytest.approx(1 / result.rates.gamma0)


def test_final_vacuum_population():
    result = run_point(config_for(t_max=40.0), 5.0, 0.6)
    assert result.final_vacuum_pop == pytest.approx(1.0, abs=1e-12)


def test_point_report_hides_unused_weight():
    result = run_point(config_for(scenario="bell_plus", n_steps=11), 1.0, 0.8)
    report = point_report(result, "out.csv")
    assert report.p is None
    assert report.output_path == "out.csv"
    assert report.gamma_r == result.rates.gamma_r


def test_sweep_order_is_deterministic():
    config = config_for(sweep_r=(0.2, 1.0, 20.0), sweep_p=(0.4, 0.8), n_steps=51, jobs=3)
    results = SweepRunner(config, RunLogger()).run()
    assert [(res.r, res.p) for res in results] == config.sweep_points()
    serial = SweepRunner(config_for(sweep_r=(0.2, 1.0, 20.0), sweep_p=(0.4, 0.8), n_steps=51),
                         RunLogger()).run()
    for parallel, single in zip(results, serial):
        assert np.array_equal(parallel.trajectory.observables["concurrence"],
                              single.trajectory.observables["concurrence"])


def test_rate_table_flags_short_runs():
    config = config_for(time_units="absolute", t_max=5.0, sweep_r=(math.pi, 10.0))
    rows = rate_table(config)
    assert [r for r, _, _ in rows] == [math.pi, 10.0]
    assert rows[0][1].ratio == pytest.approx(-0.151982, abs=1e-6)
    assert any("rotating wave" in w for w in rows[0][2])
    assert rows[0][1].gamma_r == compute_rates(config.physics.with_separation(math.pi)).gamma_r


def test_separable_start_reports_onset_not_revival():
    result = run_point(config_for(scenario="product_superposition", n_steps=201), 0.1, 0.5)
    assert result.events.revival_times == []
    assert result.events.death_times == []
    assert len(result.events.onset_times) <= 1
    assert result.trajectory.observables["concurrence"][-1] > 0
    report = point_report(result)
    assert report.revival_t1 is None
    assert report.death_t1 is None


def test_quadrature_mode_end_to_end():
    config = config_for(mode=EvolutionMode.QUADRATURE, n_steps=4, t_max=1.5)
    result = run_point(config, 1.0, 0.8)
    assert len(result.trajectory) == 4
    for t, state in zip(result.trajectory.times[1:], result.trajectory.states[1:]):
        kappa1, kappa2 = kappa_quadrature(result.physics, result.rates, t)
        assert abs(state[1, 1] - 0.8 * kappa1) < 1e-12
        assert abs(state[1, 2] - 0.8 * kappa2) < 1e-12
        assert abs(state.trace() - 1.0) < 1e-12
    assert result.trajectory.observables["concurrence"][0] == pytest.approx(0.8)
    assert np.all(result.trajectory.observables["min_eig"] > -1e-6)
    closed = run_point(config_for(n_steps=4, t_max=1.5), 1.0, 0.8)
    # resonance-only κ underestimates the single-excitation feed
    assert result.trajectory.states[-1][1, 1].real > closed.trajectory.states[-1][1, 1].real
