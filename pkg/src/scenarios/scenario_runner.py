#!/usr/bin/env python3
"""
Scenario Runner for Qubit Pair Dynamics
---------------------------------------

Simulates one (r, p) sweep point at a time:
- builds the initial state of the configured scenario
- propagates it over the time grid in closed-form or quadrature mode
- optionally builds the Born-Markov comparison trajectory
- scans both concurrence series for sudden death and revival
"""

import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from dynamics.density_dynamics import (
    POSITIVITY_TOLERANCE,
    Trajectory,
    TwoQubitState,
    bell_closed_form,
    make_bell,
    make_class_a,
    make_product_superposition,
    propagate,
)
from dynamics.entanglement import (
    DeathRevivalEvents,
    build_trajectory,
    concurrence_witness,
    markov_class_a_state,
    scan_events,
)
from numerics.errors import ConfigError
from physics.evolution_functions import EvolutionMode, evolution_functions
from physics.system_config import RateSet, SystemConfig, compute_rates
from reporting.run_logger import RunLogger, SweepPointReport, get_logger

from .run_config import RunConfig

logger = logging.getLogger(__name__)

# Event times are refined to this fraction of 1/Γ₀
EVENT_TOLERANCE = 1e-3


@dataclass
class PointResult:
    """Simulated trajectory and events of one sweep point."""
    scenario: str
    r: float
    p: float
    physics: SystemConfig
    rates: RateSet
    trajectory: Trajectory
    time_scale: float
    events: DeathRevivalEvents
    markov_events: Optional[DeathRevivalEvents] = None
    warnings: List[str] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    def display_time(self, t: Optional[float]) -> Optional[float]:
        """Absolute time converted to the configured time units."""
        return None if t is None else t / self.time_scale

    @property
    def min_concurrence(self) -> float:
        return float(np.min(self.trajectory.observables["concurrence"]))

    @property
    def final_vacuum_pop(self) -> float:
        return self.trajectory.states[-1].population(0)


def initial_state(scenario: str, p: float) -> TwoQubitState:
    if scenario == "class_a":
        return make_class_a(p)
    if scenario == "bell_plus":
        return make_bell("+")
    if scenario == "bell_minus":
        return make_bell("-")
    if scenario == "product_superposition":
        return make_product_superposition(p)
    raise ConfigError("scenario.name", "unknown scenario", scenario)


def needs_mu(state: TwoQubitState) -> bool:
    """μ₁,₂ only act on initial |11⟩⟨01| and |11⟩⟨10| coherences."""
    return abs(state[3, 1]) > 0 or abs(state[3, 2]) > 0


def markov_state_fn(scenario: str, p: float, rates: RateSet,
                    omega0: float) -> Callable[[float], TwoQubitState]:
    """Born-Markov state as a function of absolute time."""
    if scenario == "class_a":
        return lambda t: markov_class_a_state(p, rates, omega0, t)
    if scenario in ("bell_plus", "bell_minus"):
        sign = "+" if scenario == "bell_plus" else "-"
        return lambda t: bell_closed_form(sign, rates, t)
    raise ConfigError("scenario.compare_markov", f"no Born-Markov comparison for {scenario}")


def run_point(config: RunConfig, r: float, p: float) -> PointResult:
    """Simulate one sweep point. Raises SimulationError subclasses on failure."""
    started = time.perf_counter()
    physics = config.physics.with_separation(r)
    rates = compute_rates(physics)
    times = config.time_grid(rates)
    state0 = initial_state(config.scenario, p)
    include_mu = config.mode is EvolutionMode.QUADRATURE and needs_mu(state0)
    tolerance = POSITIVITY_TOLERANCE[config.mode]

    def exact_state(t: float) -> TwoQubitState:
        ev = evolution_functions(physics, rates, t, config.mode, include_mu)
        return propagate(state0, ev)

    states = [exact_state(t).validate(tolerance) for t in times]
    logger.debug("propagated %d states at r=%g p=%g", len(states), r, p)

    markov_fn = None
    markov_states = None
    if config.compare_markov:
        markov_fn = markov_state_fn(config.scenario, p, rates, physics.omega0)
        markov_states = [markov_fn(t) for t in times]

    trajectory = build_trajectory(times, states, markov_states)

    # bisection in quadrature mode would re-run the mode integrals per step
    witness = None
    if config.mode is EvolutionMode.CLOSED_FORM:
        witness = lambda t: concurrence_witness(exact_state(t))
    event_tolerance = EVENT_TOLERANCE / rates.gamma0
    events = scan_events(trajectory, witness, time_tolerance=event_tolerance)
    markov_events = None
    if markov_fn is not None:
        markov_events = scan_events(trajectory, lambda t: concurrence_witness(markov_fn(t)),
                                    series="witness_markov", time_tolerance=event_tolerance)

    t_max_absolute = float(times[-1])
    return PointResult(
        scenario=config.scenario,
        r=r,
        p=p,
        physics=physics,
        rates=rates,
        trajectory=trajectory,
        time_scale=config.time_scale(rates),
        events=events,
        markov_events=markov_events,
        warnings=physics.validity_warnings(t_max_absolute),
        elapsed_seconds=time.perf_counter() - started,
    )


def point_report(result: PointResult, output_path: Optional[str] = None) -> SweepPointReport:
    markov = result.markov_events
    return SweepPointReport(
        scenario=result.scenario,
        r=result.r,
        p=result.p if result.scenario in ("class_a", "product_superposition") else None,
        gamma0=result.rates.gamma0,
        gamma_r=result.rates.gamma_r,
        sigma=result.rates.sigma,
        death_t1=result.display_time(result.events.first_death),
        revival_t1=result.display_time(result.events.first_revival),
        min_concurrence=result.min_concurrence,
        elapsed_seconds=result.elapsed_seconds,
        output_path=output_path,
        markov_death_t1=result.display_time(markov.first_death) if markov else None,
        markov_revival_t1=result.display_time(markov.first_revival) if markov else None,
        warnings=list(result.warnings),
    )


class SweepRunner:
    """Runs every sweep point of a RunConfig in a worker pool."""

    def __init__(self, config: RunConfig, run_logger: Optional[RunLogger] = None):
        self.config = config
        self.logger = run_logger or get_logger()

    def points(self) -> List[Tuple[float, float]]:
        return self.config.sweep_points()

    def run(self) -> List[PointResult]:
        return list(self.iter_results())

    def iter_results(self):
        """Yield results in sweep order regardless of completion order."""
        points = self.points()
        self.logger.log_info(f"Running {len(points)} sweep point(s) with {self.config.jobs} worker(s)")
        if self.config.jobs == 1 or len(points) == 1:
            for r, p in points:
                yield run_point(self.config, r, p)
            return
        with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
            yield from pool.map(lambda point: run_point(self.config, *point), points)


def rate_table(config: RunConfig) -> List[Tuple[float, RateSet, List[str]]]:
    """Rates and validity warnings for each separation in the sweep."""
    rows = []
    separations = config.sweep_r if config.sweep_r is not None else (config.physics.r,)
    for r in separations:
        physics = config.physics.with_separation(r)
        rates = compute_rates(physics)
        t_max = config.t_max * config.time_scale(rates)
        rows.append((r, rates, physics.validity_warnings(t_max)))
    return rows
