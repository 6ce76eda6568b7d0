#!/usr/bin/env python3
"""
Entanglement Measures
---------------------

Concurrence (Wootters and the closed form for X-shaped states), purity,
sudden-death / revival scanning along trajectories, and the Born-Markov
comparison states for the |00⟩/|11⟩ superposition.
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

sys.path.append(str(Path(__file__).parent.parent))

from numerics.errors import NumericalFailure, ShapeError
from physics.evolution_functions import decay_window, kappa_closed, u_fn
from physics.system_config import RateSet

from .density_dynamics import (
    EXCITED,
    ONE_TWO,
    TWO_ONE,
    VACUUM,
    Trajectory,
    TwoQubitState,
    make_class_a,
)

logger = logging.getLogger(__name__)

X_PATTERN_TOLERANCE = 1e-10
EIGENVALUE_FLOOR = -1e-12
DEFAULT_REVIVAL_FLOOR = 1e-6

# Entries that must vanish for the X shape
_OFF_X = ((0, 1), (0, 2), (1, 3), (2, 3))

_YY = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)


class ConcurrenceMethod(Enum):
    WOOTTERS = "wootters"
    X_STATE = "x_state"


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    purity: float
    min_eigenvalue: float
    method: ConcurrenceMethod


@dataclass(frozen=True)
class DeathRevivalEvents:
    """
    Zero crossings of the concurrence, in trajectory time units.

    onset_times holds upward crossings before any death (entanglement created
    from a separable start). subfloor_revival_times holds upward crossings
    after a death whose concurrence stays below the revival floor.
    """
    death_times: List[float] = field(default_factory=list)
    revival_times: List[float] = field(default_factory=list)
    subfloor_revival_times: List[float] = field(default_factory=list)
    onset_times: List[float] = field(default_factory=list)
    open_ended: bool = False

    @property
    def first_death(self) -> Optional[float]:
        return self.death_times[0] if self.death_times else None

    @property
    def first_revival(self) -> Optional[float]:
        return self.revival_times[0] if self.revival_times else None


# --- Concurrence ---

def is_x_state(rho: TwoQubitState, tolerance: float = X_PATTERN_TOLERANCE) -> bool:
    return all(abs(rho[i, j]) <= tolerance for i, j in _OFF_X)


def _wootters_witness(rho: TwoQubitState) -> float:
    matrix = rho.matrix
    try:
        weights, vectors = np.linalg.eigh(matrix)
        root = (vectors * np.sqrt(np.clip(weights, 0.0, None))) @ vectors.conj().T
        flipped = _YY @ matrix.conj() @ _YY
        product = root @ flipped @ root
        eigenvalues = np.linalg.eigvalsh(0.5 * (product + product.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigen-solve failed in concurrence: {exc}") from exc

    if eigenvalues[0] < EIGENVALUE_FLOOR:
        logger.debug("clamping eigenvalue %.3e of the spin-flipped product", eigenvalues[0])
    lambdas = np.sqrt(np.clip(eigenvalues, 0.0, None))[::-1]
    return float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])


def _x_witness(rho: TwoQubitState) -> float:
    populations = np.clip(np.diag(rho.matrix).real, 0.0, None)
    outer = abs(rho[VACUUM, EXCITED]) - math.sqrt(populations[ONE_TWO] * populations[TWO_ONE])
    inner = abs(rho[ONE_TWO, TWO_ONE]) - math.sqrt(populations[VACUUM] * populations[EXCITED])
    return 2.0 * max(outer, inner)


def concurrence(rho: TwoQubitState) -> float:
    """Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄)."""
    return max(0.0, _wootters_witness(rho))


def concurrence_x(rho: TwoQubitState) -> float:
    if not is_x_state(rho):
        raise ShapeError("concurrence_x needs an X-shaped state")
    return max(0.0, _x_witness(rho))


def concurrence_witness(rho: TwoQubitState) -> float:
    """Signed quantity whose positive part is the concurrence."""
    return _x_witness(rho) if is_x_state(rho) else _wootters_witness(rho)


def purity(rho: TwoQubitState) -> float:
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def entanglement_report(rho: TwoQubitState) -> EntanglementReport:
    if is_x_state(rho):
        value, method = concurrence_x(rho), ConcurrenceMethod.X_STATE
    else:
        value, method = concurrence(rho), ConcurrenceMethod.WOOTTERS
    return EntanglementReport(
        concurrence=value,
        purity=purity(rho),
        min_eigenvalue=rho.min_eigenvalue(),
        method=method,
    )


# --- Born-Markov comparison ---

def markov_rho_pm(p: float, rates: RateSet, t: float) -> Tuple[float, float]:
    """
    Populations of |+⟩ and |−⟩ under Born-Markov dynamics from √(1−p)|00⟩ + √p|11⟩.

    ρ₊₊ = p(Γ₀+Γ_r)e^{-2Γ₀t}e^{-2Γ_rt}(1 − e^{-2(Γ₀−Γ_r)t})/(Γ₀−Γ_r)
    ρ₋₋ = p(Γ₀−Γ_r)e^{-2Γ₀t}e^{+2Γ_rt}(1 − e^{-2(Γ₀+Γ_r)t})/(Γ₀+Γ_r)
    """
    g0, gr = rates.gamma0, rates.gamma_r
    plus = p * rates.superradiant * math.exp(-2.0 * (g0 + gr) * t) * decay_window(rates.subradiant, t)
    minus = p * rates.subradiant * math.exp(-2.0 * (g0 - gr) * t) * decay_window(rates.superradiant, t)
    return plus, minus


def nonmarkov_rho_pm(p: float, rates: RateSet, t: float) -> Tuple[float, float]:
    """Populations of |±⟩ from the resummed dynamics: p(κ₁ ± κ₂)."""
    kappa1, kappa2 = kappa_closed(rates, t)
    return p * (kappa1 + kappa2), p * (kappa1 - kappa2)


def markov_class_a_state(p: float, rates: RateSet, omega0: float, t: float,
                         tolerance: float = 1e-9) -> TwoQubitState:
    """Born-Markov Class-A state sharing the |I⟩⟨I| and |I⟩⟨O| entries of the exact map."""
    start = make_class_a(p)
    plus, minus = markov_rho_pm(p, rates, t)
    rho = np.zeros((4, 4), dtype=complex)
    rho[EXCITED, EXCITED] = p * math.exp(-4.0 * rates.gamma0 * t)
    rho[EXCITED, VACUUM] = start[EXCITED, VACUUM] * u_fn(rates, omega0, t)
    rho[VACUUM, EXCITED] = rho[EXCITED, VACUUM].conjugate()
    rho[ONE_TWO, ONE_TWO] = rho[TWO_ONE, TWO_ONE] = 0.5 * (plus + minus)
    rho[ONE_TWO, TWO_ONE] = rho[TWO_ONE, ONE_TWO] = 0.5 * (plus - minus)
    rho[VACUUM, VACUUM] = 1.0 - rho[EXCITED, EXCITED].real - (plus + minus)
    state = TwoQubitState(rho, {**start.labels, "dynamics": "markov"})
    return state.validate(tolerance)


# --- Trajectories and events ---

def build_trajectory(times: Sequence[float], states: Sequence[TwoQubitState],
                     markov_states: Optional[Sequence[TwoQubitState]] = None) -> Trajectory:
    """Attach concurrence, purity and spectrum observables to a list of states."""
    reports = [entanglement_report(state) for state in states]
    observables = {
        "concurrence": np.array([r.concurrence for r in reports]),
        "witness": np.array([concurrence_witness(state) for state in states]),
        "purity": np.array([r.purity for r in reports]),
        "min_eig": np.array([r.min_eigenvalue for r in reports]),
    }
    if markov_states is not None:
        observables["concurrence_markov"] = np.array([entanglement_report(s).concurrence for s in markov_states])
        observables["witness_markov"] = np.array([concurrence_witness(s) for s in markov_states])
    return Trajectory(np.asarray(times, dtype=float), tuple(states), observables)


def _refine(witness: Optional[Callable[[float], float]], t_left: float, t_right: float,
            w_left: float, w_right: float, time_tolerance: float) -> float:
    if witness is None:
        # linear interpolation of the sampled witness
        return t_left + (t_right - t_left) * w_left / (w_left - w_right)
    try:
        return bisect(witness, t_left, t_right, xtol=time_tolerance)
    except ValueError:
        # sampled and re-evaluated signs disagree at the bracket ends
        return t_left + (t_right - t_left) * w_left / (w_left - w_right)


def scan_events(traj: Trajectory, witness: Optional[Callable[[float], float]] = None,
                series: str = "witness", time_tolerance: float = 1e-3,
                revival_floor: float = DEFAULT_REVIVAL_FLOOR) -> DeathRevivalEvents:
    """
    Deaths and revivals of the concurrence along a trajectory.

    Sign changes of the sampled witness are bracketed on the grid and, when a
    witness callable is supplied, refined by bisection to time_tolerance.
    Events alternate death, revival, death, ... An upward crossing before the
    first death is an onset. After a death, an upward crossing whose
    concurrence never rises above revival_floor before the next downward
    crossing is a sub-floor revival and the qubits stay counted as dead.
    """
    values = traj.observables[series]
    times = traj.times
    entangled = values > 0
    deaths, revivals, subfloor, onsets = [], [], [], []

    index = 0
    while index < len(times) - 1:
        now, after = entangled[index], entangled[index + 1]
        if now == after:
            index += 1
            continue
        crossing = _refine(witness, times[index], times[index + 1],
                           values[index], values[index + 1], time_tolerance)
        if now:
            deaths.append(crossing)
            index += 1
            continue

        # upward crossing: find the end of this entangled stretch
        end = index + 1
        while end < len(times) and entangled[end]:
            end += 1
        peak = float(np.max(values[index + 1:end]))
        if peak <= revival_floor:
            logger.debug("upward crossing at t=%g below floor (peak %.3e)", crossing, peak)
            if deaths:
                subfloor.append(crossing)
            index = end
        elif deaths:
            revivals.append(crossing)
            index += 1
        else:
            onsets.append(crossing)
            index += 1
    open_ended = bool(deaths) and not entangled[-1]
    return DeathRevivalEvents(deaths, revivals, subfloor, onsets, open_ended)
