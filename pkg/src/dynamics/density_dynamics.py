#!/usr/bin/env python3
"""
Two-Qubit Density Dynamics
--------------------------

States of the qubit pair and the exact reduced evolution map.

Basis order is (|00⟩, |01⟩, |10⟩, |11⟩) ↔ (0, 1, 2, 3) and matrix[row, col]
is ⟨row|ρ|col⟩. |±⟩ = (|01⟩ ± |10⟩)/√2, |O⟩ = |00⟩, |I⟩ = |11⟩.
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Sequence, Tuple, Union

import numpy as np

sys.path.append(str(Path(__file__).parent.parent))

from numerics.errors import DomainError, InvariantViolation, ShapeError
from physics.evolution_functions import (
    EvolutionFunctions,
    EvolutionMode,
    kappa_closed,
    u_fn,
    v_pm,
)
from physics.system_config import RateSet

logger = logging.getLogger(__name__)

BASIS_LABELS = ("00", "01", "10", "11")
VACUUM, ONE_TWO, TWO_ONE, EXCITED = 0, 1, 2, 3

HERMITICITY_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
POSITIVITY_TOLERANCE = {
    EvolutionMode.CLOSED_FORM: 1e-9,
    EvolutionMode.QUADRATURE: 1e-6,
}

_ROOT_HALF = 1.0 / math.sqrt(2.0)
BELL_ROTATION = np.array([
    [1, 0, 0, 0],
    [0, _ROOT_HALF, _ROOT_HALF, 0],
    [0, _ROOT_HALF, -_ROOT_HALF, 0],
    [0, 0, 0, 1],
], dtype=complex)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A 4×4 density matrix with optional scenario labels."""
    matrix: np.ndarray
    labels: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise ShapeError(f"two-qubit state must be 4x4, got {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        return self.matrix[index]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def population(self, index: int) -> float:
        return float(self.matrix[index, index].real)

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def validate(self, tolerance: float = POSITIVITY_TOLERANCE[EvolutionMode.CLOSED_FORM],
                 check_positivity: bool = True) -> "TwoQubitState":
        """Raise InvariantViolation unless Hermitian, unit trace and (optionally) PSD."""
        if not np.all(np.isfinite(self.matrix)):
            raise InvariantViolation("state has non-finite entries")
        asymmetry = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if asymmetry > HERMITICITY_TOLERANCE:
            raise InvariantViolation(f"state is not Hermitian (deviation {asymmetry:.3e})")
        trace_error = abs(np.trace(self.matrix) - 1.0)
        if trace_error > TRACE_TOLERANCE:
            raise InvariantViolation(f"state trace deviates from 1 by {trace_error:.3e}")
        if check_positivity:
            lowest = self.min_eigenvalue()
            if lowest < -tolerance:
                raise InvariantViolation(f"state has negative eigenvalue {lowest:.3e}")
        return self

    def with_labels(self, **labels: str) -> "TwoQubitState":
        return TwoQubitState(self.matrix, {**self.labels, **labels})


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States on an ascending time grid plus per-time observables."""
    times: np.ndarray
    states: Tuple[TwoQubitState, ...]
    observables: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or len(times) < 1:
            raise ShapeError("trajectory needs a one-dimensional time grid")
        if np.any(np.diff(times) <= 0):
            raise ShapeError("trajectory times must be strictly increasing")
        if len(self.states) != len(times):
            raise ShapeError(f"{len(self.states)} states for {len(times)} times")
        for name, series in self.observables.items():
            if len(series) != len(times):
                raise ShapeError(f"observable {name} has {len(series)} values for {len(times)} times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        return len(self.times)


def _pure(amplitudes: Sequence[float], **labels: str) -> TwoQubitState:
    psi = np.asarray(amplitudes, dtype=complex)
    return TwoQubitState(np.outer(psi, psi.conj()), labels)


def _check_weight(p: float):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")


# --- Initial states ---

def make_class_a(p: float) -> TwoQubitState:
    """√(1−p)|00⟩ + √p|11⟩."""
    _check_weight(p)
    return _pure([math.sqrt(1.0 - p), 0.0, 0.0, math.sqrt(p)], scenario="class_a", p=repr(p))


def make_bell(sign: Union[str, int]) -> TwoQubitState:
    """(|01⟩ ± |10⟩)/√2."""
    if sign in ("+", 1, "plus"):
        factor, name = 1.0, "bell_plus"
    elif sign in ("-", -1, "minus"):
        factor, name = -1.0, "bell_minus"
    else:
        raise DomainError(f"Bell sign must be '+' or '-', got {sign!r}")
    return _pure([0.0, _ROOT_HALF, factor * _ROOT_HALF, 0.0], scenario=name)


def make_product_superposition(p: float) -> TwoQubitState:
    """(√p|1⟩ + √(1−p)|0⟩) ⊗ |0⟩."""
    _check_weight(p)
    return _pure([math.sqrt(1.0 - p), 0.0, math.sqrt(p), 0.0], scenario="product_superposition", p=repr(p))


# --- Evolution map ---

def propagate(rho0: TwoQubitState, ev: EvolutionFunctions) -> TwoQubitState:
    """
    Apply the reduced evolution map at the time of ev.

    Only entries the map feeds are built; everything else evolves to zero.
    The upper triangle is the conjugate of the lower one and the vacuum
    population closes the trace.
    """
    r = rho0.matrix
    u, vp, vm = ev.u, ev.v_plus, ev.v_minus
    vp2, vm2 = abs(vp) ** 2, abs(vm) ** 2
    cross = vp * vm.conjugate()
    out = np.zeros((4, 4), dtype=complex)

    out[3, 3] = r[3, 3] * abs(u) ** 2
    out[3, 1] = r[3, 1] * u * vp.conjugate() + r[3, 2] * u * vm.conjugate()
    out[3, 2] = r[3, 2] * u * vp.conjugate() + r[3, 1] * u * vm.conjugate()
    out[3, 0] = r[3, 0] * u
    out[1, 0] = r[1, 0] * vp + r[2, 0] * vm + r[3, 1] * ev.mu1 + r[3, 2] * ev.mu2
    out[2, 0] = r[2, 0] * vp + r[1, 0] * vm + r[3, 1] * ev.mu2.conjugate() + r[3, 2] * ev.mu1.conjugate()
    out[1, 1] = (r[1, 1] * vp2 + r[1, 2] * cross + r[2, 2] * vm2 + r[2, 1] * cross.conjugate()
                 + r[3, 3] * ev.kappa1)
    out[2, 2] = (r[2, 2] * vp2 + r[2, 1] * cross + r[1, 1] * vm2 + r[1, 2] * cross.conjugate()
                 + r[3, 3] * ev.kappa1)
    out[1, 2] = (r[1, 2] * vp2 + r[2, 1] * vm2 + r[1, 1] * cross + r[2, 2] * cross.conjugate()
                 + r[3, 3] * ev.kappa2)

    for row, col in ((3, 1), (3, 2), (3, 0), (1, 0), (2, 0), (1, 2)):
        out[col, row] = out[row, col].conjugate()
    for index in (1, 2, 3):
        out[index, index] = out[index, index].real
    out[0, 0] = 1.0 - (out[1, 1] + out[2, 2] + out[3, 3]).real

    state = TwoQubitState(out, rho0.labels)
    return state.validate(check_positivity=False)


# --- Closed-form trajectories ---

def class_a_closed_form(p: float, rates: RateSet, omega0: float, t: float) -> TwoQubitState:
    """
    Class-A state at time t from the closed κ forms.

    The |I⟩⟨I| weight is p·e^{-4Γ₀t}; the vacuum weight comes from trace closure.
    """
    _check_weight(p)
    kappa1, kappa2 = kappa_closed(rates, t)
    rho = np.zeros((4, 4), dtype=complex)
    rho[EXCITED, EXCITED] = p * math.exp(-4.0 * rates.gamma0 * t)
    rho[EXCITED, VACUUM] = math.sqrt(p * (1.0 - p)) * u_fn(rates, omega0, t)
    rho[VACUUM, EXCITED] = rho[EXCITED, VACUUM].conjugate()
    rho[ONE_TWO, ONE_TWO] = rho[TWO_ONE, TWO_ONE] = p * kappa1
    rho[ONE_TWO, TWO_ONE] = rho[TWO_ONE, ONE_TWO] = p * kappa2
    rho[VACUUM, VACUUM] = 1.0 - rho[EXCITED, EXCITED].real - 2.0 * p * kappa1
    return TwoQubitState(rho, {"scenario": "class_a", "p": repr(p)})


def bell_closed_form(sign: Union[str, int], rates: RateSet, t: float) -> TwoQubitState:
    """e^{-2(Γ₀±Γ_r)t}|±⟩⟨±| + (1 − e^{-2(Γ₀±Γ_r)t})|00⟩⟨00|."""
    bell = make_bell(sign)
    rate = rates.superradiant if bell.labels["scenario"] == "bell_plus" else rates.subradiant
    survival = math.exp(-2.0 * rate * t)
    rho = survival * bell.matrix
    rho[VACUUM, VACUUM] += 1.0 - survival
    return TwoQubitState(rho, bell.labels)


def decoherence_reduced_states(p: float, rates: RateSet, omega0: float,
                               t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Single-qubit states when only the first qubit starts in a superposition.

    The first qubit keeps coherence √(p(1−p))·v₊ and excitation p|v₊|²;
    the second picks up √(p(1−p))·v₋ and p|v₋|². The coherence sits at
    ⟨1|ρ|0⟩, where the e^{-iω₀t} carrier of v₊ belongs; writing v₊ on
    |0⟩⟨1| instead is the same state in the conjugate phase convention.
    """
    _check_weight(p)
    v_plus, v_minus = v_pm(rates, omega0, t)
    amplitude = math.sqrt(p * (1.0 - p))
    reduced = []
    for v in (v_plus, v_minus):
        excited = p * abs(v) ** 2
        coherence = amplitude * v
        reduced.append(np.array([[1.0 - excited, coherence.conjugate()],
                                 [coherence, excited]], dtype=complex))
    return reduced[0], reduced[1]


# --- Reductions and basis changes ---

def partial_trace(rho: TwoQubitState, which: str = "first") -> np.ndarray:
    """Reduced 2×2 state of the named qubit."""
    tensor = rho.matrix.reshape(2, 2, 2, 2)
    if which == "first":
        return np.einsum("ijkj->ik", tensor)
    if which == "second":
        return np.einsum("ijil->jl", tensor)
    raise DomainError(f"which must be 'first' or 'second', got {which!r}")


def to_bell_basis(rho: TwoQubitState) -> np.ndarray:
    """Matrix in the ordered basis (|00⟩, |+⟩, |−⟩, |11⟩)."""
    return BELL_ROTATION @ rho.matrix @ BELL_ROTATION.conj().T
