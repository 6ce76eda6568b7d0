#!/usr/bin/env python3
"""
Run Configuration
-----------------

Reads INI run files into a RunConfig:

    [scenario]  name, p, compare_markov
    [physics]   lambda_sq, omega0, r, dipole_cos, cutoff_eps
    [time]      t_max, time_units (gamma0 | absolute), n_steps
    [sweep]     r, p (comma-separated lists)
    [output]    prefix, plot_script

Every key can be overridden from the environment as QPD_<SECTION>_<KEY>,
e.g. QPD_PHYSICS_R=20. Command-line flags are applied last.
"""

import configparser
import itertools
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from numerics.errors import ConfigError, DomainError
from physics.evolution_functions import EvolutionMode
from physics.system_config import RateSet, SystemConfig

ENV_PREFIX = "QPD_"

SCENARIOS = ("class_a", "bell_plus", "bell_minus", "product_superposition")
TIME_UNITS = ("gamma0", "absolute")
MODE_NAMES = {
    "closed": EvolutionMode.CLOSED_FORM,
    "closed_form": EvolutionMode.CLOSED_FORM,
    "quadrature": EvolutionMode.QUADRATURE,
}

SECTIONS: Dict[str, Tuple[str, ...]] = {
    "scenario": ("name", "p", "compare_markov", "mode"),
    "physics": ("lambda_sq", "omega0", "r", "dipole_cos", "cutoff_eps"),
    "time": ("t_max", "time_units", "n_steps"),
    "sweep": ("r", "p"),
    "output": ("prefix", "plot_script"),
}

_TRUE = ("1", "true", "yes", "on")
_FALSE = ("0", "false", "no", "off")


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs to run."""
    scenario: str = "class_a"
    p: float = 0.8
    physics: SystemConfig = field(default_factory=SystemConfig)
    mode: EvolutionMode = EvolutionMode.CLOSED_FORM
    compare_markov: bool = False
    t_max: float = 10.0
    time_units: str = "gamma0"
    n_steps: int = 2000
    sweep_r: Optional[Tuple[float, ...]] = None
    sweep_p: Optional[Tuple[float, ...]] = None
    output_prefix: str = "qpd"
    plot_script: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError("scenario.name", f"must be one of {', '.join(SCENARIOS)}", self.scenario)
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("scenario.p", "must lie in [0, 1]", str(self.p))
        if self.time_units not in TIME_UNITS:
            raise ConfigError("time.time_units", f"must be one of {', '.join(TIME_UNITS)}", self.time_units)
        if self.compare_markov and self.scenario == "product_superposition":
            raise ConfigError("scenario.compare_markov", "no Born-Markov comparison exists for product_superposition")
        if not self.t_max > 0:
            raise ConfigError("time.t_max", "must be positive", str(self.t_max))
        if self.n_steps < 2:
            raise ConfigError("time.n_steps", "must be at least 2", str(self.n_steps))
        if self.jobs < 1:
            raise ConfigError("jobs", "must be at least 1", str(self.jobs))
        for key, values in (("sweep.r", self.sweep_r), ("sweep.p", self.sweep_p)):
            if values is not None and len(values) == 0:
                raise ConfigError(key, "sweep list is empty")
        if self.sweep_p is not None and any(not 0.0 <= p <= 1.0 for p in self.sweep_p):
            raise ConfigError("sweep.p", "values must lie in [0, 1]", ",".join(map(str, self.sweep_p)))
        if self.sweep_r is not None and any(not r >= 0 for r in self.sweep_r):
            raise ConfigError("sweep.r", "values must be non-negative", ",".join(map(str, self.sweep_r)))

    def time_scale(self, rates: RateSet) -> float:
        """Factor converting configured time units to absolute time."""
        return 1.0 / rates.gamma0 if self.time_units == "gamma0" else 1.0

    def time_grid(self, rates: RateSet) -> np.ndarray:
        """n_steps absolute times from 0 to t_max."""
        return np.linspace(0.0, self.t_max * self.time_scale(rates), self.n_steps)

    def sweep_points(self) -> List[Tuple[float, float]]:
        """(r, p) pairs in sweep order: r outer, p inner."""
        separations = self.sweep_r if self.sweep_r is not None else (self.physics.r,)
        weights = self.sweep_p if self.sweep_p is not None else (self.p,)
        return list(itertools.product(separations, weights))

    def with_overrides(self, mode: Optional[str] = None, prefix: Optional[str] = None,
                       jobs: Optional[int] = None) -> "RunConfig":
        """Apply command-line flags on top of file and environment values."""
        changes = {}
        if mode is not None:
            changes["mode"] = parse_mode(mode, "--mode")
        if prefix is not None:
            changes["output_prefix"] = prefix
        if jobs is not None:
            changes["jobs"] = jobs
        return replace(self, **changes)


def parse_mode(value: str, key: str = "scenario.mode") -> EvolutionMode:
    try:
        return MODE_NAMES[value.strip().lower()]
    except KeyError:
        raise ConfigError(key, "must be 'closed' or 'quadrature'", value) from None


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(key, "not a number", raw) from None


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(key, "not an integer", raw) from None


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigError(key, "not a boolean", raw)


def _parse_list(key: str, raw: str) -> Tuple[float, ...]:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise ConfigError(key, "sweep list is empty")
    return tuple(_parse_float(key, item) for item in items)


def _collect(parser: configparser.ConfigParser, environ: Mapping[str, str]) -> Dict[str, str]:
    """Flatten file values and QPD_<SECTION>_<KEY> overrides into 'section.key' entries."""
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(section, "unknown section")
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            values[f"{section}.{key}"] = raw

    for section, keys in SECTIONS.items():
        for key in keys:
            env_name = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
            if env_name in environ:
                values[f"{section}.{key}"] = environ[env_name]
    return values


def load_run_config(path: Optional[str] = None,
                    environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Build a RunConfig from an optional INI file plus environment overrides."""
    environ = os.environ if environ is None else environ
    parser = configparser.ConfigParser()
    if path is not None:
        if not Path(path).is_file():
            raise ConfigError("--config", "file not found", path)
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError("--config", f"unreadable run file: {exc}", path) from exc

    values = _collect(parser, environ)
    defaults = RunConfig()
    physics_defaults = defaults.physics

    physics_kwargs = {}
    for param in fields(SystemConfig):
        key = f"physics.{param.name}"
        physics_kwargs[param.name] = (_parse_float(key, values[key]) if key in values
                                           else getattr(physics_defaults, param.name))
    try:
        physics = SystemConfig(**physics_kwargs)
    except DomainError as exc:
        raise ConfigError("physics", str(exc)) from exc

    jobs_raw = environ.get(f"{ENV_PREFIX}JOBS")
    return RunConfig(
        scenario=values.get("scenario.name", defaults.scenario).strip(),
        p=_parse_float("scenario.p", values["scenario.p"]) if "scenario.p" in values else defaults.p,
        physics=physics,
        mode=parse_mode(values["scenario.mode"]) if "scenario.mode" in values else defaults.mode,
        compare_markov=(_parse_bool("scenario.compare_markov", values["scenario.compare_markov"])
                        if "scenario.compare_markov" in values else defaults.compare_markov),
        t_max=_parse_float("time.t_max", values["time.t_max"]) if "time.t_max" in values else defaults.t_max,
        time_units=values.get("time.time_units", defaults.time_units).strip().lower(),
        n_steps=_parse_int("time.n_steps", values["time.n_steps"]) if "time.n_steps" in values else defaults.n_steps,
        sweep_r=_parse_list("sweep.r", values["sweep.r"]) if "sweep.r" in values else None,
        sweep_p=_parse_list("sweep.p", values["sweep.p"]) if "sweep.p" in values else None,
        output_prefix=values.get("output.prefix", defaults.output_prefix).strip(),
        plot_script=(_parse_bool("output.plot_script", values["output.plot_script"])
                     if "output.plot_script" in values else defaults.plot_script),
        jobs=_parse_int(f"{ENV_PREFIX}JOBS", jobs_raw) if jobs_raw else defaults.jobs,
    )
