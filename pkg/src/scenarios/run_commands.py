#!/usr/bin/env python3
"""
Run Commands for Qubit Pair Dynamics
------------------------------------

Handlers behind the command-line subcommands. Each returns the process exit
status: 0 on success, 2 for configuration or domain errors, 3 when a
numerical failure cut the run short.
"""

import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

sys.path.append(str(Path(__file__).parent.parent))

from numerics.errors import (
    ConfigError,
    DomainError,
    InvariantViolation,
    NumericalFailure,
    QuadratureFailure,
)
from reporting.run_logger import RunLogger, RunSummary, get_logger

from .run_config import RunConfig, load_run_config
from .scenario_runner import PointResult, SweepRunner, point_report, rate_table
from .trajectory_writer import (
    SummaryWriter,
    clear_failure_marker,
    summary_path,
    trajectory_path,
    write_failure_marker,
    write_plot_script,
    write_trajectory_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

NUMERICAL_ERRORS = (QuadratureFailure, InvariantViolation, NumericalFailure)
CONFIG_ERRORS = (ConfigError, DomainError)


def _format_event(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


class RunCommands:
    """Loads the run configuration and executes one subcommand."""

    def __init__(self, config_path: Optional[str] = None, mode: Optional[str] = None,
                 prefix: Optional[str] = None, jobs: Optional[int] = None,
                 run_logger: Optional[RunLogger] = None):
        self.config_path = config_path
        self.overrides = dict(mode=mode, prefix=prefix, jobs=jobs)
        self.logger = run_logger or get_logger()

    def load(self) -> RunConfig:
        return load_run_config(self.config_path).with_overrides(**self.overrides)

    # --- rates ---

    def show_rates(self) -> int:
        """Print Γ₀, Γ_r, Γ_r/Γ₀ and σ for every configured separation."""
        try:
            config = self.load()
            rows = rate_table(config)
        except CONFIG_ERRORS as e:
            print(f"Configuration error: {e}")
            return EXIT_CONFIG
        except NUMERICAL_ERRORS as e:
            print(f"Numerical failure: {e}")
            return EXIT_NUMERICAL

        print(f"{'r':>12} {'gamma0':>14} {'gamma_r':>14} {'gamma_r/gamma0':>15} {'sigma':>14}")
        for r, rates, warnings in rows:
            print(f"{r:>12.6g} {rates.gamma0:>14.6e} {rates.gamma_r:>14.6e} "
                  f"{rates.ratio:>15.6f} {rates.sigma:>14.6e}")
            for warning in warnings:
                print(f"  warning: {warning}")
        return EXIT_OK

    # --- evolve / sweep / compare-markov ---

    def evolve(self) -> int:
        """Run the configured scenario at the single configured point."""
        return self._run("evolve", lambda config: replace(config, sweep_r=None, sweep_p=None))

    def sweep(self) -> int:
        return self._run("sweep", lambda config: config)

    def compare_markov(self) -> int:
        """Sweep with the Born-Markov comparison switched on."""
        return self._run("compare-markov", lambda config: replace(config, compare_markov=True))

    def _run(self, command: str, adjust) -> int:
        started = datetime.now(timezone.utc)
        try:
            config = adjust(self.load())
        except CONFIG_ERRORS as e:
            print(f"Configuration error: {e}")
            return EXIT_CONFIG

        self.logger.log_system_start(command)
        points = config.sweep_points()
        written: List[Path] = []
        results: List[PointResult] = []
        summary_file = summary_path(config.output_prefix)
        failure: Optional[str] = None
        status = EXIT_OK

        try:
            with SummaryWriter(summary_file) as summary:
                for result in SweepRunner(config, self.logger).iter_results():
                    path = write_trajectory_csv(
                        result, trajectory_path(config.output_prefix, config.scenario, result.r, result.p)
                    )
                    summary.append(result)
                    written.append(path)
                    results.append(result)
                    self.logger.report_sweep_point(point_report(result, str(path)))
        except CONFIG_ERRORS as e:
            failure, status = str(e), EXIT_CONFIG
        except NUMERICAL_ERRORS as e:
            failure, status = f"{type(e).__name__}: {e}", EXIT_NUMERICAL

        if failure is not None:
            marker = write_failure_marker(config.output_prefix, failure, written + [summary_file])
            self.logger.log_error(f"{command} failed: {failure} (see {marker})")
            print(f"Run failed: {failure}")
        else:
            if clear_failure_marker(config.output_prefix):
                self.logger.log_info(f"{command}: removed failure marker of an earlier run")
            if config.plot_script:
                time_label = "Γ₀t" if config.time_units == "gamma0" else "t"
                write_plot_script(config.output_prefix, written, time_label, with_markov=config.compare_markov)

        self.logger.report_run_summary(RunSummary(
            command=command,
            points_requested=len(points),
            points_completed=len(results),
            started=started,
            summary_path=str(summary_file),
            failed=failure is not None,
        ))
        self._print_digest(config, results)
        return status

    def _print_digest(self, config: RunConfig, results: List[PointResult]):
        if not results:
            return
        units = "1/Γ₀" if config.time_units == "gamma0" else "absolute"
        print(f"\n{config.scenario} ({config.mode.value}), times in {units}:")
        for result in results:
            events = result.events
            line = (f"  r={result.r:<8g} p={result.p:<6g} Γ_r/Γ₀={result.rates.ratio:+.6f}  "
                    f"death={_format_event(result.display_time(events.first_death))}  "
                    f"revival={_format_event(result.display_time(events.first_revival))}  "
                    f"min C={result.min_concurrence:.4g}")
            if events.onset_times:
                line += f"  onset={_format_event(result.display_time(events.onset_times[0]))}"
            if events.subfloor_revival_times:
                line += f"  sub-floor revival={_format_event(result.display_time(events.subfloor_revival_times[0]))}"
            if result.markov_events is not None:
                markov = result.markov_events
                line += (f"  | Born-Markov death={_format_event(result.display_time(markov.first_death))}"
                         f" revival={_format_event(result.display_time(markov.first_revival))}")
            print(line)
            for warning in result.warnings:
                print(f"    warning: {warning}")
