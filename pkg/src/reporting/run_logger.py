#!/usr/bin/env python3
"""
Run Logger for Qubit Pair Dynamics
----------------------------------

Provides structured logging for simulation runs:
- Info/debug/warning/error logging through one named logger
- Per-sweep-point reports (rates, events, timing)
- End-of-run summaries
"""

import logging
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import List, Optional

LOGGER_NAME = "qubit_pair_dynamics"


@dataclass
class SweepPointReport:
    """Reports on one simulated (r, p) point."""
    scenario: str
    r: float
    p: Optional[float]
    gamma0: float
    gamma_r: float
    sigma: float
    death_t1: Optional[float]
    revival_t1: Optional[float]
    min_concurrence: float
    elapsed_seconds: float
    output_path: Optional[str] = None
    markov_death_t1: Optional[float] = None
    markov_revival_t1: Optional[float] = None
    warnings: List[str] = field(default_factory=list)
    error: Optional[str] = None


@dataclass
class RunSummary:
    """Totals for one CLI invocation."""
    command: str
    points_requested: int
    points_completed: int
    started: datetime
    summary_path: Optional[str] = None
    failed: bool = False


def _format_event(value: Optional[float]) -> str:
    return "none" if value is None else f"{value:.6g}"


class RunLogger:
    """Logger with report helpers for simulation runs."""

    def __init__(self, log_level: str = "INFO"):
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))
        self.session_start = datetime.now(timezone.utc)

    def log_info(self, message: str):
        self.logger.info(message)

    def log_debug(self, message: str):
        self.logger.debug(message)

    def log_warning(self, message: str):
        self.logger.warning(message)

    def log_error(self, message: str):
        self.logger.error(message)

    def report_sweep_point(self, report: SweepPointReport):
        """Log one finished sweep point; warnings and failures get their own lines."""
        point = f"{report.scenario} r={report.r:g}"
        if report.p is not None:
            point += f" p={report.p:g}"

        if report.error:
            self.log_error(f"{point} - Error: {report.error}")
            return

        for warning in report.warnings:
            self.log_warning(f"{point} - {warning}")

        message = (f"{point} - Γ_r/Γ₀={report.gamma_r / report.gamma0:.6f} "
                   f"σ={report.sigma:.3e} death={_format_event(report.death_t1)} "
                   f"revival={_format_event(report.revival_t1)} "
                   f"min C={report.min_concurrence:.4g} ({report.elapsed_seconds:.2f}s)")
        if report.markov_death_t1 is not None or report.markov_revival_t1 is not None:
            message += (f" markov death={_format_event(report.markov_death_t1)}"
                        f" revival={_format_event(report.markov_revival_t1)}")
        self.log_info(message)
        if report.output_path:
            self.log_debug(f"{point} - wrote {report.output_path}")

    def report_run_summary(self, summary: RunSummary):
        duration = (datetime.now(timezone.utc) - summary.started).total_seconds()
        message = (f"{summary.command}: {summary.points_completed}/{summary.points_requested} "
                   f"points in {self._format_duration(duration)}")
        if summary.summary_path:
            message += f", summary in {summary.summary_path}"
        if summary.failed:
            self.log_error(f"{message} (run failed, outputs are partial)")
        else:
            self.log_info(message)

    def _format_duration(self, seconds: float) -> str:
        """Format a duration in human-readable form."""
        minutes, seconds = divmod(seconds, 60)
        if minutes >= 1:
            return f"{int(minutes)}m {seconds:.0f}s"
        return f"{seconds:.2f}s"

    def log_system_start(self, command: str):
        self.log_info(f"Qubit pair dynamics started: {command}")


# Global logger instance
_logger_instance = None


def get_logger() -> RunLogger:
    """Get or create the global run logger instance."""
    global _logger_instance

    if _logger_instance is None:
        _logger_instance = RunLogger(log_level=os.getenv("QPD_LOG_LEVEL", "INFO"))

    return _logger_instance


def setup_logging(log_level: str = "INFO") -> RunLogger:
    """Set up logging configuration."""
    level = getattr(logging, log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s [%(name)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    logger = get_logger()
    logger.logger.setLevel(level)
    return logger
