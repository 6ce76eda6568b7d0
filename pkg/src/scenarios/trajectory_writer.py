#!/usr/bin/env python3
"""
Trajectory Writer
-----------------

Flat-file outputs of a run: one CSV per sweep point, a summary CSV, an
optional gnuplot script and a failure marker for partial runs.
"""

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from .scenario_runner import PointResult

TRAJECTORY_HEADER = (
    "t", "rho00", "rho0101", "rho1010", "rho1111",
    "re_rho_IO", "im_rho_IO", "re_rho_0110", "im_rho_0110",
    "concurrence", "concurrence_markov", "purity", "min_eig",
)

SUMMARY_HEADER = (
    "r", "p", "death_t1", "revival_t1", "min_concurrence", "final_vacuum_pop",
    "markov_death_t1", "markov_revival_t1",
)

FLOAT_FORMAT = "%.12e"


def format_value(value: Optional[float]) -> str:
    return "" if value is None else FLOAT_FORMAT % value


def name_value(value: float) -> str:
    """Shortest digits that round-trip, so distinct sweep values never share a file name."""
    return np.format_float_positional(value, trim="-")


def trajectory_path(prefix: str, scenario: str, r: float, p: float) -> Path:
    return Path(f"{prefix}_{scenario}_r{name_value(r)}_p{name_value(p)}.csv")


def summary_path(prefix: str) -> Path:
    return Path(f"{prefix}_summary.csv")


def plot_script_path(prefix: str) -> Path:
    return Path(f"{prefix}.gp")


def failure_marker_path(prefix: str) -> Path:
    return Path(f"{prefix}_FAILED.txt")


def _ensure_parent(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)


def trajectory_rows(result: PointResult) -> Iterable[List[str]]:
    traj = result.trajectory
    markov = traj.observables.get("concurrence_markov")
    for index, (t, state) in enumerate(zip(traj.times, traj.states)):
        rho = state.matrix
        yield [
            format_value(result.display_time(t)),
            format_value(rho[0, 0].real),
            format_value(rho[1, 1].real),
            format_value(rho[2, 2].real),
            format_value(rho[3, 3].real),
            format_value(rho[3, 0].real),
            format_value(rho[3, 0].imag),
            format_value(rho[1, 2].real),
            format_value(rho[1, 2].imag),
            format_value(traj.observables["concurrence"][index]),
            format_value(None if markov is None else markov[index]),
            format_value(traj.observables["purity"][index]),
            format_value(traj.observables["min_eig"][index]),
        ]


def write_trajectory_csv(result: PointResult, path: Path) -> Path:
    _ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        writer.writerows(trajectory_rows(result))
    return path


def summary_row(result: PointResult) -> List[str]:
    markov = result.markov_events
    return [
        format_value(result.r),
        format_value(result.p),
        format_value(result.display_time(result.events.first_death)),
        format_value(result.display_time(result.events.first_revival)),
        format_value(result.min_concurrence),
        format_value(result.final_vacuum_pop),
        format_value(result.display_time(markov.first_death) if markov else None),
        format_value(result.display_time(markov.first_revival) if markov else None),
    ]


class SummaryWriter:
    """Appends one row per finished sweep point, in the order points are handed in."""

    def __init__(self, path: Path):
        self.path = path
        self._handle: Optional[TextIO] = None
        self._writer = None

    def __enter__(self) -> "SummaryWriter":
        _ensure_parent(self.path)
        self._handle = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(SUMMARY_HEADER)
        return self

    def append(self, result: PointResult):
        self._writer.writerow(summary_row(result))
        self._handle.flush()

    def __exit__(self, exc_type, exc, tb):
        self._handle.close()
        return False


def write_plot_script(prefix: str, csv_paths: Sequence[Path], time_label: str,
                      with_markov: bool = False) -> Path:
    """Gnuplot script drawing concurrence (and the Born-Markov curve when present) for every point."""
    path = plot_script_path(prefix)
    _ensure_parent(path)
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{time_label}'",
        "set ylabel 'concurrence'",
        "set terminal pngcairo size 1000,700",
        f"set output '{Path(prefix).name}.png'",
    ]
    curves = []
    for csv_path in csv_paths:
        name = csv_path.stem
        curves.append(f"'{csv_path.name}' using 1:10 with lines title '{name}'")
        if with_markov:
            curves.append(f"'{csv_path.name}' using 1:11 with lines dashtype 2 title '{name} (Born-Markov)'")
    lines.append("plot " + ", \\\n     ".join(curves))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_failure_marker(prefix: str, message: str, completed: Sequence[Path]) -> Path:
    path = failure_marker_path(prefix)
    _ensure_parent(path)
    listing = "\n".join(f"  {p.name}" for p in completed) or "  (none)"
    path.write_text(f"run failed: {message}\ncomplete outputs:\n{listing}\n", encoding="utf-8")
    return path


def clear_failure_marker(prefix: str) -> bool:
    """Remove the marker left by an earlier failed run with the same prefix."""
    path = failure_marker_path(prefix)
    if not path.exists():
        return False
    path.unlink()
    return True
