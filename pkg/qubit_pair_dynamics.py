#!/usr/bin/env python3
"""
Qubit Pair Dynamics - Main Entry Point
--------------------------------------

Exact (non-Markovian) evolution of two qubits sharing the vacuum field, with
entanglement tracking and a Born-Markov comparison.

Usage:
    # Rates for the configured separations
    python qubit_pair_dynamics.py rates --config configs/class_a_sweep.ini

    # One trajectory
    python qubit_pair_dynamics.py evolve --config configs/class_a_sweep.ini --out runs/single

    # Full sweep, four workers
    python qubit_pair_dynamics.py sweep --config configs/class_a_sweep.ini --jobs 4
"""

import sys
import argparse
import os
from pathlib import Path

# Load environment variables
from dotenv import load_dotenv
load_dotenv()

# Add src to Python path for imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from reporting.run_logger import setup_logging
from scenarios.run_commands import RunCommands


def main(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run file (defaults built in, QPD_* environment overrides)")
    common.add_argument("--out", help="Output path prefix (overrides [output] prefix)")
    common.add_argument("--mode", choices=["closed", "quadrature"], help="How κ₁,₂ are evaluated")
    common.add_argument("--jobs", type=int, help="Worker threads for sweep points (default: QPD_JOBS or 1)")
    common.add_argument("--log-level", help="Logging verbosity (default: QPD_LOG_LEVEL or INFO)")

    parser = argparse.ArgumentParser(
        description="Qubit Pair Dynamics - two qubits in a common vacuum field",
        epilog="""
Examples:
  # Print Γ₀, Γ_r and σ for every separation in the sweep
  qubit_pair_dynamics.py rates --config configs/class_a_sweep.ini

  # Sweep separations and weights, comparing with Born-Markov dynamics
  qubit_pair_dynamics.py compare-markov --config configs/class_a_sweep.ini --out runs/class_a

  # Override one value from the environment
  QPD_PHYSICS_R=20 qubit_pair_dynamics.py evolve
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    subparsers.add_parser("rates", parents=[common], help="Show Γ₀, Γ_r, σ and validity warnings")
    subparsers.add_parser("evolve", parents=[common], help="Simulate the configured point")
    subparsers.add_parser("sweep", parents=[common], help="Simulate every (r, p) sweep point")
    subparsers.add_parser("compare-markov", parents=[common],
                          help="Sweep with the Born-Markov comparison")

    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        print("\nHint: Start with 'python qubit_pair_dynamics.py rates' to see the decay rates")
        return 1

    run_logger = setup_logging(args.log_level or os.getenv("QPD_LOG_LEVEL", "INFO"))
    commands = RunCommands(
        config_path=args.config,
        mode=args.mode,
        prefix=args.out,
        jobs=args.jobs,
        run_logger=run_logger,
    )

    if args.command == "rates":
        return commands.show_rates()
    elif args.command == "evolve":
        return commands.evolve()
    elif args.command == "sweep":
        return commands.sweep()
    elif args.command == "compare-markov":
        return commands.compare_markov()

    return 0


if __name__ == "__main__":
    sys.exit(main())
