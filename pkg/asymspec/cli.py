"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Command-line front end.

    asymspec spectrum --a us.csv --b uk.csv --tau 0 --boot 200 --subset 190 --seed 42 --out dir/
    asymspec maxeig --a us.csv --b uk.csv --tau-min -50 --tau-max 400 --out dir/
    asymspec pca --a us.csv --b uk.csv --tau-max 300 [--reshuffle] --out dir/
    asymspec joint --a us.csv --b uk.csv --top 3 --out dir/
    asymspec mc-validate --n 100 --t 500 --reps 50 --seed 7 --out dir/
    asymspec history --ledger runs.sqlite

Exit statuses: 0 success, 1 usage or data error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import TYPE_CHECKING, NoReturn

from asymspec import __version__
from asymspec.config import build_config
from asymspec.core import AsymSpec
from asymspec.exceptions import AsymspecError, ConfigError

if TYPE_CHECKING:
    from collections.abc import Sequence

_OPTION_FIELDS = (
    "a",
    "b",
    "fmt",
    "out",
    "seed",
    "threads",
    "tau",
    "tau_min",
    "tau_max",
    "boot",
    "subset",
    "free_q",
    "bins",
    "window",
    "starts",
    "reshuffle",
    "top",
    "n",
    "t",
    "reps",
    "q_overlay",
)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ConfigError (exit 1)."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"{self.prog}: {message}")


def _add_common(parser: argparse.ArgumentParser, *, inputs: bool = True) -> None:
    if inputs:
        parser.add_argument("--a", help="price file of system 1")
        parser.add_argument("--b", help="price file of system 2")
        parser.add_argument("--format", dest="fmt", choices=["auto", "long_csv", "wide_csv"], help="input layout")
    parser.add_argument("--config", help="JSON file of options (flags override it)")
    parser.add_argument("--out", help="output directory (default: .)")
    parser.add_argument("--seed", type=int, help="random seed (default: 0)")
    parser.add_argument("--threads", type=int, help="worker threads (capped by ASYMSPEC_THREADS)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def _add_bootstrap(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau", type=int, help="lag of k(tau) (default: 0)")
    parser.add_argument("--boot", type=int, help="bootstrap iterations (default: 1)")
    parser.add_argument("--subset", type=int, help="assets drawn per iteration (default: all)")
    parser.add_argument("--bins", type=int, help="histogram bins (default: ceil(sqrt(n)), at most 100)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    parser = _Parser(prog="asymspec", description="Spectral analysis of asymmetric lagged correlation matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="eigenvalue cloud, radial histogram and density fit of k(tau)")
    _add_common(spectrum)
    _add_bootstrap(spectrum)
    spectrum.add_argument("--free-q", dest="free_q", action="store_true", default=None, help="fit q jointly with h")

    maxeig = sub.add_parser("maxeig", help="largest eigenvalue of k(tau) across lags")
    _add_common(maxeig)
    maxeig.add_argument("--tau-min", dest="tau_min", type=int, help="first lag (default: -50)")
    maxeig.add_argument("--tau-max", dest="tau_max", type=int, help="last lag (default: 400)")
    maxeig.add_argument("--window", type=int, help="sliding window length for the robustness table")
    maxeig.add_argument("--starts", help="comma-separated 0-based window starts (default: 0)")

    pca = sub.add_parser("pca", help="principal components and their lagged correlations")
    _add_common(pca)
    _add_bootstrap(pca)
    pca.add_argument("--tau-min", dest="tau_min", type=int, help="first lag of the scan (default: 0)")
    pca.add_argument("--tau-max", dest="tau_max", type=int, help="last lag of the scan (default: 300)")
    pca.add_argument("--reshuffle", action="store_true", default=None, help="permute time before the analysis")

    joint = sub.add_parser("joint", help="spectrum and leading modes of the joint correlation matrix")
    _add_common(joint)
    joint.add_argument("--top", type=int, help="eigenvectors to export (default: 3)")

    mc = sub.add_parser("mc-validate", help="Monte Carlo self-test against the null density")
    _add_common(mc, inputs=False)
    mc.add_argument("--n", type=int, help="assets per panel (default: 100)")
    mc.add_argument("--t", type=int, help="observations per panel (default: 500)")
    mc.add_argument("--reps", type=int, help="panel pairs pooled (default: 50)")
    mc.add_argument("--tau", type=int, help="lag of k(tau) (default: 0)")
    mc.add_argument("--bins", type=int, help="histogram bins")
    mc.add_argument("--q-overlay", dest="q_overlay", type=float, help="q of the fitted model (default: nominal)")

    history = sub.add_parser("history", help="print run ledger statistics as JSON")
    history.add_argument("--ledger", help="ledger path (default: ASYMSPEC_LEDGER_PATH)")
    history.add_argument("--command", dest="only", help="restrict to one subcommand")
    history.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit status."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[asymspec] %(levelname)s %(name)s: %(message)s"))
    package_logger = logging.getLogger("asymspec")
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.WARNING)

    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            package_logger.setLevel(logging.DEBUG)

        if args.command == "history":
            runner = AsymSpec(ledger_path=args.ledger)
            stats = runner.get_stats(command=args.only)
            runner.close()
            print(json.dumps(stats, indent=2, sort_keys=True))
            return 0

        overrides = {name: getattr(args, name) for name in _OPTION_FIELDS if hasattr(args, name)}
        config = build_config(args.command, config_file=args.config, overrides=overrides)
        runner = AsymSpec()
        try:
            metrics = runner.run(config)
        finally:
            runner.close()
        print(json.dumps({"command": config.command, "out": str(config.out_dir), "metrics": metrics}, sort_keys=True))
        return 0
    except AsymspecError as exc:
        print(f"[asymspec] {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"[asymspec] {exc}", file=sys.stderr)
        return 1
    finally:
        package_logger.removeHandler(handler)
        handler.close()


if __name__ == "__main__":
    sys.exit(main())
