"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Core AsymSpec class - the main entry point for running analyses.

Resolves ambient settings (threads, audit log, run ledger) once, runs
subcommand pipelines and tracks every run. All configuration is passed
at initialization time; environment variables override it.
"""

from __future__ import annotations

import contextlib
import os
import sys
import time
from typing import TYPE_CHECKING, Any

from asymspec.exceptions import ConfigError
from asymspec.ledger import RunLedger
from asymspec.logging import AsymspecLogger
from asymspec.pipeline import COMMANDS

if TYPE_CHECKING:
    from collections.abc import Iterator

    from asymspec.config import RunConfig

DEFAULT_LOG_PATH = "./asymspec.log"


def _env_threads(default: int | None) -> int:
    raw = os.getenv("ASYMSPEC_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise ConfigError(f"ASYMSPEC_THREADS must be an integer, got {raw!r}") from exc
        if value < 1:
            raise ConfigError(f"ASYMSPEC_THREADS must be >= 1, got {value}")
        return value
    return default if default is not None else (os.cpu_count() or 1)


class AsymSpec:
    """Analysis runner with audit logging and an optional run ledger.

    Example:
        ```python
        from asymspec import AsymSpec, build_config

        runner = AsymSpec(ledger_path="./runs.sqlite")
        config = build_config("mc-validate", overrides={"n": 100, "t": 500, "reps": 50, "out": "out/"})
        metrics = runner.run(config)
        runner.close()
        ```

    Environment Variables:
        ASYMSPEC_THREADS: Cap on worker threads (default: all cores)
        ASYMSPEC_LOG_PATH: Override log_path
        ASYMSPEC_LOG_ENABLED: Override log_enabled (true/1/yes, false/0/no)
        ASYMSPEC_LEDGER_PATH: Override ledger_path; the ledger is off when
            neither is set
    """

    __slots__ = ("_ledger", "_logger", "ledger_path", "log_enabled", "log_path", "threads")

    def __init__(
        self,
        *,
        threads: int | None = None,
        log_path: str | None = None,
        log_enabled: bool | None = None,
        ledger_path: str | None = None,
    ) -> None:
        """Initialize the runner.

        Args:
            threads: Worker threads for bootstrap and Monte Carlo loops
            log_path: Path to the audit log (default: ./asymspec.log)
            log_enabled: Enable the audit log (default: False, or env var)
            ledger_path: SQLite run ledger path (default: disabled)

        Raises:
            ConfigError: Invalid ASYMSPEC_THREADS value
        """
        self.threads = _env_threads(threads)
        self.log_path = os.getenv("ASYMSPEC_LOG_PATH", log_path or DEFAULT_LOG_PATH)
        self.ledger_path = os.getenv("ASYMSPEC_LEDGER_PATH", ledger_path or "") or None

        env_log = os.getenv("ASYMSPEC_LOG_ENABLED", "").lower()
        if env_log in ("true", "1", "yes"):
            self.log_enabled = True
        elif env_log in ("false", "0", "no"):
            self.log_enabled = False
        else:
            self.log_enabled = log_enabled if log_enabled is not None else False

        self._ledger = RunLedger(self.ledger_path) if self.ledger_path else None
        self._logger = AsymspecLogger(self.log_path if self.log_enabled else None)

    def record(
        self,
        command: str,
        *,
        success: bool = True,
        duration_ms: int = 0,
        error_msg: str | None = None,
        metrics: dict[str, float] | None = None,
    ) -> None:
        """Record a finished run in the audit log and the ledger.

        Never raises: tracking failures are reported on stderr.
        """
        try:
            self._logger.log(
                command, success=success, duration_ms=duration_ms, error_msg=error_msg, metrics=metrics
            )
        except Exception as exc:
            print(f"[asymspec] Audit logging failed for {command}: {exc}", file=sys.stderr)

        if self._ledger is None:
            return
        try:
            self._ledger.record(command, success=success, duration_ms=duration_ms, metrics=metrics)
        except Exception as exc:
            # Never fail the main flow due to tracking
            print(f"[asymspec] Ledger tracking failed for {command}: {exc}", file=sys.stderr)

    @contextlib.contextmanager
    def tracking(self, command: str) -> Iterator[dict[str, float]]:
        """Context manager timing a run and recording it on exit.

        Yields a dictionary the caller fills with headline metrics; they are
        stored only when the block succeeds.

        Example:
            ```python
            with runner.tracking("spectrum") as metrics:
                metrics.update(cmd_spectrum(config, threads=runner.threads))
            ```
        """
        start = time.perf_counter()
        metrics: dict[str, float] = {}
        error_msg: str | None = None
        success = True

        try:
            yield metrics
        except Exception as exc:
            success = False
            error_msg = str(exc)
            raise
        finally:
            duration_ms = int((time.perf_counter() - start) * 1000)
            self.record(
                command,
                success=success,
                duration_ms=duration_ms,
                error_msg=error_msg,
                metrics=metrics if success else None,
            )

    def run(self, config: RunConfig) -> dict[str, float]:
        """Run the configured subcommand and return its headline metrics.

        Args:
            config: Resolved run configuration; config.threads, when set,
                lowers the runner's thread cap for this run

        Raises:
            AsymspecError: Any pipeline failure (tracked before re-raising)
        """
        threads = min(self.threads, config.threads) if config.threads else self.threads
        with self.tracking(config.command) as metrics:
            metrics.update(COMMANDS[config.command](config, threads=threads))
        return metrics

    def get_stats(self, *, command: str | None = None) -> dict[str, Any]:
        """Ledger statistics, or an empty summary when the ledger is off."""
        if self._ledger is None:
            return {"enabled": False, "runs": [], "total_runs": 0, "total_failures": 0, "command_count": 0}
        stats = self._ledger.get_stats(command=command)
        stats["enabled"] = True
        return stats

    def close(self) -> None:
        """Release resources."""
        self._logger.close()
