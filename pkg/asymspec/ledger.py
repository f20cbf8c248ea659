"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

SQLite run ledger for asymspec.

Keeps per-command run counts and latencies plus the headline metrics of
each command's latest successful run. The ledger lives outside the output
directory, so recording a run never changes its artifacts.
"""

from __future__ import annotations

import math
import sqlite3
import threading
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Generator, Mapping


class RunLedger:
    """SQLite store of subcommand runs.

    Features:
    - Lazy, idempotent schema creation
    - Atomic upserts of run counters and latency extremes
    - Latest headline metrics per command

    Thread Safety:
        Writes and reads are serialized by a threading.Lock.

    Connection Management:
        A new connection per operation; WAL mode is enabled on first use.
    """

    __slots__ = ("_initialized", "_lock", "db_path")

    def __init__(self, db_path: str) -> None:
        """Initialize the ledger.

        Args:
            db_path: Path to SQLite database file

        Note:
            Schema is created lazily on first operation.
        """
        self.db_path = db_path
        self._lock = threading.Lock()
        self._initialized = False

    @contextmanager
    def _connect(self) -> Generator[sqlite3.Connection, None, None]:
        """Context manager for database connections.

        Yields:
            SQLite connection with row_factory set
        """
        conn = sqlite3.connect(self.db_path, timeout=30.0)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
        finally:
            conn.close()

    def _ensure_schema(self) -> None:
        """Create tables if they don't exist. Idempotent."""
        if self._initialized:
            return

        db_path = Path(self.db_path)
        if db_path.parent.name:
            db_path.parent.mkdir(parents=True, exist_ok=True)

        with self._connect() as conn:
            conn.execute("PRAGMA journal_mode=WAL")

            conn.execute("""
                CREATE TABLE IF NOT EXISTS asymspec_runs (
                    command TEXT PRIMARY KEY,
                    run_count INTEGER NOT NULL DEFAULT 0,
                    failure_count INTEGER NOT NULL DEFAULT 0,
                    last_run TEXT NOT NULL,
                    last_status TEXT NOT NULL,
                    total_duration_ms INTEGER NOT NULL DEFAULT 0,
                    min_duration_ms INTEGER,
                    max_duration_ms INTEGER
                )
            """)

            conn.execute("""
                CREATE TABLE IF NOT EXISTS asymspec_metrics (
                    command TEXT NOT NULL,
                    name TEXT NOT NULL,
                    value REAL,
                    updated_at TEXT NOT NULL,
                    PRIMARY KEY (command, name)
                )
            """)

            conn.commit()

        self._initialized = True

    def record(
        self,
        command: str,
        *,
        success: bool = True,
        duration_ms: int = 0,
        metrics: Mapping[str, float] | None = None,
    ) -> None:
        """Record one run and, on success, replace the command's metrics.

        Args:
            command: Subcommand name
            success: Whether the run succeeded
            duration_ms: Wall time in milliseconds
            metrics: Headline numbers of the run (non-finite values stored as NULL)
        """
        self._ensure_schema()
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        status = "OK" if success else "FAIL"
        dur = max(0, int(duration_ms))

        with self._lock, self._connect() as conn:
            conn.execute(
                """
                INSERT INTO asymspec_runs (
                    command, run_count, failure_count, last_run, last_status,
                    total_duration_ms, min_duration_ms, max_duration_ms
                )
                VALUES (?, 1, ?, ?, ?, ?, ?, ?)
                ON CONFLICT(command) DO UPDATE SET
                    run_count = run_count + 1,
                    failure_count = failure_count + excluded.failure_count,
                    last_run = excluded.last_run,
                    last_status = excluded.last_status,
                    total_duration_ms = total_duration_ms + excluded.total_duration_ms,
                    min_duration_ms = MIN(COALESCE(min_duration_ms, excluded.min_duration_ms), excluded.min_duration_ms),
                    max_duration_ms = MAX(COALESCE(max_duration_ms, excluded.max_duration_ms), excluded.max_duration_ms)
                """,
                (command, 0 if success else 1, now, status, dur, dur, dur),
            )

            if success and metrics:
                conn.execute("DELETE FROM asymspec_metrics WHERE command = ?", (command,))
                conn.executemany(
                    "INSERT INTO asymspec_metrics (command, name, value, updated_at) VALUES (?, ?, ?, ?)",
                    [
                        (command, name, float(value) if math.isfinite(float(value)) else None, now)
                        for name, value in sorted(metrics.items())
                    ],
                )
            conn.commit()

    def get_stats(self, *, command: str | None = None) -> dict[str, Any]:
        """Per-command run statistics with their latest metrics.

        Args:
            command: Restrict to one subcommand

        Returns:
            Dictionary with a runs list and totals
        """
        self._ensure_schema()

        with self._lock, self._connect() as conn:
            where = "WHERE command = ?" if command else ""
            params: list[Any] = [command] if command else []
            # Safe: where clause is a fixed string, the value is bound
            rows = conn.execute(
                f"""
                SELECT command, run_count, failure_count, last_run, last_status,
                       total_duration_ms, min_duration_ms, max_duration_ms
                FROM asymspec_runs
                {where}
                ORDER BY run_count DESC, command ASC
                """,  # nosec B608
                params,
            ).fetchall()
            metric_rows = conn.execute(
                f"SELECT command, name, value FROM asymspec_metrics {where} ORDER BY name",  # nosec B608
                params,
            ).fetchall()

        metrics: dict[str, dict[str, float | None]] = {}
        for row in metric_rows:
            metrics.setdefault(row["command"], {})[row["name"]] = row["value"]

        runs: list[dict[str, Any]] = []
        total_runs = 0
        total_failures = 0
        for row in rows:
            count = row["run_count"] or 0
            total_runs += count
            total_failures += row["failure_count"] or 0
            avg_ms = (row["total_duration_ms"] or 0) // count if count else 0
            runs.append(
                {
                    "command": row["command"],
                    "run_count": count,
                    "failure_count": row["failure_count"] or 0,
                    "last_run": row["last_run"],
                    "last_status": row["last_status"],
                    "total_duration_ms": row["total_duration_ms"] or 0,
                    "min_duration_ms": row["min_duration_ms"],
                    "max_duration_ms": row["max_duration_ms"],
                    "avg_latency_ms": avg_ms,
                    "metrics": metrics.get(row["command"], {}),
                }
            )

        return {
            "runs": runs,
            "total_runs": total_runs,
            "total_failures": total_failures,
            "command_count": len(runs),
        }
