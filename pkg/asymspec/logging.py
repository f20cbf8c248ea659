"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Append-only audit trail of subcommand runs.

Every run becomes one line in a plain-text file:

    YYYY-MM-DDTHH:MM:SS|cmd:<name>|OK|<duration>ms[|metric=value,...]
    YYYY-MM-DDTHH:MM:SS|cmd:<name>|FAIL|<duration>ms|<error>

Each audit file gets its own child of the ``asymspec.audit`` logger and a
single FileHandler. Runners writing to the same file share that handler,
which is closed together with the last of them.
"""

from __future__ import annotations

import hashlib
import logging
import math
import threading
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Mapping

AUDIT_LOGGER = "asymspec.audit"
ERROR_WIDTH = 100

_formatter = logging.Formatter("%(asctime)s|%(message)s", datefmt="%Y-%m-%dT%H:%M:%S")
_lock = threading.Lock()
# Open AsymspecLogger instances per resolved audit file
_users: dict[str, int] = {}


def _channel(key: str) -> logging.Logger:
    digest = hashlib.blake2s(key.encode("utf-8"), digest_size=6).hexdigest()
    return logging.getLogger(f"{AUDIT_LOGGER}.{digest}")


def _attach(path: Path) -> tuple[str, logging.Logger]:
    key = str(path.resolve())
    channel = _channel(key)
    with _lock:
        if not _users.get(key):
            path.parent.mkdir(parents=True, exist_ok=True)
            handler = logging.FileHandler(path, encoding="utf-8")
            handler.setFormatter(_formatter)
            channel.addHandler(handler)
            channel.setLevel(logging.INFO)
            channel.propagate = False  # Keep audit lines off the CLI's stderr
        _users[key] = _users.get(key, 0) + 1
    return key, channel


def _detach(key: str, channel: logging.Logger) -> None:
    with _lock:
        remaining = _users.get(key, 0) - 1
        if remaining > 0:
            _users[key] = remaining
            return
        _users.pop(key, None)
        for handler in channel.handlers[:]:
            handler.close()
            channel.removeHandler(handler)


def format_entry(
    command: str,
    *,
    success: bool = True,
    duration_ms: int = 0,
    error_msg: str | None = None,
    metrics: Mapping[str, float | None] | None = None,
) -> str:
    """Audit line for one run, without the timestamp.

    Error messages are collapsed to a single line and cut to 100 characters.
    Metrics appear only on successful runs, sorted by name; missing or
    non-finite values are left out.
    """
    fields = [f"cmd:{command}", "OK" if success else "FAIL", f"{duration_ms}ms"]
    if error_msg:
        fields.append(" ".join(error_msg.split())[:ERROR_WIDTH])
    elif success and metrics:
        pairs = [
            f"{name}={float(value):.6g}"
            for name, value in sorted(metrics.items())
            if value is not None and math.isfinite(float(value))
        ]
        if pairs:
            fields.append(",".join(pairs))
    return "|".join(fields)


class AsymspecLogger:
    """Optional audit log of subcommand runs.

    Disabled (every call a no-op) when log_path is None.
    """

    __slots__ = ("_channel", "_key", "log_path")

    def __init__(self, log_path: str | None = None) -> None:
        """Open the audit file, creating parent directories as needed.

        Args:
            log_path: Path to the audit file, or None to disable logging
        """
        self.log_path = log_path
        self._key: str | None = None
        self._channel: logging.Logger | None = None
        if log_path:
            self._key, self._channel = _attach(Path(log_path))

    @property
    def enabled(self) -> bool:
        """Whether runs are being written."""
        return self._channel is not None

    def log(
        self,
        command: str,
        *,
        success: bool = True,
        duration_ms: int = 0,
        error_msg: str | None = None,
        metrics: Mapping[str, float | None] | None = None,
    ) -> None:
        """Append one run to the audit file; no-op when disabled."""
        if self._channel is None:
            return
        self._channel.info(
            format_entry(command, success=success, duration_ms=duration_ms, error_msg=error_msg, metrics=metrics)
        )

    def close(self) -> None:
        """Stop writing; safe to call more than once."""
        if self._channel is not None and self._key is not None:
            _detach(self._key, self._channel)
        self._channel = None
        self._key = None
