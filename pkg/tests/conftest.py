"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Pytest configuration and fixtures.
"""

from __future__ import annotations

import csv
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
import pytest

if TYPE_CHECKING:
    from collections.abc import Callable

    from asymspec import AsymSpec, ReturnPanel, RunLedger


@pytest.fixture
def tmp_ledger_path():
    """Create a temporary ledger path."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield str(Path(tmp_dir) / "runs.sqlite")


@pytest.fixture
def tmp_log_path():
    """Create a temporary log file path."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield str(Path(tmp_dir) / "test.log")


@pytest.fixture
def ledger(tmp_ledger_path: str) -> RunLedger:
    """Create a temporary RunLedger instance."""
    from asymspec import RunLedger

    return RunLedger(tmp_ledger_path)


@pytest.fixture
def runner(tmp_ledger_path: str, monkeypatch: pytest.MonkeyPatch) -> AsymSpec:
    """AsymSpec runner with a temporary ledger and no audit log."""
    from asymspec import AsymSpec

    for var in ("ASYMSPEC_THREADS", "ASYMSPEC_LOG_PATH", "ASYMSPEC_LOG_ENABLED", "ASYMSPEC_LEDGER_PATH"):
        monkeypatch.delenv(var, raising=False)
    instance = AsymSpec(ledger_path=tmp_ledger_path, log_enabled=False, threads=2)
    yield instance
    instance.close()


@pytest.fixture
def null_pair() -> tuple[ReturnPanel, ReturnPanel]:
    """Two independent standardized 20 x 200 Gaussian panels."""
    from asymspec import generate_null

    return generate_null(20, 200, seed=1)


@pytest.fixture
def factor_pair() -> tuple[ReturnPanel, ReturnPanel]:
    """30 x 400 panels whose common factor reaches system 2 one step late."""
    from asymspec import generate_factor_model

    return generate_factor_model(30, 400, 0.6, 0.5, 1, seed=3, g_sync=0.2)


def _write_wide(path: Path, panel: ReturnPanel) -> Path:
    prices = 100.0 * np.exp(np.cumsum(np.hstack([np.zeros((panel.n, 1)), panel.values * 0.01]), axis=1))
    dates = pd.bdate_range("2010-01-04", periods=panel.t + 1).date
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", *panel.tickers])
        for col, day in enumerate(dates):
            writer.writerow([day.isoformat(), *(repr(float(p)) for p in prices[:, col])])
    return path


@pytest.fixture
def write_prices(tmp_path: Path) -> Callable[[ReturnPanel, str], Path]:
    """Turn a return panel into a wide price CSV under tmp_path."""

    def write(panel: ReturnPanel, name: str) -> Path:
        return _write_wide(tmp_path / name, panel)

    return write


@pytest.fixture
def price_files(write_prices, factor_pair) -> tuple[Path, Path]:
    """Wide price files of the factor-model pair."""
    r1, r2 = factor_pair
    return write_prices(r1, "us.csv"), write_prices(r2, "uk.csv")
