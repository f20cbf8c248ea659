"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Utility functions for asymspec.

Pure functions with no side effects - safe for concurrent use.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, TypeVar

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

T = TypeVar("T")
R = TypeVar("R")


def normalize_tickers(tickers: Iterable[str]) -> list[str]:
    """Strip ticker labels and reject empty or duplicate entries.

    Unlike free-form tags, tickers are identifiers: case is preserved and a
    duplicate is an error rather than something to fold away.

    Args:
        tickers: Raw ticker strings (e.g. a CSV header)

    Returns:
        Stripped tickers in original order

    Raises:
        ValueError: On an empty or repeated ticker

    Example:
        >>> normalize_tickers([" AAA", "BBB "])
        ['AAA', 'BBB']
    """
    result: list[str] = []
    seen: set[str] = set()

    for raw in tickers:
        ticker = str(raw).strip()
        if not ticker:
            raise ValueError("empty ticker label")
        if ticker in seen:
            raise ValueError(f"duplicate ticker {ticker!r}")
        result.append(ticker)
        seen.add(ticker)

    return result


def parse_int_list(value: str | Sequence[int] | None) -> list[int]:
    """Parse a comma-separated integer list ("0,49,99") into ints.

    Args:
        value: Comma-separated string, an existing sequence, or None

    Returns:
        List of integers (empty for None or blank input)
    """
    if value is None:
        return []
    if not isinstance(value, str):
        return [int(v) for v in value]
    return [int(part) for part in value.split(",") if part.strip()]


def format_float(value: float) -> str:
    """Render a float for CSV output (shortest round-trip form)."""
    return repr(float(value))


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Apply fn to every item, optionally on a thread pool, keeping input order.

    Results come back in the order of items whatever the thread count, so
    anything pooled from them is identical for sequential and parallel runs.

    Args:
        fn: Function applied to each item
        items: Work items
        threads: Worker threads; 1 runs inline

    Returns:
        List of results aligned with items
    """
    work = list(items)
    if threads <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=min(threads, len(work))) as pool:
        return list(pool.map(fn, work))
