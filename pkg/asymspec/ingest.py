"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Price ingestion, calendar alignment and return panels.

Loads long (date,ticker,price) or wide (date,<ticker>...) CSV files,
restricts two markets to their common fully observed calendar, and turns
prices into standardized log-return panels. Standardization uses the
population divisor T so the Pearson diagonal is exactly one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import numpy as np
import pandas as pd

from asymspec.exceptions import IngestError
from asymspec.utils import normalize_tickers

if TYPE_CHECKING:
    from collections.abc import Sequence
    from datetime import date

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

PriceFormat = Literal["long_csv", "wide_csv", "auto"]

_LONG_HEADER = ["date", "ticker", "price"]

# Tolerance used when a panel claims to be standardized
STANDARDIZATION_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class PriceTable:
    """Spot prices of one market, indexed by date with one column per ticker.

    Missing prices are NaN. Dates are unique and increasing, every observed
    price is strictly positive.
    """

    prices: pd.DataFrame
    system_label: str = ""

    def __post_init__(self) -> None:
        frame = self.prices
        if frame.index.has_duplicates:
            raise IngestError("duplicate (date, ticker) pair: repeated date")
        if frame.columns.has_duplicates:
            raise IngestError("duplicate (date, ticker) pair: repeated ticker")
        if not frame.index.is_monotonic_increasing:
            raise IngestError("price table dates must be increasing")
        values = frame.to_numpy(dtype=np.float64)
        observed = values[~np.isnan(values)]
        if (observed <= 0).any():
            raise IngestError("non-positive price in price table")

    @property
    def tickers(self) -> list[str]:
        return [str(c) for c in self.prices.columns]

    @property
    def dates(self) -> list[date]:
        return list(self.prices.index)

    @property
    def n_observations(self) -> int:
        return int(self.prices.notna().to_numpy().sum())

    @property
    def observations(self) -> list[tuple[date, str, float]]:
        """All observed (date, ticker, price) triples, date-major."""
        result: list[tuple[date, str, float]] = []
        for day, row in self.prices.iterrows():
            for ticker, price in row.items():
                if not np.isnan(price):
                    result.append((day, str(ticker), float(price)))  # type: ignore[arg-type]
        return result


def is_standardized(values: NDArray[np.float64]) -> bool:
    """Whether every row has mean 0 and population sd 1 within STANDARDIZATION_TOL."""
    means = values.mean(axis=1)
    sds = values.std(axis=1)
    return bool(np.abs(means).max() <= STANDARDIZATION_TOL and np.abs(sds - 1.0).max() <= STANDARDIZATION_TOL)


@dataclass(frozen=True, slots=True)
class ReturnPanel:
    """N x T matrix of log-returns, row i = asset i, column t = time t.

    The values array is copied and made read-only on construction. When
    standardized is set, every row has mean 0 and population standard
    deviation 1.
    """

    values: NDArray[np.float64]
    tickers: tuple[str, ...]
    dates: tuple[date, ...]
    standardized: bool = False
    system_label: str = ""

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"return panel must be 2-D, got shape {values.shape}")
        n, t = values.shape
        if n < 1 or t < 1:
            raise ValueError(f"return panel needs N >= 1 and T >= 1, got {n}x{t}")
        tickers = tuple(self.tickers)
        dates = tuple(self.dates)
        if len(tickers) != n:
            raise ValueError(f"{len(tickers)} tickers for {n} rows")
        if len(dates) != t:
            raise ValueError(f"{len(dates)} dates for {t} columns")
        if any(later <= earlier for earlier, later in zip(dates, dates[1:])):
            raise ValueError("panel dates must be strictly increasing")
        if not np.isfinite(values).all():
            raise ValueError("return panel contains non-finite values")
        if self.standardized and not is_standardized(values):
            raise ValueError("panel flagged standardized but rows are not mean 0 / sd 1")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "tickers", tickers)
        object.__setattr__(self, "dates", dates)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def t(self) -> int:
        return int(self.values.shape[1])

    def subset(self, rows: Sequence[int]) -> ReturnPanel:
        """Panel restricted to the given rows (standardization is preserved)."""
        index = list(rows)
        return ReturnPanel(
            self.values[index],
            tuple(self.tickers[i] for i in index),
            self.dates,
            standardized=self.standardized,
            system_label=self.system_label,
        )

    def window(self, start: int, length: int) -> ReturnPanel:
        """Columns start .. start+length-1; the result is not standardized."""
        if start < 0 or length < 1 or start + length > self.t:
            raise ValueError(f"window [{start}, {start + length}) outside panel of length {self.t}")
        return ReturnPanel(
            self.values[:, start : start + length],
            self.tickers,
            self.dates[start : start + length],
            standardized=False,
            system_label=self.system_label,
        )

    def with_values(self, values: NDArray[np.float64]) -> ReturnPanel:
        """Same labels, new values of identical shape."""
        return ReturnPanel(
            values,
            self.tickers,
            self.dates,
            standardized=self.standardized,
            system_label=self.system_label,
        )


def synthetic_dates(t: int) -> tuple[date, ...]:
    """Business-day calendar of length t for generated panels."""
    return tuple(pd.bdate_range("2000-01-03", periods=t).date)


# ============================================================================
# Loading
# ============================================================================


def _read_rows(path: Path) -> pd.DataFrame:
    """Read a CSV as strings, dropping blank lines but keeping line numbers.

    The returned frame is indexed by 0-based physical line.
    """
    try:
        raw = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as exc:
        raise IngestError(f"empty price file: {path}") from exc
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot parse {path}: {exc}") from exc

    raw = raw.fillna("").apply(lambda col: col.str.strip())
    return raw[~(raw == "").all(axis=1)]


def _parse_dates(cells: pd.Series) -> pd.Series:
    parsed = pd.to_datetime(cells, format="%Y-%m-%d", errors="coerce")
    bad = parsed.isna()
    if bad.any():
        idx = bad.idxmax()
        raise IngestError(f"invalid date {cells[idx]!r} (expected YYYY-MM-DD)", line=int(idx) + 1)
    return parsed.dt.date


def _check_prices(prices: pd.Series, cells: pd.Series) -> None:
    unparsed = prices.isna() & (cells != "")
    if unparsed.any():
        idx = unparsed.idxmax()
        raise IngestError(f"invalid price {cells[idx]!r}", line=int(idx) + 1)
    infinite = np.isinf(prices.to_numpy(dtype=np.float64))
    if infinite.any():
        idx = prices.index[int(np.argmax(infinite))]
        raise IngestError(f"invalid price {cells[idx]!r}", line=int(idx) + 1)
    non_positive = prices <= 0
    if non_positive.any():
        idx = non_positive.idxmax()
        raise IngestError(f"non-positive price {cells[idx]!r}", line=int(idx) + 1)


def _load_long(body: pd.DataFrame) -> pd.DataFrame:
    if body.shape[1] != 3:
        raise IngestError(f"long format expects 3 columns, found {body.shape[1]}", line=1)
    body = body.set_axis(_LONG_HEADER, axis=1)

    dates = _parse_dates(body["date"])
    tickers = body["ticker"]
    if (tickers == "").any():
        raise IngestError("empty ticker", line=int((tickers == "").idxmax()) + 1)
    if (body["price"] == "").any():
        raise IngestError("missing price", line=int((body["price"] == "").idxmax()) + 1)
    prices = pd.to_numeric(body["price"], errors="coerce")
    _check_prices(prices, body["price"])

    frame = pd.DataFrame({"date": dates, "ticker": tickers, "price": prices.astype(np.float64)})
    duplicated = frame.duplicated(["date", "ticker"])
    if duplicated.any():
        idx = duplicated.idxmax()
        raise IngestError(
            f"duplicate (date, ticker) pair ({frame.at[idx, 'date']}, {frame.at[idx, 'ticker']})",
            line=int(idx) + 1,
        )

    wide = frame.pivot(index="date", columns="ticker", values="price")
    wide = wide.reindex(columns=list(pd.unique(tickers)))
    wide.columns.name = None
    return wide.sort_index()


def _load_wide(header: list[str], body: pd.DataFrame) -> pd.DataFrame:
    try:
        tickers = normalize_tickers(header[1:])
    except ValueError as exc:
        raise IngestError(str(exc), line=1) from exc
    if not tickers:
        raise IngestError("wide format needs at least one ticker column", line=1)
    body = body.set_axis(["date", *tickers], axis=1)

    dates = _parse_dates(body["date"])
    repeated = dates.duplicated()
    if repeated.any():
        idx = repeated.idxmax()
        raise IngestError(f"duplicate (date, ticker) pair on {dates[idx]}", line=int(idx) + 1)

    columns: dict[str, pd.Series] = {}
    for ticker in tickers:
        cells = body[ticker]
        prices = pd.to_numeric(cells.where(cells != ""), errors="coerce")
        _check_prices(prices, cells)
        columns[ticker] = prices.astype(np.float64)

    wide = pd.DataFrame(columns)
    wide.index = pd.Index(list(dates))
    return wide.sort_index()


def load_prices(
    path: str | Path,
    fmt: PriceFormat = "auto",
    *,
    system_label: str | None = None,
) -> PriceTable:
    """Load a price CSV into a validated PriceTable.

    Args:
        path: CSV file (UTF-8, comma separated, ISO dates)
        fmt: "long_csv" (date,ticker,price), "wide_csv" (date,<ticker>...)
            or "auto" to decide from the header
        system_label: Market label (default: file stem)

    Returns:
        PriceTable with positive prices and unique (date, ticker) pairs

    Raises:
        IngestError: Missing file, parse failure (with line number),
            non-positive price or duplicate (date, ticker)
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"price file not found: {path}")

    raw = _read_rows(path)
    if raw.empty:
        raise IngestError(f"empty price file: {path}")

    header_line = int(raw.index[0]) + 1
    header = [str(c) for c in raw.iloc[0]]
    while header and header[-1] == "":
        header.pop()
    body = raw.iloc[1:, : len(header)]
    if body.empty:
        raise IngestError(f"no data rows in {path}", line=header_line)

    lowered = [h.lower() for h in header]
    if fmt == "auto":
        if lowered == _LONG_HEADER:
            fmt = "long_csv"
        elif lowered and lowered[0] == "date":
            fmt = "wide_csv"
        else:
            raise IngestError(f"unrecognised header {','.join(header)!r}", line=header_line)

    if fmt == "long_csv":
        if lowered != _LONG_HEADER:
            raise IngestError(
                f"expected header 'date,ticker,price', got {','.join(header)!r}", line=header_line
            )
        prices = _load_long(body)
    elif fmt == "wide_csv":
        if not lowered or lowered[0] != "date":
            raise IngestError("wide header must start with 'date'", line=header_line)
        prices = _load_wide(header, body)
    else:
        raise IngestError(f"unknown price format {fmt!r}")

    table = PriceTable(prices, system_label if system_label is not None else path.stem)
    logger.debug(
        "Loaded %s: %d tickers, %d dates, %d prices",
        path,
        len(table.tickers),
        len(table.dates),
        table.n_observations,
    )
    return table


# ============================================================================
# Transformations
# ============================================================================


def align_calendars(a: PriceTable, b: PriceTable) -> tuple[PriceTable, PriceTable]:
    """Restrict two markets to the dates on which every ticker of both has a price.

    A single missing price drops the date for every ticker in both tables,
    mirroring the removal of one market's trading days during the other's
    holidays.

    Raises:
        IngestError: Empty input or no common fully observed date
    """
    if a.n_observations == 0 or b.n_observations == 0:
        raise IngestError("cannot align an empty price table")

    full_a = a.prices.index[a.prices.notna().all(axis=1).to_numpy()]
    full_b = b.prices.index[b.prices.notna().all(axis=1).to_numpy()]
    common = sorted(set(full_a) & set(full_b))
    if not common:
        raise IngestError(
            f"no common fully observed date between {a.system_label!r} and {b.system_label!r}"
        )

    logger.info(
        "Aligned calendars: kept %d dates (%s had %d, %s had %d)",
        len(common),
        a.system_label,
        len(a.prices),
        b.system_label,
        len(b.prices),
    )
    return (
        PriceTable(a.prices.loc[common], a.system_label),
        PriceTable(b.prices.loc[common], b.system_label),
    )


def log_returns(p: PriceTable) -> ReturnPanel:
    """Log price ratios between consecutive dates on which every ticker trades.

    Returns:
        N x (D-1) panel, standardized = False

    Raises:
        IngestError: A ticker with fewer than 2 prices
    """
    counts = p.prices.notna().sum(axis=0)
    for ticker, count in counts.items():
        if count < 2:
            raise IngestError(f"ticker {ticker!r} has fewer than 2 prices")

    complete = p.prices.dropna(how="any")
    if len(complete) < 2:
        raise IngestError("fewer than 2 dates on which every ticker has a price")
    if len(complete) < len(p.prices):
        logger.debug("Dropped %d partially observed dates", len(p.prices) - len(complete))

    log_prices = np.log(complete.to_numpy(dtype=np.float64))
    returns = np.diff(log_prices, axis=0).T
    return ReturnPanel(
        returns,
        tuple(str(c) for c in complete.columns),
        tuple(complete.index[1:]),
        standardized=False,
        system_label=p.system_label,
    )


def standardize(r: ReturnPanel) -> ReturnPanel:
    """Shift every row to mean 0 and scale it to population sd 1.

    Raises:
        IngestError: Zero-variance row (named by ticker) or T < 2
    """
    if r.t < 2:
        raise IngestError("standardization needs at least 2 observations per row")

    values = r.values
    centered = values - values.mean(axis=1, keepdims=True)
    sd = np.sqrt((centered**2).mean(axis=1))
    # Constant rows leave only rounding noise of order eps * |x|
    floor = 16 * np.finfo(np.float64).eps * np.abs(values).max(axis=1)
    zero = sd <= floor
    if zero.any():
        ticker = r.tickers[int(np.argmax(zero))]
        raise IngestError(f"zero-variance return series for ticker {ticker!r}")

    return ReturnPanel(
        centered / sd[:, None],
        r.tickers,
        r.dates,
        standardized=True,
        system_label=r.system_label,
    )


def load_panel(path: str | Path, fmt: PriceFormat = "auto") -> ReturnPanel:
    """Load one price file straight into a standardized return panel."""
    return standardize(log_returns(load_prices(path, fmt)))


def load_pair(
    path_a: str | Path,
    path_b: str | Path,
    fmt: PriceFormat = "auto",
) -> tuple[ReturnPanel, ReturnPanel]:
    """Load two markets, align their calendars and standardize both."""
    a, b = align_calendars(load_prices(path_a, fmt), load_prices(path_b, fmt))
    return standardize(log_returns(a)), standardize(log_returns(b))
