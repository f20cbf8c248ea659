"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Principal components and their lagged cross-correlations.

A standardized panel R with Pearson matrix C = V diag(lambda) V^T is mapped
to uncorrelated unit-variance series E = diag(lambda)^(-1/2) V^T R. With the
loading matrix W = V diag(sqrt(lambda)) the expansion R = W E is exact, so
the lagged matrix of the returns factorizes as

    k(tau) = W1 k_e(tau) W2^T,

where k_e(tau) is the same lagged matrix built from principal components.
Autocorrelation and effective-sample-size diagnostics for the component
series live here too.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np

from asymspec.corrmat import AsymCorrMatrix, check_lag, lagged_product, pearson
from asymspec.eig import SymEigen, eig_symmetric
from asymspec.exceptions import CorrelationError, PcaError
from asymspec.ingest import ReturnPanel, is_standardized

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

# Components with lambda below this fraction of lambda_max are dropped
DEGENERACY_THRESHOLD = 1e-10


@dataclass(frozen=True, slots=True)
class PcaDecomposition:
    """Principal components of one standardized panel.

    Attributes:
        eigen: Eigendecomposition of the panel's Pearson matrix
        components: kept x T matrix of component series, row i pairs with
            eigenvalue i
        kept: Number of retained components
        source: Panel the components were built from
    """

    eigen: SymEigen
    components: NDArray[np.float64]
    kept: int
    source: ReturnPanel

    def __post_init__(self) -> None:
        components = np.array(self.components, dtype=np.float64)
        components.setflags(write=False)
        object.__setattr__(self, "components", components)

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def t(self) -> int:
        return self.source.t

    @property
    def is_full(self) -> bool:
        return self.kept == self.n

    @property
    def variance_shares(self) -> NDArray[np.float64]:
        """lambda_i / N of the retained components."""
        return np.asarray(self.eigen.eigenvalues[: self.kept] / self.n)

    @property
    def discarded_mass(self) -> float:
        """Share of total variance carried by dropped components."""
        return float(np.clip(self.eigen.eigenvalues[self.kept :], 0.0, None).sum() / self.n)

    def as_panel(self) -> ReturnPanel:
        """Component series as a panel labelled PC1, PC2, ..."""
        return ReturnPanel(
            self.components,
            tuple(f"PC{i + 1}" for i in range(self.kept)),
            self.source.dates,
            standardized=is_standardized(self.components),
            system_label=self.source.system_label,
        )


@dataclass(frozen=True, slots=True)
class LoadingMatrix:
    """W with W_ij = sqrt(lambda_j) V_i^(j); W W^T is the Pearson matrix."""

    entries: NDArray[np.float64]

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


def decompose(r: ReturnPanel, *, keep: int | None = None) -> PcaDecomposition:
    """Principal components of a standardized panel.

    Components whose eigenvalue falls below 1e-10 * lambda_max are dropped
    and the truncation is logged.

    Args:
        r: Standardized return panel
        keep: Retain at most this many leading components

    Raises:
        PcaError: Non-standardized input, invalid keep, or a zero Pearson matrix
    """
    if not r.standardized:
        raise PcaError(f"panel {r.system_label!r} must be standardized")
    if keep is not None and keep < 1:
        raise PcaError(f"keep must be >= 1, got {keep}")

    eigen = eig_symmetric(pearson(r).entries)
    lam = eigen.eigenvalues
    if lam[0] <= 0:
        raise PcaError("Pearson matrix has no positive eigenvalue")
    valid = int((lam > DEGENERACY_THRESHOLD * lam[0]).sum())
    if valid < r.n:
        logger.warning(
            "Pearson matrix of %r is numerically singular: %d of %d components kept",
            r.system_label,
            valid,
            r.n,
        )
    kept = valid if keep is None else min(keep, valid)

    vectors = eigen.eigenvectors[:, :kept]
    components = (vectors.T @ r.values) / np.sqrt(lam[:kept])[:, None]
    return PcaDecomposition(eigen, components, kept, r)


def reconstruct(d: PcaDecomposition) -> ReturnPanel:
    """Rebuild the panel as W E from the retained components.

    Exact under full retention. A truncated decomposition gives an
    approximation whose relative squared error is d.discarded_mass; the
    result is flagged standardized only when its rows still are.
    """
    lam = d.eigen.eigenvalues[: d.kept]
    weights = d.eigen.eigenvectors[:, : d.kept] * np.sqrt(lam)
    values = weights @ d.components
    if not d.is_full:
        logger.warning("Reconstruction from %d of %d components, discarded mass %.3g", d.kept, d.n, d.discarded_mass)
    return ReturnPanel(
        values,
        d.source.tickers,
        d.source.dates,
        standardized=is_standardized(values),
        system_label=d.source.system_label,
    )


def _require_compatible(d1: PcaDecomposition, d2: PcaDecomposition) -> None:
    if d1.t != d2.t:
        raise PcaError(f"decompositions span different T: {d1.t} vs {d2.t}")
    if d1.kept != d2.kept:
        raise PcaError(f"retained component counts differ: {d1.kept} vs {d2.kept}")


def pc_lagged_cross(d1: PcaDecomposition, d2: PcaDecomposition, tau: int) -> AsymCorrMatrix:
    """Lagged cross-correlation k_e(tau) between the two systems' components.

    Raises:
        PcaError: Different T or retained counts, or |tau| >= T - 1
    """
    _require_compatible(d1, d2)
    try:
        check_lag(d1.t, tau)
    except CorrelationError as exc:
        raise PcaError(str(exc)) from exc
    return AsymCorrMatrix(
        lagged_product(d1.components, d2.components, tau),
        lag=tau,
        effective_T=d1.t - abs(tau),
        source_labels=(d1.source.system_label, d2.source.system_label),
    )


def loading_matrix(d: PcaDecomposition) -> LoadingMatrix:
    """Loading matrix W = V diag(sqrt(lambda)).

    Raises:
        PcaError: Truncated decomposition
    """
    if not d.is_full:
        raise PcaError(f"loading matrix needs all {d.n} components, only {d.kept} kept")
    return LoadingMatrix(d.eigen.eigenvectors * np.sqrt(d.eigen.eigenvalues))


def pc_correlation_scan(
    d1: PcaDecomposition,
    d2: PcaDecomposition,
    taus: Iterable[int],
) -> list[tuple[int, float, float, float, float]]:
    """(tau, k11, k22, k12, k21) over the two leading components of each system.

    k11 pairs the first component of system 1 with the first of system 2,
    k12 the first of system 1 with the second of system 2, and so on.

    Raises:
        PcaError: Fewer than two retained components or incompatible inputs
    """
    _require_compatible(d1, d2)
    if d1.kept < 2:
        raise PcaError("component correlation scan needs two retained components per system")
    lead1 = d1.components[:2]
    lead2 = d2.components[:2]
    rows: list[tuple[int, float, float, float, float]] = []
    for tau in taus:
        try:
            check_lag(d1.t, tau)
        except CorrelationError as exc:
            raise PcaError(str(exc)) from exc
        k = lagged_product(lead1, lead2, tau)
        rows.append((tau, float(k[0, 0]), float(k[1, 1]), float(k[0, 1]), float(k[1, 0])))
    return rows


# ============================================================================
# Autocorrelation diagnostics
# ============================================================================


def autocorr(series: ArrayLike, max_lag: int) -> NDArray[np.float64]:
    """Autocorrelation a(tau) for tau = 1 .. max_lag.

    a(tau) = (1/(T-tau)) sum_t x_t x_{t+tau} / var, with var = mean(x^2).

    Raises:
        PcaError: Non-centered series, zero variance or max_lag >= T/2
    """
    x = np.asarray(series, dtype=np.float64).reshape(-1)
    t = x.size
    if max_lag < 1 or 2 * max_lag >= t:
        raise PcaError(f"max_lag must be in [1, T/2), got {max_lag} for T = {t}")
    variance = float(np.mean(x**2))
    if variance == 0.0:
        raise PcaError("autocorrelation of a zero-variance series")
    if abs(float(x.mean())) > 1e-8 * math.sqrt(variance):
        raise PcaError("autocorrelation needs a centered series (mean 0)")
    return np.array([np.dot(x[: t - lag], x[lag:]) / (t - lag) for lag in range(1, max_lag + 1)]) / variance


def confidence_band(t: int, level: Literal["three_sigma"] = "three_sigma") -> float:
    """Half-width 3/sqrt(T) of the 99.7% band for a white-noise autocorrelation."""
    if t < 2:
        raise PcaError(f"confidence band needs T >= 2, got {t}")
    if level != "three_sigma":
        raise PcaError(f"unsupported confidence level {level!r}")
    return 3.0 / math.sqrt(t)


def effective_T(series_set: Sequence[ArrayLike], max_lag: int | None = None) -> float:
    """Average effective sample size T / g over a set of series.

    The inefficiency g = 1 + 2 * sum a(tau) runs over tau = 1 .. L, where L is
    the first lag whose autocorrelation is inside the 3/sqrt(T) band (max_lag
    if none is). g is floored at 1, so each estimate lies in [1, T].

    Args:
        series_set: Centered series of common or differing lengths
        max_lag: Longest lag considered; default (T - 1) // 2 per series

    Raises:
        PcaError: Empty set or invalid series
    """
    if len(series_set) == 0:
        raise PcaError("effective T of an empty series set")
    estimates: list[float] = []
    for series in series_set:
        x = np.asarray(series, dtype=np.float64).reshape(-1)
        t = x.size
        lags = max_lag if max_lag is not None else (t - 1) // 2
        a = autocorr(x, lags)
        inside = np.flatnonzero(np.abs(a) < confidence_band(t))
        cutoff = int(inside[0]) + 1 if inside.size else lags
        g = max(1.0, 1.0 + 2.0 * float(a[:cutoff].sum()))
        estimates.append(max(1.0, t / g))
    return float(np.mean(estimates))
