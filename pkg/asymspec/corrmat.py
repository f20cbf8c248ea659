"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Correlation matrix construction.

Symmetric Pearson matrices of one market, lagged asymmetric matrices k(tau)
between two markets, the rank-one mean-field approximation of k(tau), and
the 2N x 2N joint matrix of both markets stacked together.

Lag convention: for tau >= 0 system 2 is read tau steps ahead of system 1;
for tau < 0 the shift moves onto system 1, so that
lagged_cross(r1, r2, tau) == lagged_cross(r2, r1, -tau).T.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from asymspec.eig import ComplexSpectrum, eig_general, eig_symmetric
from asymspec.exceptions import CorrelationError
from asymspec.utils import map_ordered

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray

    from asymspec.ingest import ReturnPanel

logger = logging.getLogger(__name__)

_BOUND_SLACK = 1e-9


def _frozen(a: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, slots=True)
class SymCorrMatrix:
    """Pearson matrix c = R R^T / T of one standardized panel."""

    entries: NDArray[np.float64]
    source_label: str = ""

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise CorrelationError(f"correlation matrix must be square, got {entries.shape}")
        if np.abs(entries - entries.T).max() > 1e-12:
            raise CorrelationError("Pearson matrix is not symmetric")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, slots=True)
class AsymCorrMatrix:
    """Lagged cross-correlation matrix k(tau) between two systems.

    With globally standardized rows and the T-|tau| divisor, Cauchy-Schwarz
    bounds every entry by T / (T - |tau|), which is 1 at tau = 0.
    """

    entries: NDArray[np.float64]
    lag: int
    effective_T: int
    source_labels: tuple[str, str] = ("", "")

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise CorrelationError(f"k(tau) must be square, got {entries.shape}")
        if self.effective_T < 2:
            raise CorrelationError(f"effective T must be >= 2, got {self.effective_T}")
        bound = (self.effective_T + abs(self.lag)) / self.effective_T + _BOUND_SLACK
        if entries.size and np.abs(entries).max() > bound:
            raise CorrelationError(f"k(tau) entry exceeds the Cauchy-Schwarz bound {bound:.6g}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "source_labels", tuple(self.source_labels))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, slots=True)
class JointCorrMatrix:
    """Pearson matrix of the 2N x T stack of both systems.

    Diagonal blocks are each system's Pearson matrix; the upper off-diagonal
    block is k(0) and the lower one its transpose.
    """

    entries: NDArray[np.float64]
    block_size: int

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        n = self.block_size
        if entries.shape != (2 * n, 2 * n):
            raise CorrelationError(f"joint matrix must be {2 * n}x{2 * n}, got {entries.shape}")
        if np.abs(entries[:n, n:] - entries[n:, :n].T).max() > 1e-12:
            raise CorrelationError("joint matrix off-diagonal blocks are not transposes")
        object.__setattr__(self, "entries", entries)

    @property
    def cross_block(self) -> NDArray[np.float64]:
        return self.entries[: self.block_size, self.block_size :]


@dataclass(frozen=True, slots=True)
class MaxEigPoint:
    """Largest-modulus eigenvalue of k(tau) next to its mean-field predictor."""

    tau: int
    lambda_max: complex
    kbar_n: float

    @property
    def abs_lambda(self) -> float:
        return abs(self.lambda_max)

    @property
    def is_real(self) -> bool:
        return self.lambda_max.imag == 0.0


@dataclass(frozen=True, slots=True)
class JointMode:
    """One eigenvector of the joint matrix split into its two system halves."""

    rank: int
    eigenvalue: float
    variance_share: float
    first: NDArray[np.float64]
    second: NDArray[np.float64]

    @property
    def means(self) -> tuple[float, float]:
        return float(self.first.mean()), float(self.second.mean())

    @property
    def same_sign(self) -> bool:
        """Both halves pull the same way (a global mode)."""
        m1, m2 = self.means
        return m1 * m2 > 0

    @property
    def opposite_sign(self) -> bool:
        """The halves pull in opposite directions (an anti-phase mode)."""
        m1, m2 = self.means
        return m1 * m2 < 0

    def summary(self) -> dict[str, Any]:
        m1, m2 = self.means
        return {
            "rank": self.rank,
            "eigenvalue": float(self.eigenvalue),
            "variance_share": float(self.variance_share),
            "system1": {
                "positive": int((self.first > 0).sum()),
                "negative": int((self.first < 0).sum()),
                "mean": m1,
            },
            "system2": {
                "positive": int((self.second > 0).sum()),
                "negative": int((self.second < 0).sum()),
                "mean": m2,
            },
            "same_sign": self.same_sign,
            "opposite_sign": self.opposite_sign,
        }


# ============================================================================
# Helpers
# ============================================================================


def _require_standardized(*panels: ReturnPanel) -> None:
    for panel in panels:
        if not panel.standardized:
            raise CorrelationError(f"panel {panel.system_label!r} must be standardized")


def _require_pair(r1: ReturnPanel, r2: ReturnPanel) -> None:
    if r1.n != r2.n or r1.t != r2.t:
        raise CorrelationError(f"dimension mismatch: {r1.n}x{r1.t} vs {r2.n}x{r2.t}")


def check_lag(t: int, tau: int) -> None:
    """Raise unless |tau| < T - 1 (at least two overlapping observations)."""
    if abs(tau) >= t - 1:
        raise CorrelationError(f"|tau| = {abs(tau)} too large for T = {t} (need |tau| < T - 1)")


def lagged_product(
    a: NDArray[np.float64],
    b: NDArray[np.float64],
    tau: int,
) -> NDArray[np.float64]:
    """(1/(T-|tau|)) sum_t a[i, t] b[j, t+tau] over the overlapping window.

    Negative tau shifts the window onto a.
    """
    t = a.shape[1]
    lag = abs(tau)
    if tau >= 0:
        left, right = a[:, : t - lag], b[:, lag:]
    else:
        left, right = a[:, lag:], b[:, : t - lag]
    return np.asarray(left @ right.T / (t - lag), dtype=np.float64)


# ============================================================================
# Operations
# ============================================================================


def pearson(r: ReturnPanel) -> SymCorrMatrix:
    """Equal-time Pearson matrix (1/T) R R^T of a standardized panel.

    Raises:
        CorrelationError: Non-standardized input
    """
    _require_standardized(r)
    c = r.values @ r.values.T / r.t
    return SymCorrMatrix(0.5 * (c + c.T), r.system_label)


def lagged_cross(r1: ReturnPanel, r2: ReturnPanel, tau: int) -> AsymCorrMatrix:
    """Asymmetric correlation matrix k(tau) between two standardized panels.

    Entry (i, j) is (1/(T-|tau|)) sum_t R1[i, t] R2[j, t+tau]; rows are not
    re-standardized on the truncated window.

    Raises:
        CorrelationError: Non-standardized input, dimension mismatch or
            |tau| >= T - 1
    """
    _require_standardized(r1, r2)
    _require_pair(r1, r2)
    check_lag(r1.t, tau)
    return AsymCorrMatrix(
        lagged_product(r1.values, r2.values, tau),
        lag=tau,
        effective_T=r1.t - abs(tau),
        source_labels=(r1.system_label, r2.system_label),
    )


def mean_corr(k: AsymCorrMatrix) -> float:
    """Average of all N^2 entries of k(tau)."""
    return float(k.entries.mean())


def mean_field_spectrum(kbar: float, n: int) -> ComplexSpectrum:
    """Spectrum of the mean-field matrix kbar * E_N: kbar*N once, then N-1 zeros.

    Raises:
        CorrelationError: n < 1
    """
    if n < 1:
        raise CorrelationError(f"mean-field spectrum needs n >= 1, got {n}")
    values = np.zeros(n, dtype=np.complex128)
    values[0] = kbar * n
    return ComplexSpectrum(values)


def joint_matrix(r1: ReturnPanel, r2: ReturnPanel) -> JointCorrMatrix:
    """Pearson matrix of the stacked 2N x T panel [R1; R2].

    Raises:
        CorrelationError: Non-standardized input or dimension mismatch
    """
    _require_standardized(r1, r2)
    _require_pair(r1, r2)
    k = lagged_cross(r1, r2, 0).entries
    entries = np.block([[pearson(r1).entries, k], [k.T, pearson(r2).entries]])
    return JointCorrMatrix(entries, r1.n)


def joint_modes(joint: JointCorrMatrix, top: int = 3) -> list[JointMode]:
    """Top eigenvectors of the joint matrix, each split into system halves."""
    if top < 1:
        raise CorrelationError(f"top must be >= 1, got {top}")
    n = joint.block_size
    eigen = eig_symmetric(joint.entries)
    modes: list[JointMode] = []
    for i in range(min(top, 2 * n)):
        vector = eigen.eigenvectors[:, i]
        modes.append(
            JointMode(
                rank=i + 1,
                eigenvalue=float(eigen.eigenvalues[i]),
                variance_share=float(eigen.eigenvalues[i]) / (2 * n),
                first=vector[:n].copy(),
                second=vector[n:].copy(),
            )
        )
    return modes


def maxeig_scan(
    r1: ReturnPanel,
    r2: ReturnPanel,
    tau_range: Iterable[int],
    *,
    threads: int = 1,
) -> list[MaxEigPoint]:
    """lambda_MAX(tau) and the mean-field predictor kbar(tau) * N for each tau.

    Raises:
        CorrelationError: A lag outside the admissible range
        EigenError: Propagated from the eigensolver
    """
    _require_standardized(r1, r2)
    _require_pair(r1, r2)
    taus = list(tau_range)
    for tau in taus:
        check_lag(r1.t, tau)

    def point(tau: int) -> MaxEigPoint:
        k = lagged_cross(r1, r2, tau)
        spectrum = eig_general(k.entries, source_dims=(r1.n, r1.t, tau))
        return MaxEigPoint(tau, spectrum.max_modulus(), mean_corr(k) * k.n)

    points = map_ordered(point, taus, threads)
    logger.debug("Scanned %d lags", len(points))
    return points
