"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Resampling experiments and synthetic panels.

Bootstrap pooling of k(tau) spectra over random asset subsets, sliding
window robustness scans of lambda_MAX, time reshuffling that destroys
cross-panel and serial structure, and generators for the Gaussian null
ensemble and a lagged factor model.

Every random draw comes from a PCG64 stream seeded with
SeedSequence([seed, index]), so a run is reproducible from its seed and
independent of the thread count.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from asymspec.corrmat import check_lag, lagged_cross
from asymspec.eig import ComplexSpectrum, eig_general
from asymspec.exceptions import CorrelationError, ResampleError
from asymspec.ingest import ReturnPanel, standardize, synthetic_dates
from asymspec.pca import decompose, pc_lagged_cross
from asymspec.utils import map_ordered

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

Space = Literal["returns", "principal_components"]


def iteration_rng(seed: int, index: int) -> np.random.Generator:
    """PCG64 generator for iteration index of a run seeded with seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def derive_seed(seed: int, index: int) -> int:
    """64-bit integer seed of iteration index, for handing to another run."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, slots=True)
class BootstrapSpec:
    """How many subset draws to pool, of what size, from which seed."""

    iterations: int
    subset_size: int
    rng_seed: int

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ResampleError(f"iterations must be >= 1, got {self.iterations}")
        if self.subset_size < 2:
            raise ResampleError(f"subset size must be >= 2, got {self.subset_size}")


@dataclass(frozen=True, slots=True)
class EnsembleResult:
    """Eigenvalues pooled over all bootstrap iterations, in iteration order."""

    pooled: ComplexSpectrum
    per_iteration_maxeig: tuple[complex, ...]
    spec: BootstrapSpec

    def summary(self) -> dict[str, Any]:
        moduli = np.abs(np.array(self.per_iteration_maxeig))
        return {
            "iterations": self.spec.iterations,
            "subset_size": self.spec.subset_size,
            "seed": self.spec.rng_seed,
            "pooled_count": len(self.pooled),
            "maxeig_abs_mean": float(moduli.mean()),
            "maxeig_abs_std": float(moduli.std(ddof=1)) if moduli.size > 1 else 0.0,
            "maxeig_abs_min": float(moduli.min()),
            "maxeig_abs_max": float(moduli.max()),
        }


def _require_same_t(r1: ReturnPanel, r2: ReturnPanel) -> None:
    if r1.t != r2.t:
        raise ResampleError(f"panels have different lengths: {r1.t} vs {r2.t}")


def bootstrap_spectra(
    r1: ReturnPanel,
    r2: ReturnPanel,
    tau: int,
    spec: BootstrapSpec,
    space: Space = "returns",
    *,
    threads: int = 1,
) -> EnsembleResult:
    """Pool k(tau) spectra over random asset subsets.

    Each iteration draws, independently for each system, subset_size rows
    without replacement (kept in original order), builds k(tau) on them, or
    k_e(tau) of their principal components when space is
    "principal_components", and appends its eigenvalues to the pool.

    Raises:
        ResampleError: Subset larger than a panel, or different T
        CorrelationError, PcaError, EigenError: Propagated from the pipeline
    """
    _require_same_t(r1, r2)
    if spec.subset_size > min(r1.n, r2.n):
        raise ResampleError(f"subset size {spec.subset_size} exceeds panel size {min(r1.n, r2.n)}")
    if space not in ("returns", "principal_components"):
        raise ResampleError(f"unknown bootstrap space {space!r}")
    check_lag(r1.t, tau)

    def one(index: int) -> ComplexSpectrum:
        rng = iteration_rng(spec.rng_seed, index)
        rows1 = np.sort(rng.choice(r1.n, size=spec.subset_size, replace=False))
        rows2 = np.sort(rng.choice(r2.n, size=spec.subset_size, replace=False))
        s1, s2 = r1.subset(rows1.tolist()), r2.subset(rows2.tolist())
        if space == "principal_components":
            d1, d2 = decompose(s1), decompose(s2)
            k = pc_lagged_cross(d1, d2, tau)
            dims = (d1.kept, r1.t, tau)
        else:
            k = lagged_cross(s1, s2, tau)
            dims = (spec.subset_size, r1.t, tau)
        return eig_general(k.entries, source_dims=dims)

    spectra = map_ordered(one, range(spec.iterations), threads)
    logger.debug("Pooled %d bootstrap spectra at tau=%d", len(spectra), tau)
    return EnsembleResult(
        ComplexSpectrum.pooled(spectra),
        tuple(s.max_modulus() for s in spectra),
        spec,
    )


@dataclass(frozen=True, slots=True)
class WindowPoint:
    """lambda_MAX of k(tau) on one window [start, start + window_T)."""

    start: int
    tau: int
    lambda_max: complex


def sliding_windows(
    r1: ReturnPanel,
    r2: ReturnPanel,
    tau_set: Sequence[int],
    window_t: int,
    starts: Sequence[int],
    *,
    threads: int = 1,
) -> tuple[list[WindowPoint], dict[int, tuple[float, float]]]:
    """lambda_MAX(tau) on overlapping windows of the two panels.

    Each window is re-standardized before k(tau) is built. Starts are
    0-based column offsets.

    Returns:
        Per-(start, tau) points in input order, and for each tau the mean
        and sample standard deviation of |lambda_MAX| over windows

    Raises:
        ResampleError: A window outside the panels, or an invalid lag
    """
    _require_same_t(r1, r2)
    if not starts or not tau_set:
        raise ResampleError("sliding windows need at least one start and one lag")
    for start in starts:
        if start < 0 or start + window_t > r1.t:
            raise ResampleError(f"window [{start}, {start + window_t}) outside panel of length {r1.t}")
    for tau in tau_set:
        try:
            check_lag(window_t, tau)
        except CorrelationError as exc:
            raise ResampleError(str(exc)) from exc

    def one(start: int) -> list[WindowPoint]:
        w1 = standardize(r1.window(start, window_t))
        w2 = standardize(r2.window(start, window_t))
        return [
            WindowPoint(start, tau, eig_general(lagged_cross(w1, w2, tau).entries).max_modulus())
            for tau in tau_set
        ]

    points = [p for chunk in map_ordered(one, list(starts), threads) for p in chunk]
    summary: dict[int, tuple[float, float]] = {}
    for tau in tau_set:
        moduli = np.array([abs(p.lambda_max) for p in points if p.tau == tau])
        spread = float(moduli.std(ddof=1)) if moduli.size > 1 else 0.0
        summary[tau] = (float(moduli.mean()), spread)
    return points, summary


def reshuffle_panels(r1: ReturnPanel, r2: ReturnPanel, seed: int) -> tuple[ReturnPanel, ReturnPanel]:
    """Permute the time axis of each panel with its own random permutation.

    All rows of a panel share one permutation, so its equal-time Pearson
    matrix and row moments are unchanged; cross-panel and serial structure
    are destroyed. Dates are kept in place.
    """
    _require_same_t(r1, r2)
    perm1 = iteration_rng(seed, 0).permutation(r1.t)
    perm2 = iteration_rng(seed, 1).permutation(r2.t)
    return r1.with_values(r1.values[:, perm1]), r2.with_values(r2.values[:, perm2])


# ============================================================================
# Synthetic panels
# ============================================================================


def _panel(values: NDArray[np.float64], label: str) -> ReturnPanel:
    n, t = values.shape
    raw = ReturnPanel(
        values,
        tuple(f"{label}{i + 1:03d}" for i in range(n)),
        synthetic_dates(t),
        system_label=label,
    )
    return standardize(raw)


def generate_null(n: int, t: int, seed: int) -> tuple[ReturnPanel, ReturnPanel]:
    """Two independent standardized N x T panels of i.i.d. Gaussian noise."""
    if n < 2 or t < 2:
        raise ResampleError(f"null panels need n >= 2 and t >= 2, got {n}x{t}")
    rng = iteration_rng(seed, 0)
    return _panel(rng.standard_normal((n, t)), "A"), _panel(rng.standard_normal((n, t)), "B")


def _ar1(rng: np.random.Generator, shape: tuple[int, ...], phi: float) -> NDArray[np.float64]:
    """Unit-variance stationary AR(1) series along the last axis."""
    shocks = rng.standard_normal(shape)
    if phi == 0.0:
        return shocks
    out = np.empty_like(shocks)
    out[..., 0] = shocks[..., 0]
    scale = math.sqrt(1.0 - phi**2)
    for step in range(1, shape[-1]):
        out[..., step] = phi * out[..., step - 1] + scale * shocks[..., step]
    return out


def generate_factor_model(
    n: int,
    t: int,
    g_within: float,
    g_cross: float,
    lag: int,
    seed: int,
    *,
    g_sync: float = 0.0,
    g_anti: float = 0.0,
    phi: float = 0.0,
) -> tuple[ReturnPanel, ReturnPanel]:
    """Two panels driven by a global factor that reaches system 2 with a lag.

    System 1: R1 = g_within F + g_anti H + s1 eps1.
    System 2: R2 = g_within G - g_anti H + s2 eps2, where
    G_t = g_sync F_t + g_cross F_(t - lag) + sqrt(1 - g_sync^2 - g_cross^2) xi_t.

    F, H and xi are unit-variance factors shared by all assets, eps are
    idiosyncratic; s1, s2 complete each asset's variance to one. phi turns
    every factor and idiosyncratic series into an AR(1) process. Both panels
    are standardized.

    Cross-system couplings are products of loadings: the mean correlation at
    the planted lag is g_within^2 g_cross, so g_within = 0 decouples the
    systems whatever g_cross is.

    Raises:
        ResampleError: Loadings outside [0, 1), infeasible variance budgets,
            |phi| >= 1 or a lag that leaves too few observations
    """
    if n < 2 or t < 2:
        raise ResampleError(f"factor panels need n >= 2 and t >= 2, got {n}x{t}")
    for name, value in (("g_within", g_within), ("g_cross", g_cross), ("g_sync", g_sync), ("g_anti", g_anti)):
        if not 0.0 <= value < 1.0:
            raise ResampleError(f"{name} must be in [0, 1), got {value}")
    if g_sync**2 + g_cross**2 >= 1.0:
        raise ResampleError("g_sync^2 + g_cross^2 must be < 1")
    if g_within**2 + g_anti**2 >= 1.0:
        raise ResampleError("g_within^2 + g_anti^2 must be < 1")
    if not -1.0 < phi < 1.0:
        raise ResampleError(f"phi must be in (-1, 1), got {phi}")
    if lag < 0 or lag >= t - 1:
        raise ResampleError(f"lag must be in [0, T - 1), got {lag}")

    rng = iteration_rng(seed, 0)
    # One extra history of length lag so F_(t - lag) exists for every t
    factor = _ar1(rng, (t + lag,), phi)
    f_now = factor[lag:]
    f_lagged = factor[: t]
    xi = _ar1(rng, (t,), phi)
    anti = _ar1(rng, (t,), phi)
    g = g_sync * f_now + g_cross * f_lagged + math.sqrt(1.0 - g_sync**2 - g_cross**2) * xi

    noise = math.sqrt(1.0 - g_within**2 - g_anti**2)
    eps1 = _ar1(rng, (n, t), phi)
    eps2 = _ar1(rng, (n, t), phi)
    r1 = g_within * f_now + g_anti * anti + noise * eps1
    r2 = g_within * g - g_anti * anti + noise * eps2
    logger.debug("Generated factor panels %dx%d (lag=%d, phi=%s)", n, t, lag, phi)
    return _panel(r1, "A"), _panel(r2, "B")
