"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Random-matrix null densities and their fit to empirical spectra.

For two independent N x T Gaussian panels with q = T/N, the eigenvalues of
k(0) fill a disc of radius q^(-1/2) with planar density

    rho(lambda) = q^2 / (pi * sqrt((1 - q)^2 + 4 q^2 |lambda|^2)).

The radial density 2 pi x rho(x) describes eigenvalue moduli. At finite N
the hard edge is smoothed by a phenomenological erfc damping

    rho_eff(x) = 1/2 * rho_rad(x) * erfc(h (x - q^(-1/2))),

whose steepness h (and optionally q) is fitted by least squares against a
radial histogram. rho_eff is not renormalized; its integral deviation is
reported instead.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import integrate, optimize, special

from asymspec.eig import ComplexSpectrum
from asymspec.exceptions import FitError

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

# Parameter bounds of the least-squares fit
H_BOUNDS = (1.0, 1e4)
Q_BOUNDS = (0.1, 1e3)
# Log-spaced starting grids over the bounds, 0.05 decades apart
H_GRID_POINTS = 81
Q_GRID_POINTS = 81

MIN_BINS = 5
MAX_DEFAULT_BINS = 100
MIN_EIGENVALUES = 10
EXCLUSION_FACTOR = 3.0

# 99% quantile of the Kolmogorov distribution
KOLMOGOROV_99 = 1.63
CDF_GAP_FLOOR = 0.05

# erfc(h u) is below 1e-300 past u = 27/h; the integrand is negligible there
_TAIL_WIDTH = 27.0


def _check_q(q: float) -> None:
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")


def _radial_unclipped(x: NDArray[np.float64], q: float) -> NDArray[np.float64]:
    return np.asarray(2.0 * x * q**2 / np.sqrt((1.0 - q) ** 2 + 4.0 * q**2 * x**2))


def _effective(x: NDArray[np.float64], q: float, h: float) -> NDArray[np.float64]:
    return np.asarray(0.5 * _radial_unclipped(x, q) * special.erfc(h * (x - q**-0.5)))


def _as_output(values: NDArray[np.float64], like: ArrayLike) -> Any:
    return float(values) if np.ndim(like) == 0 else values


# ============================================================================
# Densities
# ============================================================================


def density_complex(lam: ArrayLike, q: float) -> Any:
    """Planar eigenvalue density of the null k(0) ensemble.

    Args:
        lam: Complex eigenvalue(s)
        q: Aspect ratio T/N

    Returns:
        Density value(s); exactly 0 outside the disc |lambda| <= q^(-1/2).
        A float for scalar input, an array otherwise.
    """
    _check_q(q)
    modulus = np.abs(np.asarray(lam, dtype=np.complex128))
    inside = q**2 / (math.pi * np.sqrt((1.0 - q) ** 2 + 4.0 * q**2 * modulus**2))
    return _as_output(np.where(modulus > q**-0.5, 0.0, inside), lam)


def density_radial(x: ArrayLike, q: float) -> Any:
    """Density of eigenvalue moduli, 2 pi x * density_complex(x, q).

    Integrates to 1 over [0, q^(-1/2)] for q >= 1.

    Raises:
        ValueError: Negative modulus or non-positive q
    """
    _check_q(q)
    xs = np.asarray(x, dtype=np.float64)
    if (xs < 0).any():
        raise ValueError("radial density needs x >= 0")
    return _as_output(2.0 * math.pi * xs * np.asarray(density_complex(xs, q)), x)


def density_effective(x: ArrayLike, p: DensityParams) -> Any:
    """erfc-smoothed radial density.

    The radial factor is evaluated from its formula for every x >= 0; the
    erfc factor alone supplies the cutoff.

    Raises:
        ValueError: Negative modulus
    """
    xs = np.asarray(x, dtype=np.float64)
    if (xs < 0).any():
        raise ValueError("effective density needs x >= 0")
    return _as_output(_effective(xs, p.q, p.h), x)


# ============================================================================
# Types
# ============================================================================


@dataclass(frozen=True, slots=True)
class DensityParams:
    """Parameters (q, h) of the effective radial density.

    Attributes:
        q: Aspect ratio T/N
        h: erfc edge steepness
        fit_residual: RMS residual over histogram bins, None when not fitted
        q_fixed: Whether q was held fixed during the fit
        at_bound: Whether a fitted parameter ended on its search bound
    """

    q: float
    h: float
    fit_residual: float | None = None
    q_fixed: bool = True
    at_bound: bool = False

    def __post_init__(self) -> None:
        if not (self.q > 0 and math.isfinite(self.q)):
            raise ValueError(f"q must be positive and finite, got {self.q}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"h must be positive and finite, got {self.h}")

    @property
    def support_radius(self) -> float:
        return float(self.q**-0.5)


@dataclass(frozen=True, slots=True)
class RadialHistogram:
    """Unit-area histogram of eigenvalue moduli.

    Attributes:
        bin_edges: Increasing edges starting at 0
        densities: Normalized height of each bin
        total_count: Eigenvalues that went into the bins
        n_excluded: Eigenvalues dropped as outliers before binning
        q_nominal: (T - |tau|)/N of the source matrices, when known
    """

    bin_edges: NDArray[np.float64]
    densities: NDArray[np.float64]
    total_count: int
    n_excluded: int = 0
    q_nominal: float | None = None

    def __post_init__(self) -> None:
        edges = np.array(self.bin_edges, dtype=np.float64)
        dens = np.array(self.densities, dtype=np.float64)
        if edges.ndim != 1 or edges.size != dens.size + 1:
            raise FitError("histogram needs len(bin_edges) == len(densities) + 1")
        if edges[0] != 0.0 or (np.diff(edges) <= 0).any():
            raise FitError("bin edges must start at 0 and increase")
        area = float((dens * np.diff(edges)).sum())
        if self.total_count > 0 and abs(area - 1.0) > 1e-9:
            raise FitError(f"histogram area is {area!r}, expected 1")
        for arr in (edges, dens):
            arr.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "densities", dens)

    @property
    def n_bins(self) -> int:
        return int(self.densities.size)

    @property
    def bin_centers(self) -> NDArray[np.float64]:
        return np.asarray(0.5 * (self.bin_edges[:-1] + self.bin_edges[1:]))

    @property
    def bin_widths(self) -> NDArray[np.float64]:
        return np.diff(self.bin_edges)

    def cdf(self) -> NDArray[np.float64]:
        """Empirical CDF at every bin edge."""
        return np.concatenate([[0.0], np.cumsum(self.densities * self.bin_widths)])


@dataclass(frozen=True, slots=True)
class FitReport:
    """Goodness of a density fit against the histogram it was fitted to."""

    params: DensityParams
    q_nominal: float | None
    n_bins: int
    n_excluded: int
    total_count: int
    normalization_deviation: float
    sup_gap: float
    cdf_gap: float
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def cdf_threshold(self) -> float:
        return CDF_GAP_FLOOR + KOLMOGOROV_99 / math.sqrt(max(self.total_count, 1))

    @property
    def poor_fit(self) -> bool:
        return self.cdf_gap > self.cdf_threshold

    def to_dict(self) -> dict[str, Any]:
        report: dict[str, Any] = {
            "q_nominal": self.q_nominal,
            "q_fitted": self.params.q,
            "h_fitted": self.params.h,
            "q_fixed": self.params.q_fixed,
            "at_bound": self.params.at_bound,
            "residual": self.params.fit_residual,
            "n_bins": self.n_bins,
            "n_excluded": self.n_excluded,
            "total_count": self.total_count,
            "normalization_deviation": self.normalization_deviation,
            "sup_gap": self.sup_gap,
            "cdf_gap": self.cdf_gap,
            "cdf_threshold": self.cdf_threshold,
            "poor_fit": self.poor_fit,
        }
        report.update(self.extra)
        return report


# ============================================================================
# Histogramming
# ============================================================================


def radial_histogram(
    spectra: ComplexSpectrum | Sequence[ComplexSpectrum],
    bins: int | None = None,
    *,
    exclude: float | None = None,
    range_max: float | None = None,
) -> RadialHistogram:
    """Unit-area histogram of eigenvalue moduli over [0, range_max].

    Args:
        spectra: One spectrum or a list pooled in order
        bins: Bin count; default ceil(sqrt(n)) clipped to [5, 100]
        exclude: Modulus threshold above which eigenvalues are dropped;
            default 3 * q_nominal^(-1/2) when the source dims are known
        range_max: Upper edge; default the largest kept modulus

    Raises:
        FitError: Fewer than 5 bins or fewer than 10 eigenvalues after exclusion
    """
    pooled = spectra if isinstance(spectra, ComplexSpectrum) else ComplexSpectrum.pooled(spectra)
    moduli = pooled.moduli
    q_nominal = pooled.q_nominal

    if exclude is None and q_nominal is not None:
        exclude = EXCLUSION_FACTOR * q_nominal**-0.5
    kept = moduli if exclude is None else moduli[moduli <= exclude]
    if range_max is not None:
        kept = kept[kept <= range_max]
    n_excluded = int(moduli.size - kept.size)

    if kept.size < MIN_EIGENVALUES:
        raise FitError(f"too few eigenvalues to histogram: {kept.size} (need {MIN_EIGENVALUES})")
    if bins is None:
        bins = max(MIN_BINS, min(MAX_DEFAULT_BINS, math.ceil(math.sqrt(kept.size))))
    if bins < MIN_BINS:
        raise FitError(f"need at least {MIN_BINS} bins, got {bins}")

    top = float(range_max) if range_max is not None else float(kept.max())
    if top <= 0.0:
        top = 1.0
    densities, edges = np.histogram(kept, bins=bins, range=(0.0, top), density=True)
    if n_excluded:
        logger.debug("Excluded %d eigenvalues above |lambda| = %s", n_excluded, exclude)
    return RadialHistogram(edges, densities, int(kept.size), n_excluded, q_nominal)


# ============================================================================
# Fitting
# ============================================================================


def _near_bound(value: float, bounds: tuple[float, float]) -> bool:
    lo, hi = math.log10(bounds[0]), math.log10(bounds[1])
    u = math.log10(value)
    return u - lo < 1e-3 or hi - u < 1e-3


def _sse_grid(
    x: NDArray[np.float64], y: NDArray[np.float64], log_q: NDArray[np.float64], log_h: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Sum of squared residuals on the (log q, log h) grid, shape (len(log_q), len(log_h))."""
    q = 10.0 ** log_q[:, None, None]
    h = 10.0 ** log_h[None, :, None]
    radial = 2.0 * x * q**2 / np.sqrt((1.0 - q) ** 2 + 4.0 * q**2 * x**2)
    model = 0.5 * radial * special.erfc(h * (x - q**-0.5))
    return np.asarray(((model - y) ** 2).sum(axis=-1))


def _refine_log_h(sse_u: Callable[[float], float], grid: NDArray[np.float64], values: NDArray[np.float64]) -> float:
    """Bounded golden-section search between the neighbours of the best grid point."""
    best = int(np.argmin(values))
    lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]
    scalar = optimize.minimize_scalar(
        sse_u, bounds=(float(lo), float(hi)), method="bounded", options={"xatol": 1e-8, "maxiter": 500}
    )
    if not scalar.success:
        raise FitError(f"h fit did not converge: {scalar.message}")
    u = float(scalar.x)
    # The grid point itself can beat a refinement that settled on a bracket end
    return u if sse_u(u) <= values[best] else float(grid[best])


def fit_density(hist: RadialHistogram, q: float, *, free_q: bool = False) -> DensityParams:
    """Least-squares fit of density_effective to the histogram heights.

    Heights are compared at bin centers with equal weights, empty bins
    included. The residual surface has several basins in log h (and in
    log q), so every search starts from a coarse log-spaced grid over the
    whole parameter box. With q fixed, the best grid value of h is refined
    by a bounded golden-section search between its grid neighbours. With
    free_q, the best point of the (q, h) grid, or the fixed-q optimum when
    that is lower, seeds a bounded Nelder-Mead simplex in log space.

    Args:
        hist: Radial histogram
        q: Fixed q, or an extra starting point of a free fit
        free_q: Fit q jointly with h

    Returns:
        Fitted parameters with the RMS residual over bins. For q inside
        Q_BOUNDS a free fit is never worse than the fixed-q fit at q.

    Raises:
        FitError: The optimizer did not converge
    """
    _check_q(q)
    x = hist.bin_centers
    y = hist.densities

    def sse(h: float, qq: float) -> float:
        return float(((_effective(x, qq, h) - y) ** 2).sum())

    log_h = (math.log10(H_BOUNDS[0]), math.log10(H_BOUNDS[1]))
    h_grid = np.linspace(*log_h, H_GRID_POINTS)
    fixed_values = _sse_grid(x, y, np.array([math.log10(q)]), h_grid)[0]
    u = _refine_log_h(lambda v: sse(10.0**v, q), h_grid, fixed_values)
    h, q_fit = 10.0**u, q

    if free_q:
        log_q = (math.log10(Q_BOUNDS[0]), math.log10(Q_BOUNDS[1]))
        q_grid = np.linspace(*log_q, Q_GRID_POINTS)
        surface = _sse_grid(x, y, q_grid, h_grid)
        iq, ih = np.unravel_index(int(np.argmin(surface)), surface.shape)
        start = np.array([h_grid[ih], q_grid[iq]])
        if sse(h, q) < float(surface[iq, ih]):
            start = np.array([u, min(max(math.log10(q), log_q[0]), log_q[1])])
        result = optimize.minimize(
            lambda v: sse(10.0 ** v[0], 10.0 ** v[1]),
            start,
            method="Nelder-Mead",
            bounds=[log_h, log_q],
            options={"xatol": 1e-6, "fatol": 1e-10, "maxiter": 4000},
        )
        if not result.success:
            raise FitError(f"(h, q) fit did not converge: {result.message}")
        h, q_fit = 10.0 ** float(result.x[0]), 10.0 ** float(result.x[1])
        logger.debug("Free fit seeded at h=%.4g, q=%.4g", 10.0 ** start[0], 10.0 ** start[1])

    at_bound = _near_bound(h, H_BOUNDS) or (free_q and _near_bound(q_fit, Q_BOUNDS))
    if at_bound:
        logger.warning("Density fit ended on a parameter bound (h=%.6g, q=%.6g)", h, q_fit)

    residual = math.sqrt(sse(h, q_fit) / hist.n_bins)
    return DensityParams(q_fit, h, residual, q_fixed=not free_q, at_bound=at_bound)


def normalization_deviation(params: DensityParams) -> float:
    """Integral of the effective density over [0, inf) minus 1."""
    radius = params.support_radius
    total, _ = integrate.quad(
        lambda x: float(_effective(np.float64(x), params.q, params.h)),
        0.0,
        radius + _TAIL_WIDTH / params.h,
        points=[radius],
        limit=200,
    )
    return float(total) - 1.0


def model_cdf(edges: ArrayLike, params: DensityParams) -> NDArray[np.float64]:
    """Integral of the effective density from 0 to each edge."""
    bounds = np.asarray(edges, dtype=np.float64)
    radius = params.support_radius

    def piece(lo: float, hi: float) -> float:
        value, _ = integrate.quad(
            lambda x: float(_effective(np.float64(x), params.q, params.h)),
            lo,
            hi,
            points=[radius] if lo < radius < hi else None,
            limit=100,
        )
        return float(value)

    pieces = [piece(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
    return np.concatenate([[0.0], np.cumsum(pieces)])


def evaluate_fit(hist: RadialHistogram, params: DensityParams, **extra: Any) -> FitReport:
    """Goodness-of-fit report for params against hist.

    Args:
        hist: Histogram the parameters were fitted to (or an independent one)
        params: Density parameters
        **extra: Additional fields carried into the report dictionary
    """
    model = _effective(hist.bin_centers, params.q, params.h)
    return FitReport(
        params=params,
        q_nominal=hist.q_nominal,
        n_bins=hist.n_bins,
        n_excluded=hist.n_excluded,
        total_count=hist.total_count,
        normalization_deviation=normalization_deviation(params),
        sup_gap=float(np.abs(model - hist.densities).max()),
        cdf_gap=float(np.abs(model_cdf(hist.bin_edges, params) - hist.cdf()).max()),
        extra=dict(extra),
    )


def histogram_table(hist: RadialHistogram, params: DensityParams) -> list[tuple[float, float, float]]:
    """(bin_center, density, model_density) rows for export."""
    model = _effective(hist.bin_centers, params.q, params.h)
    return [(float(c), float(d), float(m)) for c, d, m in zip(hist.bin_centers, hist.densities, model)]


def sample_effective(params: DensityParams, size: int, seed: int) -> NDArray[np.float64]:
    """Draw moduli from the effective radial density by inverse CDF.

    The density is tabulated on a fine grid up to the point where the erfc
    tail vanishes and renormalized to unit mass before inversion.
    """
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    grid = np.linspace(0.0, params.support_radius + _TAIL_WIDTH / params.h, 200_001)
    cdf = integrate.cumulative_trapezoid(_effective(grid, params.q, params.h), grid, initial=0.0)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    return np.asarray(np.interp(rng.random(size), cdf, grid))
