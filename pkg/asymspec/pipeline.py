"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Subcommand pipelines.

Each cmd_* function runs one analysis end to end, writes its artifacts
into config.out and returns the run's headline metrics for the ledger.
Artifacts depend only on the configuration and seed.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any, cast

import numpy as np

from asymspec import corrmat, export, pca, resample, rmt
from asymspec.eig import ComplexSpectrum, eig_general, eig_symmetric, real_axis_count
from asymspec.exceptions import ConfigError, ValidationFailure
from asymspec.ingest import load_pair
from asymspec.utils import map_ordered

if TYPE_CHECKING:
    from collections.abc import Callable

    from asymspec.config import RunConfig
    from asymspec.ingest import PriceFormat, ReturnPanel

logger = logging.getLogger(__name__)

Metrics = dict[str, float]

MAXEIG_TAU_RANGE = (-50, 400)
PCA_TAU_RANGE = (0, 300)

# Lags at which the loading-matrix factorization is checked
IDENTITY_LAGS = (0, 1, 5)

# A fitted q below this share of nominal is flagged
Q_BELOW_NOMINAL = 0.9


def _load(config: RunConfig) -> tuple[ReturnPanel, ReturnPanel]:
    if config.a is None or config.b is None:
        raise ConfigError(f"{config.command} needs two input files")
    r1, r2 = load_pair(config.a, config.b, cast("PriceFormat", config.fmt))
    logger.info("Loaded panels %dx%d and %dx%d", r1.n, r1.t, r2.n, r2.t)
    return r1, r2


def _tau_range(config: RunConfig, default: tuple[int, int]) -> range:
    lo = default[0] if config.tau_min is None else config.tau_min
    hi = default[1] if config.tau_max is None else config.tau_max
    if lo > hi:
        raise ConfigError(f"empty lag range {lo}..{hi}")
    return range(lo, hi + 1)


def _fit(
    spectrum: ComplexSpectrum,
    q: float,
    *,
    bins: int | None,
    free_q: bool,
    **extra: Any,
) -> tuple[rmt.RadialHistogram, rmt.FitReport]:
    hist = rmt.radial_histogram(spectrum, bins)
    params = rmt.fit_density(hist, q, free_q=free_q)
    return hist, rmt.evaluate_fit(hist, params, **extra)


def _write_fit(config: RunConfig, prefix: str, hist: rmt.RadialHistogram, report: rmt.FitReport) -> None:
    out = config.out_dir
    export.write_csv(
        out / f"{prefix}radial_histogram.csv",
        ["bin_center", "density", "model_density"],
        rmt.histogram_table(hist, report.params),
    )
    export.write_json(out / f"{prefix}fit_report.json", report.to_dict())


# ============================================================================
# spectrum
# ============================================================================


def cmd_spectrum(config: RunConfig, *, threads: int = 1) -> Metrics:
    """Eigenvalue cloud of k(tau), its radial histogram and the density fit.

    Artifacts: eigenvalues.csv, radial_histogram.csv, fit_report.json and,
    when bootstrapping, ensemble_summary.json.
    """
    r1, r2 = _load(config)
    spec = resample.BootstrapSpec(config.boot, config.subset or min(r1.n, r2.n), config.seed)
    ensemble = resample.bootstrap_spectra(r1, r2, config.tau, spec, threads=threads)
    pooled = ensemble.pooled
    q_nominal = pooled.q_nominal or (r1.t - abs(config.tau)) / spec.subset_size

    hist, report = _fit(
        pooled,
        q_nominal,
        bins=config.bins,
        free_q=config.free_q,
        tau=config.tau,
        real_axis_count=real_axis_count(pooled),
        eigenvalue_count=len(pooled),
    )
    export.write_spectrum(config.out_dir / "eigenvalues.csv", pooled)
    _write_fit(config, "", hist, report)
    if config.boot > 1:
        export.write_json(config.out_dir / "ensemble_summary.json", ensemble.summary())
    if report.poor_fit:
        logger.warning("Bulk spectrum departs from the null density (cdf gap %.3g)", report.cdf_gap)

    return {
        "q_fitted": report.params.q,
        "h_fitted": report.params.h,
        "cdf_gap": report.cdf_gap,
        "lambda_max_abs": float(np.max(np.abs(ensemble.per_iteration_maxeig))),
    }


# ============================================================================
# maxeig
# ============================================================================


def cmd_maxeig(config: RunConfig, *, threads: int = 1) -> Metrics:
    """|lambda_MAX(tau)| next to the mean-field curve kbar(tau) * N.

    Artifacts: maxeig.csv and, with a window length, maxeig_windows.csv and
    maxeig_window_summary.csv.
    """
    r1, r2 = _load(config)
    taus = _tau_range(config, MAXEIG_TAU_RANGE)
    points = corrmat.maxeig_scan(r1, r2, taus, threads=threads)
    export.write_csv(
        config.out_dir / "maxeig.csv",
        ["tau", "abs_lambda_max", "re", "im", "kbar_N"],
        ((p.tau, p.abs_lambda, p.lambda_max.real, p.lambda_max.imag, p.kbar_n) for p in points),
    )

    if config.window is not None:
        starts = config.starts or (0,)
        window_points, summary = resample.sliding_windows(r1, r2, list(taus), config.window, starts, threads=threads)
        export.write_csv(
            config.out_dir / "maxeig_windows.csv",
            ["start", "tau", "abs_lambda_max", "re", "im"],
            (
                (p.start, p.tau, abs(p.lambda_max), p.lambda_max.real, p.lambda_max.imag)
                for p in window_points
            ),
        )
        export.write_csv(
            config.out_dir / "maxeig_window_summary.csv",
            ["tau", "mean_abs_lambda_max", "std_abs_lambda_max"],
            ((tau, mean, std) for tau, (mean, std) in summary.items()),
        )

    peak = max(points, key=lambda p: p.abs_lambda)
    return {"peak_tau": float(peak.tau), "lambda_max_abs": peak.abs_lambda, "kbar_n": peak.kbar_n}


# ============================================================================
# pca
# ============================================================================


def _identity_residuals(
    r1: ReturnPanel,
    r2: ReturnPanel,
    d1: pca.PcaDecomposition,
    d2: pca.PcaDecomposition,
) -> dict[str, float | None]:
    """Max-abs residuals of the orthonormality, reconstruction and factorization identities."""
    ortho = max(
        float(np.abs(d.components @ d.components.T / d.t - np.eye(d.kept)).max()) for d in (d1, d2)
    )
    if not (d1.is_full and d2.is_full):
        return {"orthonormality_residual": ortho, "reconstruction_residual": None, "factorization_residual": None}

    recon = max(float(np.abs(pca.reconstruct(d).values - r.values).max()) for d, r in ((d1, r1), (d2, r2)))
    w1 = pca.loading_matrix(d1).entries
    w2 = pca.loading_matrix(d2).entries
    factor = 0.0
    for tau in IDENTITY_LAGS:
        if abs(tau) >= r1.t - 1:
            continue
        k = corrmat.lagged_cross(r1, r2, tau).entries
        ke = pca.pc_lagged_cross(d1, d2, tau).entries
        factor = max(factor, float(np.abs(k - w1 @ ke @ w2.T).max()))
    return {"orthonormality_residual": ortho, "reconstruction_residual": recon, "factorization_residual": factor}


def cmd_pca(config: RunConfig, *, threads: int = 1) -> Metrics:
    """Principal components, their lagged correlations and PC-space spectrum.

    Artifacts: pc_panel_1.csv/.json, pc_panel_2.csv/.json,
    pc_correlations.csv, autocorrelation.csv, pc_eigenvalues.csv,
    pc_radial_histogram.csv, pc_fit_report.json and pca_report.json.
    """
    r1, r2 = _load(config)
    if config.reshuffle:
        r1, r2 = resample.reshuffle_panels(r1, r2, config.seed)
    d1, d2 = map_ordered(pca.decompose, [r1, r2], min(threads, 2))
    out = config.out_dir

    export.write_panel(d1.as_panel(), out / "pc_panel_1.csv")
    export.write_panel(d2.as_panel(), out / "pc_panel_2.csv")

    lead = min(2, d1.kept, d2.kept)
    taus = [tau for tau in _tau_range(config, PCA_TAU_RANGE) if abs(tau) < r1.t - 1]
    if lead == 2:
        export.write_csv(
            out / "pc_correlations.csv",
            ["tau", "k11", "k22", "k12", "k21"],
            pca.pc_correlation_scan(d1, d2, taus),
        )

    series = [d.components[i] for d in (d1, d2) for i in range(lead)]
    max_lag = min(max((abs(t) for t in taus), default=1), (r1.t - 1) // 2)
    band = pca.confidence_band(r1.t)
    t_eff: float | None = None
    if max_lag >= 1:
        curves = [pca.autocorr(s, max_lag) for s in series]
        names = [f"sys{j + 1}_pc{i + 1}" for j in range(2) for i in range(lead)]
        export.write_csv(
            out / "autocorrelation.csv",
            ["lag", *names, "band"],
            ((lag, *(float(c[lag - 1]) for c in curves), band) for lag in range(1, max_lag + 1)),
        )
        t_eff = pca.effective_T(series, max_lag)

    subset = config.subset or min(r1.n, r2.n)
    spec = resample.BootstrapSpec(config.boot, subset, config.seed)
    ensemble = resample.bootstrap_spectra(r1, r2, config.tau, spec, "principal_components", threads=threads)
    pooled = ensemble.pooled
    q_nominal = pooled.q_nominal or (r1.t - abs(config.tau)) / subset
    hist, report = _fit(pooled, q_nominal, bins=config.bins, free_q=True, tau=config.tau)
    export.write_spectrum(out / "pc_eigenvalues.csv", pooled)
    _write_fit(config, "pc_", hist, report)

    q_below = report.params.q < Q_BELOW_NOMINAL * q_nominal
    if q_below:
        logger.warning("Fitted q %.3f is below nominal %.3f: serial correlation suspected", report.params.q, q_nominal)

    summary: dict[str, Any] = {
        "kept": [d1.kept, d2.kept],
        "variance_shares": [[float(v) for v in d.variance_shares[:5]] for d in (d1, d2)],
        "discarded_mass": [d1.discarded_mass, d2.discarded_mass],
        "reshuffled": config.reshuffle,
        "T": r1.t,
        "T_effective": t_eff,
        "confidence_band": band,
        "q_nominal": q_nominal,
        "q_fitted": report.params.q,
        "q_below_nominal": q_below,
    }
    summary.update(_identity_residuals(r1, r2, d1, d2))
    export.write_json(out / "pca_report.json", summary)

    return {
        "q_fitted": report.params.q,
        "q_nominal": q_nominal,
        "h_fitted": report.params.h,
        "first_variance_share_1": float(d1.variance_shares[0]),
        "first_variance_share_2": float(d2.variance_shares[0]),
    }


# ============================================================================
# joint
# ============================================================================


def cmd_joint(config: RunConfig, *, threads: int = 1) -> Metrics:
    """Spectrum and leading modes of the 2N x 2N joint correlation matrix.

    Artifacts: joint_eigenvalues.csv, joint_vector_<rank>.csv for each of
    the top modes and joint_modes.json.
    """
    del threads
    r1, r2 = _load(config)
    joint = corrmat.joint_matrix(r1, r2)
    eigen = eig_symmetric(joint.entries)
    out = config.out_dir

    export.write_csv(
        out / "joint_eigenvalues.csv",
        ["rank", "eigenvalue", "variance_share"],
        ((i + 1, float(lam), float(lam) / (2 * r1.n)) for i, lam in enumerate(eigen.eigenvalues)),
    )
    modes = corrmat.joint_modes(joint, config.top)
    for mode in modes:
        export.write_csv(
            out / f"joint_vector_{mode.rank}.csv",
            ["index", "ticker_1", "component_1", "ticker_2", "component_2"],
            (
                (i, r1.tickers[i], float(mode.first[i]), r2.tickers[i], float(mode.second[i]))
                for i in range(r1.n)
            ),
        )
    export.write_json(out / "joint_modes.json", {"N": r1.n, "T": r1.t, "modes": [m.summary() for m in modes]})

    return {
        "lambda_1": float(eigen.eigenvalues[0]),
        "lambda_2": float(eigen.eigenvalues[1]) if eigen.eigenvalues.size > 1 else 0.0,
        "global_mode": float(modes[0].same_sign),
    }


# ============================================================================
# mc-validate
# ============================================================================


def cmd_mc_validate(config: RunConfig, *, threads: int = 1) -> Metrics:
    """Monte Carlo self-test of the whole numerical stack.

    Pools the k(tau) spectra of config.reps null panel pairs, fits h at the
    nominal q (or at q_overlay when given) and fails when the fitted
    density does not describe the histogram.

    Artifacts: mc_eigenvalues.csv, mc_radial_histogram.csv and
    mc_fit_report.json, written before any failure is raised.

    Raises:
        ValidationFailure: Goodness-of-fit check failed
    """
    corrmat.check_lag(config.t, config.tau)

    def one(index: int) -> ComplexSpectrum:
        r1, r2 = resample.generate_null(config.n, config.t, resample.derive_seed(config.seed, index))
        return eig_general(corrmat.lagged_cross(r1, r2, config.tau).entries, source_dims=(config.n, config.t, config.tau))

    pooled = ComplexSpectrum.pooled(map_ordered(one, range(config.reps), threads))
    q_nominal = (config.t - abs(config.tau)) / config.n
    q_model = config.q_overlay if config.q_overlay is not None else q_nominal
    radius = q_nominal**-0.5
    hist, report = _fit(
        pooled,
        q_model,
        bins=config.bins,
        free_q=False,
        reps=config.reps,
        seed=config.seed,
        tau=config.tau,
        share_within_support=float(np.mean(pooled.moduli <= 1.1 * radius)),
        real_axis_count=real_axis_count(pooled),
    )
    export.write_spectrum(config.out_dir / "mc_eigenvalues.csv", pooled)
    _write_fit(config, "mc_", hist, report)

    if report.poor_fit:
        raise ValidationFailure(
            f"null spectrum does not match the density model: cdf gap {report.cdf_gap:.4f} "
            f"exceeds {report.cdf_threshold:.4f} (q={q_model:.4g}, h={report.params.h:.4g})"
        )
    return {"h_fitted": report.params.h, "cdf_gap": report.cdf_gap, "q_nominal": q_nominal}


COMMANDS: dict[str, Callable[..., Metrics]] = {
    "spectrum": cmd_spectrum,
    "maxeig": cmd_maxeig,
    "pca": cmd_pca,
    "joint": cmd_joint,
    "mc-validate": cmd_mc_validate,
}
