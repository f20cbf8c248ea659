"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Monte Carlo acceptance checks of the null model and its known departures.

These pool many synthetic spectra and take a few seconds each; deselect
them with ``-m "not slow"``.
"""

from __future__ import annotations

import numpy as np
import pytest

from asymspec import (
    ComplexSpectrum,
    decompose,
    eig_general,
    evaluate_fit,
    fit_density,
    generate_factor_model,
    generate_null,
    joint_matrix,
    joint_modes,
    lagged_cross,
    maxeig_scan,
    pc_lagged_cross,
    radial_histogram,
    real_axis_count,
    reshuffle_panels,
)

pytestmark = pytest.mark.slow


def _null_spectra(n: int, t: int, reps: int, seed: int = 100) -> list[ComplexSpectrum]:
    spectra = []
    for rep in range(reps):
        r1, r2 = generate_null(n, t, seed=seed + rep)
        spectra.append(eig_general(lagged_cross(r1, r2, 0).entries, source_dims=(n, t, 0)))
    return spectra


def _serial_spectra(n: int, t: int, reps: int, *, shuffle: bool, phi: float = 0.5) -> list[ComplexSpectrum]:
    """PC-space spectra of AR(1) noise panels, optionally time-reshuffled."""
    spectra = []
    for rep in range(reps):
        r1, r2 = generate_factor_model(n, t, 0.0, 0.0, 1, seed=500 + rep, phi=phi)
        if shuffle:
            r1, r2 = reshuffle_panels(r1, r2, seed=rep)
        d1, d2 = decompose(r1), decompose(r2)
        spectra.append(eig_general(pc_lagged_cross(d1, d2, 0).entries, source_dims=(n, t, 0)))
    return spectra


# ============================================================================
# Null spectrum support
# ============================================================================


class TestNullSupport:
    """The null spectrum fills a disk of radius q^(-1/2)."""

    def test_largest_modulus_near_radius(self):
        spectra = _null_spectra(100, 500, 12)
        radius = (500 / 100) ** -0.5
        largest = np.array([abs(s.max_modulus()) for s in spectra])
        assert 0.9 * radius < largest.mean() < 1.3 * radius
        assert largest.max() < 1.5 * radius

    def test_bulk_inside_disk(self):
        pooled = ComplexSpectrum.pooled(_null_spectra(60, 300, 10))
        radius = (300 / 60) ** -0.5
        assert np.mean(pooled.moduli <= 1.1 * radius) > 0.95
        assert pooled.is_conjugate_closed()


# ============================================================================
# Real eigenvalues
# ============================================================================


class TestRealAxis:
    """Real eigenvalues grow sublinearly with N."""

    def test_sublinear_growth(self):
        small = np.mean([real_axis_count(s) for s in _null_spectra(25, 125, 12)])
        medium = np.mean([real_axis_count(s) for s in _null_spectra(100, 500, 6)])
        large = np.mean([real_axis_count(s) for s in _null_spectra(400, 2000, 3)])
        assert small >= 1
        assert medium > small
        assert large > medium
        assert large / small < 8.0
        assert large / 400 < small / 25


# ============================================================================
# Goodness of fit
# ============================================================================


class TestNullFit:
    """The density model describes null spectra and rejects serial correlation."""

    def test_null_fits_at_nominal_q(self):
        pooled = ComplexSpectrum.pooled(_null_spectra(50, 250, 20))
        hist = radial_histogram(pooled)
        report = evaluate_fit(hist, fit_density(hist, 5.0))
        assert not report.poor_fit
        assert report.n_excluded <= 2

    def test_serial_correlation_fails_at_nominal_q(self):
        pooled = ComplexSpectrum.pooled(_serial_spectra(40, 400, 15, shuffle=False, phi=0.7))
        hist = radial_histogram(pooled)
        report = evaluate_fit(hist, fit_density(hist, 10.0))
        assert report.poor_fit


class TestEffectiveQ:
    """Autocorrelated components lower the fitted q; reshuffling restores it."""

    def test_fitted_q_tracks_serial_correlation(self):
        q_nominal = 400 / 40
        fitted = {}
        for shuffle in (False, True):
            pooled = ComplexSpectrum.pooled(_serial_spectra(40, 400, 15, shuffle=shuffle))
            hist = radial_histogram(pooled)
            fitted[shuffle] = fit_density(hist, q_nominal, free_q=True).q

        assert 0.75 * q_nominal < fitted[True] < 1.33 * q_nominal
        assert fitted[False] < 0.9 * q_nominal
        assert fitted[False] / fitted[True] < 0.8


class TestNullEdge:
    """Edge steepness and edge quantile of the null ensemble."""

    def test_edge_steepness_at_nominal_q(self):
        pooled = ComplexSpectrum.pooled(_null_spectra(100, 500, 50, seed=7))
        hist = radial_histogram(pooled)
        params = fit_density(hist, 5.0)
        assert 20.0 <= params.h <= 40.0
        assert not evaluate_fit(hist, params).poor_fit
        assert np.mean(pooled.moduli <= 1.1 * 5.0**-0.5) >= 0.95

    def test_upper_quantile_approaches_radius(self):
        radius = 5.0**-0.5
        quantiles = [
            float(np.quantile(ComplexSpectrum.pooled(_null_spectra(n, 5 * n, 20_000 // n, seed=900)).moduli, 0.99))
            for n in (50, 100, 200)
        ]
        assert quantiles[0] > quantiles[1] > quantiles[2]
        assert abs(quantiles[2] / radius - 1.0) < 0.05


class TestFreeFitAtMarketSize:
    """Free (h, q) fits on PC-space spectra of two markets' size."""

    @pytest.fixture(scope="class")
    def serial_hist(self):
        spectra = []
        for rep in range(6):
            r1, r2 = generate_factor_model(190, 1595, 0.3, 0.0, 1, seed=700 + rep, phi=0.5)
            d1, d2 = decompose(r1), decompose(r2)
            spectra.append(eig_general(pc_lagged_cross(d1, d2, 0).entries, source_dims=(190, 1595, 0)))
        return radial_histogram(spectra)

    def test_free_fit_is_the_best_point(self, serial_hist):
        free = fit_density(serial_hist, serial_hist.q_nominal, free_q=True)
        for q in (3.0, 4.0, 5.0, 6.0, 7.0, serial_hist.q_nominal, 10.5):
            assert free.fit_residual <= fit_density(serial_hist, q).fit_residual + 1e-12

    def test_serial_correlation_lowers_q(self, serial_hist):
        q_nominal = serial_hist.q_nominal
        assert q_nominal == pytest.approx(1595 / 190)
        free = fit_density(serial_hist, q_nominal, free_q=True)
        assert free.q < 0.9 * q_nominal
        assert not free.at_bound


# ============================================================================
# Lead-lag and joint structure
# ============================================================================


class TestLeadLag:
    """A factor reaching system 2 one step late shows up at tau = 1 only."""

    def test_asymmetry_and_mean_field(self):
        for seed in range(20):
            r1, r2 = generate_factor_model(50, 2000, 0.6, 0.3, 1, seed=seed, g_sync=0.6)
            points = {p.tau: p for p in maxeig_scan(r1, r2, [-1, 0, 1])}
            assert points[1].abs_lambda > 3.0 * points[-1].abs_lambda, seed
            for tau in (0, 1):
                point = points[tau]
                assert abs(point.abs_lambda - point.kbar_n) / point.abs_lambda < 0.1, (seed, tau)


class TestJointModes:
    """Global and anti-phase modes of the joint correlation matrix."""

    def test_split_over_seeds(self):
        detected = 0
        for seed in range(20):
            r1, r2 = generate_factor_model(40, 1000, 0.6, 0.0, 0, seed=seed, g_sync=0.8, g_anti=0.3)
            first, second = (mode.summary() for mode in joint_modes(joint_matrix(r1, r2), top=2))
            detected += bool(first["same_sign"] and second["opposite_sign"])
        assert detected >= 18
