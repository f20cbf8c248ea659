"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Builds lagged cross-correlation matrices k(tau) between two systems of
time series (two stock markets, say), computes their complex spectra, and
compares them with the random-matrix null density of independent Gaussian
panels. Principal components, joint correlation matrices, bootstrap
pooling and Monte Carlo validation come with it.

## Quick Start

```python
from asymspec import eig_general, generate_null, lagged_cross

r1, r2 = generate_null(100, 500, seed=7)
spectrum = eig_general(lagged_cross(r1, r2, 0).entries, source_dims=(100, 500, 0))
print(spectrum.spectral_radius)  # close to (500 / 100) ** -0.5
```

## Features

- Price ingestion, calendar alignment and standardized log-return panels
- Asymmetric lagged, mean-field and joint correlation matrices
- Complex and symmetric eigensolvers with reproducible output
- Null densities, radial histograms and (h, q) least-squares fits
- Principal components, loading matrices, autocorrelation diagnostics
- Bootstrap pooling, sliding windows, reshuffling, synthetic panels
- `asymspec` command line writing plot-ready CSV/JSON artifacts

## Configuration

Environment variables (optional override):
- `ASYMSPEC_THREADS`: Cap on worker threads
- `ASYMSPEC_LOG_PATH`: Audit log path
- `ASYMSPEC_LOG_ENABLED`: Enable the audit log (true/1/yes)
- `ASYMSPEC_LEDGER_PATH`: SQLite run ledger path
"""

from __future__ import annotations

__version__ = "0.1.0"
__author__ = "The asymspec developers"
__license__ = "MIT"

from asymspec.config import RunConfig, build_config
from asymspec.core import AsymSpec
from asymspec.corrmat import (
    AsymCorrMatrix,
    JointCorrMatrix,
    JointMode,
    MaxEigPoint,
    SymCorrMatrix,
    joint_matrix,
    joint_modes,
    lagged_cross,
    maxeig_scan,
    mean_corr,
    mean_field_spectrum,
    pearson,
)
from asymspec.eig import ComplexSpectrum, SymEigen, eig_general, eig_symmetric, real_axis_count
from asymspec.exceptions import (
    AsymspecError,
    ConfigError,
    CorrelationError,
    EigenError,
    FitError,
    IngestError,
    PcaError,
    ResampleError,
    ValidationFailure,
)
from asymspec.ingest import (
    PriceTable,
    ReturnPanel,
    align_calendars,
    load_pair,
    load_panel,
    load_prices,
    log_returns,
    standardize,
)
from asymspec.ledger import RunLedger
from asymspec.logging import AsymspecLogger
from asymspec.pca import (
    LoadingMatrix,
    PcaDecomposition,
    autocorr,
    confidence_band,
    decompose,
    effective_T,
    loading_matrix,
    pc_correlation_scan,
    pc_lagged_cross,
    reconstruct,
)
from asymspec.resample import (
    BootstrapSpec,
    EnsembleResult,
    bootstrap_spectra,
    generate_factor_model,
    generate_null,
    reshuffle_panels,
    sliding_windows,
)
from asymspec.rmt import (
    DensityParams,
    FitReport,
    RadialHistogram,
    density_complex,
    density_effective,
    density_radial,
    evaluate_fit,
    fit_density,
    radial_histogram,
)

__all__ = [
    "AsymCorrMatrix",
    "AsymSpec",
    "AsymspecError",
    "AsymspecLogger",
    "BootstrapSpec",
    "ComplexSpectrum",
    "ConfigError",
    "CorrelationError",
    "DensityParams",
    "EigenError",
    "EnsembleResult",
    "FitError",
    "FitReport",
    "IngestError",
    "JointCorrMatrix",
    "JointMode",
    "LoadingMatrix",
    "MaxEigPoint",
    "PcaDecomposition",
    "PcaError",
    "PriceTable",
    "RadialHistogram",
    "ResampleError",
    "ReturnPanel",
    "RunConfig",
    "RunLedger",
    "SymCorrMatrix",
    "SymEigen",
    "ValidationFailure",
    "__version__",
    "align_calendars",
    "autocorr",
    "bootstrap_spectra",
    "build_config",
    "confidence_band",
    "decompose",
    "density_complex",
    "density_effective",
    "density_radial",
    "effective_T",
    "eig_general",
    "eig_symmetric",
    "evaluate_fit",
    "fit_density",
    "generate_factor_model",
    "generate_null",
    "joint_matrix",
    "joint_modes",
    "lagged_cross",
    "load_pair",
    "load_panel",
    "load_prices",
    "loading_matrix",
    "log_returns",
    "maxeig_scan",
    "mean_corr",
    "mean_field_spectrum",
    "pc_correlation_scan",
    "pc_lagged_cross",
    "pearson",
    "radial_histogram",
    "real_axis_count",
    "reconstruct",
    "reshuffle_panels",
    "sliding_windows",
    "standardize",
]
