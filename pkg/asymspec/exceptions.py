"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Exception hierarchy for asymspec.

Every error carries the CLI exit status it maps to: 1 for usage and data
errors, 2 for failed validation runs.
"""

from __future__ import annotations


class AsymspecError(Exception):
    """Base class for all asymspec errors."""

    exit_code = 1


class ConfigError(AsymspecError):
    """Invalid or inconsistent run configuration."""


class IngestError(AsymspecError):
    """Price file could not be loaded or violates a table invariant.

    Attributes:
        line: 1-based line number in the source file, when known
    """

    def __init__(self, message: str, *, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorrelationError(AsymspecError):
    """Correlation matrix construction failed (dimensions, lag, standardization)."""


class EigenError(AsymspecError):
    """Eigendecomposition failed or received invalid input."""


class FitError(AsymspecError):
    """Density fit did not converge or the histogram is unusable."""


class PcaError(AsymspecError):
    """Principal component construction or reconstruction failed."""


class ResampleError(AsymspecError):
    """Invalid bootstrap, window or generator parameters."""


class ValidationFailure(AsymspecError):
    """A validation run finished but its goodness-of-fit check failed."""

    exit_code = 2
