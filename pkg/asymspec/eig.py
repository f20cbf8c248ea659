"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Dense eigensolvers.

eig_general returns the full complex spectrum of a real non-symmetric
matrix through LAPACK geev (balancing, Hessenberg reduction, Francis
double-shift QR), so real eigenvalues come back with an exactly zero
imaginary part and complex ones in exact conjugate pairs. eig_symmetric
wraps syevd and fixes ordering and eigenvector signs so decompositions
are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from asymspec.exceptions import EigenError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class ComplexSpectrum:
    """Multiset of complex eigenvalues with the (N, T, tau) of their source matrix."""

    eigenvalues: NDArray[np.complex128]
    source_dims: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        values = np.array(self.eigenvalues, dtype=np.complex128).reshape(-1)
        values.setflags(write=False)
        object.__setattr__(self, "eigenvalues", values)

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def moduli(self) -> NDArray[np.float64]:
        return np.abs(self.eigenvalues)

    @property
    def spectral_radius(self) -> float:
        return float(self.moduli.max()) if len(self) else 0.0

    @property
    def q_nominal(self) -> float | None:
        """T_effective / N of the source matrix, when known."""
        if self.source_dims is None:
            return None
        n, t, tau = self.source_dims
        return (t - abs(tau)) / n

    def max_modulus(self) -> complex:
        """Largest-modulus eigenvalue.

        Ties (conjugate pairs) resolve to the larger real part, then to the
        non-negative imaginary part.
        """
        if not len(self):
            raise EigenError("empty spectrum has no largest eigenvalue")
        moduli = self.moduli
        candidates = self.eigenvalues[moduli == moduli.max()]
        return complex(max(candidates, key=lambda z: (z.real, z.imag)))

    def sorted(self) -> ComplexSpectrum:
        """Copy ordered by real part, then imaginary part."""
        order = np.lexsort((self.eigenvalues.imag, self.eigenvalues.real))
        return ComplexSpectrum(self.eigenvalues[order], self.source_dims)

    def is_conjugate_closed(self, tol: float = 1e-8) -> bool:
        """Whether the multiset equals its conjugate multiset within tol."""
        values = self.eigenvalues
        return bool(np.abs(np.sort(values) - np.sort(values.conj())).max(initial=0.0) <= tol)

    @classmethod
    def pooled(cls, spectra: Iterable[ComplexSpectrum]) -> ComplexSpectrum:
        """Concatenate spectra in order; dims are kept only when all agree."""
        items = list(spectra)
        if not items:
            return cls(np.empty(0, dtype=np.complex128))
        dims = {s.source_dims for s in items}
        return cls(
            np.concatenate([s.eigenvalues for s in items]),
            items[0].source_dims if len(dims) == 1 else None,
        )


@dataclass(frozen=True, slots=True)
class SymEigen:
    """Eigendecomposition of a real symmetric matrix.

    Eigenvalues are descending; column j of eigenvectors pairs with
    eigenvalue j and has its largest-magnitude entry positive.
    """

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]

    def __post_init__(self) -> None:
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _as_square(a: ArrayLike) -> NDArray[np.float64]:
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise EigenError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise EigenError("matrix has non-finite entries")
    return m


def eig_general(
    a: ArrayLike,
    *,
    source_dims: tuple[int, int, int] | None = None,
) -> ComplexSpectrum:
    """All N eigenvalues of a real square matrix, with algebraic multiplicity.

    Args:
        a: N x N real matrix
        source_dims: (N, T, tau) of the correlation matrix, kept as metadata

    Raises:
        EigenError: Invalid input, or the QR iteration exceeded its sweep cap
    """
    m = _as_square(a)
    try:
        values = scipy.linalg.eigvals(m, check_finite=False)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(m))
        raise EigenError(
            f"QR iteration did not converge for {m.shape[0]}x{m.shape[0]} matrix "
            f"(condition number {cond:.3g})"
        ) from exc
    return ComplexSpectrum(values, source_dims)


def eig_symmetric(a: ArrayLike) -> SymEigen:
    """Full real eigendecomposition of a symmetric matrix, eigenvalues descending.

    Raises:
        EigenError: Asymmetry above 1e-10 or invalid input
    """
    m = _as_square(a)
    asymmetry = float(np.abs(m - m.T).max())
    if asymmetry > SYMMETRY_TOL:
        raise EigenError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3g})")

    try:
        values, vectors = scipy.linalg.eigh(0.5 * (m + m.T), check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"symmetric eigensolver failed: {exc}") from exc

    values = values[::-1]
    vectors = vectors[:, ::-1]
    n = vectors.shape[1]
    pivots = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[pivots, np.arange(n)])
    signs[signs == 0] = 1.0
    return SymEigen(values, vectors * signs)


def real_axis_count(s: ComplexSpectrum, eps: float | None = None) -> int:
    """Number of eigenvalues with |Im lambda| <= eps.

    Args:
        s: Spectrum
        eps: Tolerance; default 1e-8 times the spectral radius

    Raises:
        EigenError: Non-positive eps
    """
    if eps is None:
        eps = 1e-8 * s.spectral_radius
    elif eps <= 0:
        raise EigenError(f"eps must be positive, got {eps}")
    return int((np.abs(s.eigenvalues.imag) <= eps).sum())
