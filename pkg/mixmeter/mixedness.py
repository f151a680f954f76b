"""Spectral entropy functionals and the mixedness parameter.

Every functional works on a ``Spectrum``. Zero probabilities are dropped before any
sum (``0 ln 0 = 0 ln^2 0 = 0``), so padding a spectrum with zeros leaves every result
bit-identical. Logarithms are natural, so entropies are in nats.

Mandel-Q follows the sign convention ``Q_M = 1 - Var(n)/<n>``: coherent light gives 0,
sub-Poissonian light is positive and thermal light is negative. This is the opposite
sign of the more common ``Var(n)/<n> - 1``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np

from .errors import DimensionTooSmallError
from .models import DensityMatrix, MixednessReport, PhotonDistribution, Spectrum

# Below this entropy the state is treated as pure and Q_S is reported as 0.
PURE_ENTROPY_EPS = 1e-12
VACUUM_MEAN_EPS = 1e-12
VARIANCE_CLAMP = 1e-12


def _as_spectrum(s: Spectrum | Iterable[float]) -> Spectrum:
    return s if isinstance(s, Spectrum) else Spectrum.from_values(s)


def spectrum_of(density: DensityMatrix) -> Spectrum:
    return Spectrum.from_values(density.eigenvalues)


def von_neumann_entropy(s: Spectrum | Iterable[float]) -> float:
    """``S = -sum p ln p``."""

    p = _as_spectrum(s).support
    return max(float(-np.sum(p * np.log(p))), 0.0)


def linear_entropy(s: Spectrum | Iterable[float]) -> float:
    """``xi = 1 - sum p^2``; never larger than the von Neumann entropy."""

    p = _as_spectrum(s).support
    return max(1.0 - float(np.sum(p * p)), 0.0)


def _check_reference_dim(spectrum: Spectrum, d: int) -> None:
    if d < 2:
        raise DimensionTooSmallError(f"reference dimension must be at least 2, got {d}")
    support = int(spectrum.support.size)
    if support > d:
        raise DimensionTooSmallError(
            f"spectrum has {support} non-zero entries, more than reference dimension {d}"
        )


def normalized_linear_entropy(s: Spectrum | Iterable[float], d: int) -> float:
    """``d/(d-1) * (1 - sum p^2)``, equal to 1 for the maximally mixed state in dimension d."""

    spectrum = _as_spectrum(s)
    _check_reference_dim(spectrum, d)
    return min(d / (d - 1) * linear_entropy(spectrum), 1.0)


def normalized_entropy(s: Spectrum | Iterable[float], d: int) -> float:
    """``S / ln d``."""

    spectrum = _as_spectrum(s)
    _check_reference_dim(spectrum, d)
    return von_neumann_entropy(spectrum) / math.log(d)


def entropy_variance(s: Spectrum | Iterable[float]) -> float:
    """``(Delta S)^2 = sum p ln^2 p - S^2``.

    Evaluated as ``sum p (ln p + S)^2``, the same quantity without the cancellation
    that the raw difference suffers near uniform spectra.
    """

    p = _as_spectrum(s).support
    entropy = max(float(-np.sum(p * np.log(p))), 0.0)
    deviation = np.log(p) + entropy
    variance = float(np.sum(p * deviation * deviation))
    if -VARIANCE_CLAMP <= variance < 0.0:
        return 0.0
    return variance


def mixedness_parameter(s: Spectrum | Iterable[float]) -> float:
    """``Q_S = exp(-(Delta S)^2 / S)``, 0 for pure states and 1 for flat spectra."""

    spectrum = _as_spectrum(s)
    entropy = von_neumann_entropy(spectrum)
    if entropy < PURE_ENTROPY_EPS:
        return 0.0
    q_s = math.exp(-entropy_variance(spectrum) / entropy)
    return min(max(q_s, 0.0), 1.0)


def two_outcome_fluctuation(l1: float, l2: float) -> float:
    """``sqrt(l1 l2) |ln(l1/l2)|`` for a two-level spectrum; 0 when either value vanishes."""

    if l1 <= 0.0 or l2 <= 0.0:
        return 0.0
    return math.sqrt(l1 * l2) * abs(math.log(l1 / l2))


def mandel_q(p: PhotonDistribution | Iterable[float]) -> float:
    """``Q_M = 1 - Var(n)/<n>``; 0 for the vacuum."""

    distribution = p if isinstance(p, PhotonDistribution) else PhotonDistribution.from_values(p)
    probs = distribution.probs
    n = np.arange(probs.size, dtype=np.float64)
    mean = float(np.sum(n * probs))
    if mean < VACUUM_MEAN_EPS:
        return 0.0
    variance = float(np.sum(probs * (n - mean) ** 2))
    return 1.0 - variance / mean


def photon_distribution(density: DensityMatrix) -> PhotonDistribution:
    """Diagonal of a Fock-basis density matrix."""

    return PhotonDistribution.from_values(np.real(np.diag(density.entries)))


def araki_lieb_holds(s_a: float, s_b: float, s_total: float, tol: float = 1e-9) -> bool:
    """``|S_A - S_B| <= S <= S_A + S_B`` within ``tol``."""

    return abs(s_a - s_b) <= s_total + tol and s_total <= s_a + s_b + tol


def report(density: DensityMatrix, reference_dim: int | None = None) -> MixednessReport:
    """Bundle S, xi, (Delta S)^2 and Q_S of a validated density matrix.

    All functionals share the clamped spectrum stored on ``density``. With
    ``reference_dim`` the entropy and linear entropy are also normalised to it.
    """

    spectrum = spectrum_of(density)
    entropy = von_neumann_entropy(spectrum)
    normalized_s: float | None = None
    normalized_xi: float | None = None
    if reference_dim is not None:
        normalized_s = normalized_entropy(spectrum, reference_dim)
        normalized_xi = normalized_linear_entropy(spectrum, reference_dim)
    return MixednessReport(
        entropy_s=entropy,
        linear_entropy_xi=linear_entropy(spectrum),
        entropy_variance=entropy_variance(spectrum),
        q_s=mixedness_parameter(spectrum),
        dimension=density.dim,
        normalized_entropy=normalized_s,
        normalized_linear_entropy=normalized_xi,
    )
