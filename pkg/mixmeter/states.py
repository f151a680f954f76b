"""Fock-space state constructors and closed forms for the static examples.

Two independent routes lead to every field spectrum here:

* the Fock oracle: build the density matrix in a truncated number basis and
  diagonalise it (``mixture_density``, ``thermal_density``);
* the purification shortcut: a mixture ``sum_i w_i |psi_i><psi_i|`` shares its non-zero
  eigenvalues with the Gram matrix ``sqrt(w_i w_j) <psi_i|psi_j>``, which for coherent
  states only needs the analytic overlap (``coherent_gram_matrix``, ``cat3_spectrum``).

The scalar ``*_closed_form`` evaluators return ``(S, Delta S, Q_S)`` tuples.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import poisson

from .errors import InvalidParameterError, TruncationTooSevereError
from .mixedness import PURE_ENTROPY_EPS
from .models import (
    Cat3Mode,
    ComplexMatrix,
    DensityMatrix,
    EigenMethod,
    FockConfig,
    PhotonDistribution,
    PureStateMixture,
    Spectrum,
    StateVector,
)
from .qmatrix import (
    DEFAULT_EIGEN_TOL,
    givens_rotation,
    hermitian_eigenvalues,
    outer_product,
    validate_density,
)

logger = logging.getLogger(__name__)

COHERENT_RESIDUAL_LIMIT = 1e-6
THERMAL_RESIDUAL_LIMIT = 1e-9
DEFAULT_THERMAL_TAIL_TOL = 1e-12

ClosedForm = tuple[float, float, float]


def default_truncation(alpha_max: float) -> int:
    """Basis size ``ceil(|a|^2 + 6|a| + 10)``; the Poisson tail past it is below 1e-8."""

    magnitude = abs(alpha_max)
    return math.ceil(magnitude**2 + 6.0 * magnitude + 10.0)


def coherent_vector(alpha: complex, cfg: FockConfig) -> StateVector:
    """Truncated coherent state ``c_n = e^{-|a|^2/2} a^n / sqrt(n!)``.

    Amplitudes come from the recurrence ``c_{n+1} = c_n a / sqrt(n+1)``. The residual
    is the exact Poisson tail ``P(n >= N)`` so it stays meaningful far below machine
    epsilon.

    Raises:
        TruncationTooSevereError: residual above 1e-6 while ``renormalize`` is off.
    """

    alpha = complex(alpha)
    size = cfg.truncation_n
    mean = abs(alpha) ** 2
    factors = np.empty(size, dtype=np.complex128)
    factors[0] = math.exp(-0.5 * mean)
    factors[1:] = alpha / np.sqrt(np.arange(1, size, dtype=np.float64))
    amps = np.cumprod(factors)

    residual = float(poisson.sf(size - 1, mean)) if mean > 0.0 else 0.0
    if residual > COHERENT_RESIDUAL_LIMIT:
        if not cfg.renormalize:
            raise TruncationTooSevereError(
                f"coherent state alpha={alpha} loses {residual:.3e} of its norm at N={size}"
            )
        logger.warning(
            "Renormalising coherent state alpha=%s with truncation residual %.3e (N=%d)",
            alpha,
            residual,
            size,
        )

    if cfg.renormalize:
        norm = math.sqrt(float(np.vdot(amps, amps).real))
        if norm == 0.0:
            raise TruncationTooSevereError(
                f"coherent amplitudes for alpha={alpha} underflow in a basis of size {size}"
            )
        amps = amps / norm
    return StateVector.from_amplitudes(amps, truncation_residual=residual)


def fock_vector(k: int, cfg: FockConfig) -> StateVector:
    if not 0 <= k < cfg.truncation_n:
        raise InvalidParameterError(
            f"Fock index {k} is outside a basis of size {cfg.truncation_n}"
        )
    amps = np.zeros(cfg.truncation_n, dtype=np.complex128)
    amps[k] = 1.0
    return StateVector.from_amplitudes(amps)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """``<alpha|beta> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)``."""

    alpha, beta = complex(alpha), complex(beta)
    exponent = -0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + alpha.conjugate() * beta
    return complex(np.exp(exponent))


def coherent_mixture(
    weights: Sequence[float], alphas: Sequence[complex], cfg: FockConfig
) -> PureStateMixture:
    if len(weights) != len(alphas):
        raise InvalidParameterError(
            f"got {len(weights)} weights for {len(alphas)} coherent amplitudes"
        )
    return PureStateMixture.from_components(
        (weight, coherent_vector(alpha, cfg)) for weight, alpha in zip(weights, alphas)
    )


def cat2_mixture(alpha: complex, cfg: FockConfig) -> PureStateMixture:
    """``(|a><a| + |-a><-a|)/2``."""

    return coherent_mixture([0.5, 0.5], [alpha, -alpha], cfg)


def cat3_mixture(alpha: complex, cfg: FockConfig) -> PureStateMixture:
    """``(|a><a| + |-a><-a| + |2a><2a|)/3``."""

    third = 1.0 / 3.0
    return coherent_mixture([third, third, third], [alpha, -alpha, 2 * alpha], cfg)


def mixture_density(
    mix: PureStateMixture,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> DensityMatrix:
    """``sum_i w_i |psi_i><psi_i|`` in the shared basis, validated."""

    dim = mix.states[0].dim
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for weight, state in mix.components:
        rho += weight * outer_product(state, state)
    return validate_density(rho, method=method, eigen_tol=eigen_tol)


def gram_matrix(mix: PureStateMixture) -> ComplexMatrix:
    """Weighted overlaps ``sqrt(w_i w_j) <psi_i|psi_j>`` of the mixture components."""

    vectors = np.array([state.amps for state in mix.states])
    roots = np.sqrt(np.array(mix.weights))
    gram = np.outer(roots, roots) * (vectors.conj() @ vectors.T)
    return 0.5 * (gram + gram.conj().T)


def coherent_gram_matrix(weights: Sequence[float], alphas: Sequence[complex]) -> ComplexMatrix:
    """Gram matrix of a coherent mixture from analytic overlaps (no truncation)."""

    if len(weights) != len(alphas):
        raise InvalidParameterError(
            f"got {len(weights)} weights for {len(alphas)} coherent amplitudes"
        )
    size = len(alphas)
    gram = np.empty((size, size), dtype=np.complex128)
    for i in range(size):
        for j in range(size):
            gram[i, j] = math.sqrt(weights[i] * weights[j]) * coherent_overlap(alphas[i], alphas[j])
    return gram


def poisson_distribution(mean: float, n: int) -> PhotonDistribution:
    """Poisson photon statistics of a coherent state with ``|a|^2 = mean`` over ``n`` levels."""

    if mean < 0.0:
        raise InvalidParameterError(f"mean photon number must be non-negative, got {mean}")
    if mean == 0.0:
        return fock_distribution(0, n)
    probs = poisson.pmf(np.arange(n), mean)
    residual = float(poisson.sf(n - 1, mean))
    if residual > THERMAL_RESIDUAL_LIMIT:
        raise TruncationTooSevereError(
            f"Poisson distribution with mean {mean} loses {residual:.3e} at N={n}"
        )
    return PhotonDistribution.from_values(probs / np.sum(probs))


def fock_distribution(k: int, n: int) -> PhotonDistribution:
    if not 0 <= k < n:
        raise InvalidParameterError(f"Fock index {k} is outside a basis of size {n}")
    probs = np.zeros(n)
    probs[k] = 1.0
    return PhotonDistribution.from_values(probs)


def thermal_distribution(nbar: float, n: int) -> np.ndarray:
    """First ``n`` values of ``P_k = nbar^k / (1 + nbar)^(k+1)`` (not renormalised)."""

    if nbar < 0.0:
        raise InvalidParameterError(f"mean photon number must be non-negative, got {nbar}")
    ratio = nbar / (1.0 + nbar)
    return np.power(ratio, np.arange(n, dtype=np.float64)) / (1.0 + nbar)


def thermal_density(
    nbar: float,
    cfg: FockConfig,
    method: EigenMethod = EigenMethod.JACOBI,
) -> DensityMatrix:
    """Diagonal thermal state renormalised over the kept levels.

    The discarded mass ``(nbar/(1+nbar))^N`` must stay below 1e-9. With
    ``cfg.auto_raise`` the basis grows until it does; otherwise the call fails.
    """

    if nbar < 0.0:
        raise InvalidParameterError(f"mean photon number must be non-negative, got {nbar}")
    size = cfg.truncation_n
    ratio = nbar / (1.0 + nbar)
    residual = ratio**size
    if residual >= THERMAL_RESIDUAL_LIMIT:
        if not cfg.auto_raise:
            raise TruncationTooSevereError(
                f"thermal state nbar={nbar} loses {residual:.3e} at N={size}"
            )
        size = math.ceil(math.log(THERMAL_RESIDUAL_LIMIT) / math.log(ratio)) + 1
        logger.warning("Raised thermal truncation for nbar=%s from %d to %d", nbar, cfg.truncation_n, size)
    probs = thermal_distribution(nbar, size)
    probs = probs / np.sum(probs)
    return validate_density(np.diag(probs.astype(np.complex128)), method=method)


def thermal_entropy_exact(nbar: float) -> float:
    """Geometric-series entropy ``(1+nbar) ln(1+nbar) - nbar ln nbar``."""

    if nbar <= 0.0:
        return 0.0
    return (1.0 + nbar) * math.log1p(nbar) - nbar * math.log(nbar)


def thermal_variance_exact(nbar: float) -> float:
    """``(Delta S)^2 = (nbar^2 + nbar) ln^2(1 + 1/nbar)`` for the thermal state."""

    if nbar <= 0.0:
        return 0.0
    return (nbar * nbar + nbar) * math.log1p(1.0 / nbar) ** 2


def _q_from(entropy: float, variance: float) -> float:
    if entropy < PURE_ENTROPY_EPS:
        return 0.0
    return min(max(math.exp(-variance / entropy), 0.0), 1.0)


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def two_level_closed_form(phi: float) -> ClosedForm:
    """Entropy, fluctuation and Q_S of ``cos^2(phi)|e><e| + sin^2(phi)|g><g|``."""

    c2 = math.cos(phi) ** 2
    s2 = math.sin(phi) ** 2
    entropy = -_xlogx(c2) - _xlogx(s2)
    if c2 == 0.0 or s2 == 0.0:
        fluctuation = 0.0
    else:
        fluctuation = 0.5 * abs(math.sin(2.0 * phi) * math.log(c2 / s2))
    return entropy, fluctuation, _q_from(entropy, fluctuation**2)


def cat2_closed_form(alpha_abs: float) -> ClosedForm:
    """Two-coherent-state mixture with eigenvalues ``(1 +- e^{-2|a|^2})/2``."""

    if alpha_abs < 0.0:
        raise InvalidParameterError(f"alpha_abs must be non-negative, got {alpha_abs}")
    overlap = math.exp(-2.0 * alpha_abs**2)
    one_minus = -math.expm1(-2.0 * alpha_abs**2)
    upper = 0.5 * (1.0 + overlap)
    lower = 0.5 * one_minus
    entropy = -_xlogx(upper) - _xlogx(lower)
    if lower == 0.0:
        fluctuation = 0.0
    else:
        fluctuation = (
            0.5
            * math.sqrt(-math.expm1(-4.0 * alpha_abs**2))
            * (math.log1p(overlap) - math.log(one_minus))
        )
    return entropy, fluctuation, _q_from(entropy, fluctuation**2)


def cat3_gram_matrix(alpha_abs: float, mode: Cat3Mode = Cat3Mode.RECOMPUTED) -> ComplexMatrix:
    """Three-state Gram matrix for real ``alpha``.

    ``RECOMPUTED`` uses ``<-a|2a>/3 = e^{-9|a|^2/2}/3`` in the (2,3) slot;
    ``PAPER`` keeps the printed ``e^{-3|a|^2}/3`` there.
    """

    if alpha_abs < 0.0:
        raise InvalidParameterError(f"alpha_abs must be non-negative, got {alpha_abs}")
    third = 1.0 / 3.0
    gram = coherent_gram_matrix([third, third, third], [alpha_abs, -alpha_abs, 2.0 * alpha_abs])
    if Cat3Mode(mode) is Cat3Mode.PAPER:
        entry = third * math.exp(-3.0 * alpha_abs**2)
        gram[1, 2] = entry
        gram[2, 1] = entry
    return gram


def cat3_spectrum(
    alpha_abs: float,
    mode: Cat3Mode = Cat3Mode.RECOMPUTED,
    method: EigenMethod = EigenMethod.JACOBI,
) -> Spectrum:
    spectrum = hermitian_eigenvalues(cat3_gram_matrix(alpha_abs, mode), method=method)
    return Spectrum.from_values(spectrum.eigenvalues)


def thermal_closed_form(nbar: float, tail_tol: float = DEFAULT_THERMAL_TAIL_TOL) -> ClosedForm:
    """Thermal entropy and fluctuation by direct summation of the geometric distribution.

    Terms are summed until the geometric tail ``(nbar/(1+nbar))^N`` drops below
    ``tail_tol``. Logs are taken analytically, ``ln P_k = k ln q - ln(1+nbar)``.
    """

    if nbar < 0.0:
        raise InvalidParameterError(f"mean photon number must be non-negative, got {nbar}")
    if not 0.0 < tail_tol < 1.0:
        raise InvalidParameterError(f"thermal tail tolerance must lie in (0, 1), got {tail_tol}")
    if nbar == 0.0:
        return 0.0, 0.0, 0.0
    ratio = nbar / (1.0 + nbar)
    size = max(1, math.ceil(math.log(tail_tol) / math.log(ratio)))
    k = np.arange(size, dtype=np.float64)
    log_p = k * math.log(ratio) - math.log1p(nbar)
    probs = np.exp(log_p)
    entropy = float(-np.sum(probs * log_p))
    deviation = log_p + entropy
    variance = max(float(np.sum(probs * deviation * deviation)), 0.0)
    return entropy, math.sqrt(variance), _q_from(entropy, variance)


def maximally_mixed(d: int) -> DensityMatrix:
    if d < 1:
        raise InvalidParameterError(f"dimension must be positive, got {d}")
    return validate_density(np.eye(d, dtype=np.complex128) / d)


def ledger_states() -> dict[str, DensityMatrix]:
    """Three five-level states that linear entropy and Q_S tell apart differently.

    ``maximally_mixed`` is ``I/5``; ``two_point`` is ``(|1><1| + |5><5|)/2`` with
    normalised linear entropy 5/8 and Q_S = 1; ``coherent`` has spectrum
    ``{2/3, 1/6, 1/6, 0, 0}`` rotated into a basis where it carries coherences, so its
    normalised linear entropy is also 5/8 but its Q_S is below 1.
    """

    two_point = np.diag([0.5, 0.0, 0.0, 0.0, 0.5]).astype(np.complex128)
    rotation = (
        givens_rotation(5, 0, 1, math.pi / 5, 0.3)
        @ givens_rotation(5, 1, 2, math.pi / 7, 1.1)
        @ givens_rotation(5, 0, 4, math.pi / 3, 0.0)
        @ givens_rotation(5, 2, 3, math.pi / 4, 0.5)
    )
    diagonal = np.diag([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.0, 0.0]).astype(np.complex128)
    coherent = rotation @ diagonal @ rotation.conj().T
    return {
        "maximally_mixed": maximally_mixed(5),
        "two_point": validate_density(two_point),
        "coherent": validate_density(coherent),
    }
