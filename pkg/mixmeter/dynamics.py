"""Time-resolved mixedness of the resonant atom-field model and the decaying cat.

Atom-field model: the atom starts excited and the field coherent. The joint state
stays ``|psi1>|e> + |psi2>|g>`` with

    psi1[n]   = cos(lt sqrt(n+1)) c_n
    psi2[n+1] = -i sin(lt sqrt(n+1)) c_n,   psi2[0] = 0

so both reduced states are built from the two branch vectors. The field entropy is
taken from the full ``N x N`` field matrix rather than copied from the atom: the
matrix is compressed onto the span of the branches with a QR factorisation and
must be reproduced by that compression. ``field_density`` diagonalises the whole
matrix instead and is kept for cross-checks.

Decaying cat: for real amplitudes the state is ``|psi1><psi1| + |psi2><psi2|`` and its
two eigenvalues have a closed form; ``damped_density`` rebuilds the same state in the
Fock basis for cross-checks.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidMatrixError,
    InvalidParameterError,
    NotHermitianError,
    TruncationTooSevereError,
)
from .mixedness import (
    araki_lieb_holds,
    entropy_variance,
    mandel_q,
    mixedness_parameter,
    two_outcome_fluctuation,
    von_neumann_entropy,
)
from .models import (
    DampedConfig,
    DampedSnapshot,
    DensityMatrix,
    EigenMethod,
    JcmConfig,
    JcmSnapshot,
    PhotonDistribution,
    Spectrum,
    StateVector,
)
from .qmatrix import (
    DEFAULT_EIGEN_TOL,
    DENSITY_TOL,
    hermiticity_residual,
    outer_product,
    validate_density,
)
from .states import coherent_vector

logger = logging.getLogger(__name__)

BRANCH_NORM_TOL = 1e-8
ENTROPY_MATCH_TOL = 1e-6
JCM_TRUNCATION_LIMIT = 1e-8
FIELD_RANGE_TOL = 1e-10

_T = TypeVar("_T")


def time_grid(stop: float, step: float) -> tuple[float, ...]:
    """``(0, step, 2 step, ..., round(stop/step) step)``; each point is ``i * step``."""

    if not step > 0.0:
        raise InvalidParameterError(f"grid step must be positive, got {step}")
    if stop < 0.0:
        raise InvalidParameterError(f"grid end must be non-negative, got {stop}")
    count = int(round(stop / step))
    return tuple(i * step for i in range(count + 1))


def _evaluate_grid(fn: Callable[[float], _T], grid: Sequence[float], workers: int) -> list[_T]:
    if workers < 1:
        raise InvalidParameterError(f"workers must be at least 1, got {workers}")
    if workers == 1 or len(grid) < 2:
        return [fn(point) for point in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, grid))


def _normalized_spectrum(density: DensityMatrix) -> Spectrum:
    eigenvalues = np.asarray(density.eigenvalues)
    return Spectrum.from_values(eigenvalues / float(np.sum(eigenvalues)))


# ---------------------------------------------------------------------------
# atom-field model
# ---------------------------------------------------------------------------


def _initial_field(cfg: JcmConfig) -> StateVector:
    field = coherent_vector(cfg.alpha, cfg.fock)
    lost = field.truncation_residual + abs(field.amps[-1]) ** 2
    if lost > JCM_TRUNCATION_LIMIT:
        raise TruncationTooSevereError(
            f"basis of size {cfg.fock.truncation_n} loses {lost:.3e} of the field "
            f"for alpha={cfg.alpha}; raise the truncation"
        )
    return field


def _branches_from(field: StateVector, lambda_t: float) -> tuple[StateVector, StateVector]:
    amps = field.amps
    roots = np.sqrt(np.arange(1, field.dim + 1, dtype=np.float64))
    psi1 = np.cos(lambda_t * roots) * amps
    psi2 = np.zeros_like(amps)
    psi2[1:] = -1j * np.sin(lambda_t * roots[:-1]) * amps[:-1]
    return StateVector.from_amplitudes(psi1), StateVector.from_amplitudes(psi2)


def jcm_branches(cfg: JcmConfig, lambda_t: float) -> tuple[StateVector, StateVector]:
    """Unnormalised field branches paired with the excited and ground atomic states."""

    return _branches_from(_initial_field(cfg), lambda_t)


def atomic_density(
    psi1: StateVector,
    psi2: StateVector,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> DensityMatrix:
    """``[[<1|1>, conj(<1|2>)], [<1|2>, <2|2>]]``; its trace is the branch norm sum."""

    overlap = psi1.inner(psi2)
    matrix = np.array(
        [[psi1.norm_sq, overlap.conjugate()], [overlap, psi2.norm_sq]], dtype=np.complex128
    )
    return validate_density(matrix, trace_tol=BRANCH_NORM_TOL, eigen_tol=eigen_tol, method=method)


def field_density(
    psi1: StateVector,
    psi2: StateVector,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> DensityMatrix:
    """``|psi1><psi1| + |psi2><psi2|`` in the truncated Fock basis."""

    if psi1.dim != psi2.dim:
        raise DimensionMismatchError(
            f"branches have different sizes {psi1.dim} and {psi2.dim}"
        )
    matrix = outer_product(psi1, psi1) + outer_product(psi2, psi2)
    return validate_density(matrix, trace_tol=BRANCH_NORM_TOL, eigen_tol=eigen_tol, method=method)


def field_spectrum(
    psi1: StateVector,
    psi2: StateVector,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> Spectrum:
    """Normalised spectrum of the field matrix, diagonalised on its range.

    The ``N x N`` matrix ``|psi1><psi1| + |psi2><psi2|`` is compressed onto an
    orthonormal basis of ``span(psi1, psi2)`` from a thin QR factorisation. The
    compression must reproduce the full matrix, so only the 2x2 block needs a solver.

    Raises:
        DimensionMismatchError: branches of different sizes.
        ValidationError: the full matrix is not Hermitian, lies outside the branch
            span, or the block is not a density matrix.
    """

    if psi1.dim != psi2.dim:
        raise DimensionMismatchError(
            f"branches have different sizes {psi1.dim} and {psi2.dim}"
        )
    full = outer_product(psi1, psi1) + outer_product(psi2, psi2)
    herm_residual = hermiticity_residual(full)
    if herm_residual > DENSITY_TOL:
        raise NotHermitianError(f"field matrix is not Hermitian (residual {herm_residual:.3e})")
    basis, _ = np.linalg.qr(np.column_stack([psi1.amps, psi2.amps]))
    block = basis.conj().T @ full @ basis
    leakage = float(np.max(np.abs(full - basis @ block @ basis.conj().T)))
    if leakage > FIELD_RANGE_TOL:
        raise InvalidMatrixError(f"field matrix leaves the branch span (residual {leakage:.3e})")
    compressed = validate_density(
        block, trace_tol=BRANCH_NORM_TOL, eigen_tol=eigen_tol, method=method
    )
    return _normalized_spectrum(compressed)


def _field_photon_distribution(psi1: StateVector, psi2: StateVector) -> PhotonDistribution:
    probs = np.abs(psi1.amps) ** 2 + np.abs(psi2.amps) ** 2
    return PhotonDistribution.from_values(probs / float(np.sum(probs)))


def _snapshot_from(
    field: StateVector,
    lambda_t: float,
    track_field: bool,
    method: EigenMethod,
    eigen_tol: float,
) -> JcmSnapshot:
    psi1, psi2 = _branches_from(field, lambda_t)
    norm_sum = psi1.norm_sq + psi2.norm_sq
    atom = atomic_density(psi1, psi2, method=method, eigen_tol=eigen_tol)
    spectrum = _normalized_spectrum(atom)
    s_atom = von_neumann_entropy(spectrum)

    s_field: float | None = None
    holds: bool | None = None
    if track_field:
        s_field = von_neumann_entropy(field_spectrum(psi1, psi2, method=method, eigen_tol=eigen_tol))
        holds = araki_lieb_holds(s_atom, s_field, 0.0, tol=ENTROPY_MATCH_TOL)
        if not holds:
            logger.warning(
                "Atom and field entropies differ at lambda_t=%s: %.3e vs %.3e",
                lambda_t,
                s_atom,
                s_field,
            )
    if abs(norm_sum - 1.0) > BRANCH_NORM_TOL:
        logger.warning("Branch norm sum %.12f at lambda_t=%s", norm_sum, lambda_t)

    return JcmSnapshot(
        lambda_t=float(lambda_t),
        atomic_rho=atom,
        s_atom=s_atom,
        ds_atom=math.sqrt(entropy_variance(spectrum)),
        q_s_atom=mixedness_parameter(spectrum),
        s_field=s_field,
        branch_norm_sum=norm_sum,
        mandel_q_field=mandel_q(_field_photon_distribution(psi1, psi2)),
        araki_lieb=holds,
    )


def jcm_snapshot(
    cfg: JcmConfig,
    lambda_t: float,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> JcmSnapshot:
    return _snapshot_from(_initial_field(cfg), lambda_t, cfg.track_field, method, eigen_tol)


def jcm_timeseries(
    cfg: JcmConfig,
    workers: int = 1,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> list[JcmSnapshot]:
    """One snapshot per point of ``cfg.time_grid``, in grid order."""

    field = _initial_field(cfg)
    logger.debug(
        "Atom-field sweep: alpha=%s N=%d points=%d track_field=%s",
        cfg.alpha,
        cfg.fock.truncation_n,
        len(cfg.time_grid),
        cfg.track_field,
    )
    return _evaluate_grid(
        lambda lt: _snapshot_from(field, lt, cfg.track_field, method, eigen_tol),
        cfg.time_grid,
        workers,
    )


# ---------------------------------------------------------------------------
# decaying cat
# ---------------------------------------------------------------------------


def _damped_terms(cfg: DampedConfig, gamma_t: float) -> tuple[float, float, float]:
    """``(P11, P12, P22)`` for real amplitudes."""

    if gamma_t < 0.0:
        raise InvalidParameterError(f"gamma_t must be non-negative, got {gamma_t}")
    overlap = math.exp(-0.5 * (cfg.alpha - cfg.beta) ** 2)
    remaining = math.exp(-gamma_t)
    norm = 1.0 / (2.0 + 2.0 * overlap)
    faded = overlap ** (2.0 * (1.0 - remaining))
    p11 = norm * (1.0 + 2.0 * overlap + faded)
    p22 = norm * (1.0 - faded)
    p12 = norm * (overlap**remaining + overlap ** (1.0 - remaining)) * math.sqrt(max(1.0 - faded, 0.0))
    return p11, p12, p22


def damped_eigenvalues(cfg: DampedConfig, gamma_t: float) -> tuple[float, float]:
    """``lambda_+- = 1/2 +- sqrt((P11 - P22)^2 + 4 P12^2) / 2``, clipped to ``[0, 1]``."""

    p11, p12, p22 = _damped_terms(cfg, gamma_t)
    half_width = 0.5 * math.sqrt((p11 - p22) ** 2 + 4.0 * p12 * p12)
    lower = min(max(0.5 - half_width, 0.0), 1.0)
    return 1.0 - lower, lower


def damped_branches(cfg: DampedConfig, gamma_t: float) -> tuple[StateVector, StateVector]:
    """Fock-basis branches whose projectors sum to the decayed state."""

    _, _, p22 = _damped_terms(cfg, gamma_t)
    overlap = math.exp(-0.5 * (cfg.alpha - cfg.beta) ** 2)
    shrink = math.exp(-0.5 * gamma_t)
    norm = 1.0 / (2.0 + 2.0 * overlap)
    weight = overlap ** (1.0 - math.exp(-gamma_t))
    left = coherent_vector(cfg.alpha * shrink, cfg.fock).amps
    right = coherent_vector(cfg.beta * shrink, cfg.fock).amps
    psi1 = math.sqrt(norm) * (left + weight * right)
    psi2 = math.sqrt(p22) * right
    return StateVector.from_amplitudes(psi1), StateVector.from_amplitudes(psi2)


def damped_density(
    cfg: DampedConfig,
    gamma_t: float,
    method: EigenMethod = EigenMethod.JACOBI,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
) -> DensityMatrix:
    psi1, psi2 = damped_branches(cfg, gamma_t)
    matrix = outer_product(psi1, psi1) + outer_product(psi2, psi2)
    return validate_density(matrix, trace_tol=BRANCH_NORM_TOL, eigen_tol=eigen_tol, method=method)


def damped_snapshot(cfg: DampedConfig, gamma_t: float) -> DampedSnapshot:
    p11, _, p22 = _damped_terms(cfg, gamma_t)
    upper, lower = damped_eigenvalues(cfg, gamma_t)
    spectrum = Spectrum.from_values([upper, lower])
    return DampedSnapshot(
        gamma_t=float(gamma_t),
        lambda_plus=upper,
        lambda_minus=lower,
        s=von_neumann_entropy(spectrum),
        ds=two_outcome_fluctuation(upper, lower),
        q_s=mixedness_parameter(spectrum),
        trace_check=p11 + p22,
    )


def damped_timeseries(cfg: DampedConfig, workers: int = 1) -> list[DampedSnapshot]:
    return _evaluate_grid(lambda gt: damped_snapshot(cfg, gt), cfg.time_grid, workers)
