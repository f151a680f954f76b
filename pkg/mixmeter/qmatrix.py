"""Dense complex matrices and a deterministic Hermitian eigensolver.

The eigensolver is a cyclic Jacobi method with complex Givens rotations. One sweep
visits every index pair exactly once, grouped into ``n - 1`` rounds of disjoint pairs
taken from a fixed round-robin tournament schedule. Rotations inside a round touch
disjoint rows and columns, so each round is applied as a single vectorised numpy
update. The schedule never changes, which makes the spectra bit-reproducible.

Convergence is declared when the off-diagonal Frobenius norm drops to
``tol * ||m||_F``; more than ``max_sweeps`` sweeps raises ``ConvergenceError``.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from .errors import (
    ConvergenceError,
    InvalidMatrixError,
    NonSquareError,
    NotHermitianError,
    NotPositiveError,
    TraceNotOneError,
)
from .models import (
    NEGATIVE_CLAMP,
    ComplexMatrix,
    DensityMatrix,
    EigenMethod,
    HermitianSpectrum,
    StateVector,
)

logger = logging.getLogger(__name__)

DEFAULT_EIGEN_TOL = 1e-13
DEFAULT_MAX_SWEEPS = 100
HERMITIAN_INPUT_TOL = 1e-8
DENSITY_TOL = 1e-10
SMALL_ANGLE_RATIO = 1e-36

_TINY = float(np.finfo(np.float64).tiny)


def as_complex_matrix(values: npt.ArrayLike) -> ComplexMatrix:
    """Coerce ``values`` to a finite two-dimensional complex128 array."""

    try:
        matrix = np.array(values, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrixError(f"cannot interpret input as a complex matrix: {exc}") from exc
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise InvalidMatrixError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidMatrixError("matrix contains NaN or infinite entries")
    return matrix


def _require_square(matrix: ComplexMatrix) -> None:
    rows, cols = matrix.shape
    if rows != cols:
        raise NonSquareError(f"matrix is {rows}x{cols}, expected a square matrix")


def hermiticity_residual(m: npt.ArrayLike) -> float:
    matrix = as_complex_matrix(m)
    _require_square(matrix)
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def outer_product(v: StateVector | npt.ArrayLike, w: StateVector | npt.ArrayLike) -> ComplexMatrix:
    """``|v><w|`` with entry ``(i, j) = v[i] * conj(w[j])``."""

    left = v.amps if isinstance(v, StateVector) else np.asarray(v, dtype=np.complex128)
    right = w.amps if isinstance(w, StateVector) else np.asarray(w, dtype=np.complex128)
    return np.outer(left, right.conj())


@lru_cache(maxsize=None)
def _round_robin_rounds(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Circle-method schedule: ``n - 1`` rounds (``n`` for odd ``n``) of disjoint pairs."""

    players = list(range(n if n % 2 == 0 else n + 1))
    size = len(players)
    rounds: list[tuple[np.ndarray, np.ndarray]] = []
    for _ in range(size - 1):
        pairs = [
            (min(players[i], players[size - 1 - i]), max(players[i], players[size - 1 - i]))
            for i in range(size // 2)
        ]
        pairs = [pair for pair in pairs if pair[1] < n]
        if pairs:
            p = np.array([pair[0] for pair in pairs], dtype=np.intp)
            q = np.array([pair[1] for pair in pairs], dtype=np.intp)
            p.setflags(write=False)
            q.setflags(write=False)
            rounds.append((p, q))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _offdiag_norm(work: ComplexMatrix) -> float:
    return float(np.linalg.norm(work - np.diag(np.diag(work))))


def _rotate_round(work: ComplexMatrix, p: np.ndarray, q: np.ndarray) -> None:
    apq = work[p, q]
    r = np.abs(apq)
    # Subnormal couplings are below the resolution of any diagonal entry; drop them.
    negligible = (r > 0.0) & (r < _TINY)
    if np.any(negligible):
        work[p[negligible], q[negligible]] = 0.0
        work[q[negligible], p[negligible]] = 0.0
    active = r >= _TINY
    if not np.any(active):
        return
    if not np.all(active):
        p, q, apq, r = p[active], q[active], apq[active], r[active]

    app = work[p, p].real
    aqq = work[q, q].real
    phase = np.exp(1j * np.angle(apq))
    diff = aqq - app
    small_angle = r < np.abs(diff) * SMALL_ANGLE_RATIO
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tau = np.where(small_angle, 0.0, diff / (2.0 * r))
        t = np.where(
            small_angle,
            r / np.where(small_angle, diff, 1.0),
            np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau)),
        )
    c = 1.0 / np.hypot(1.0, t)
    s = t * c

    # A <- A U with U = [[c, s], [-s e^{-i theta}, c e^{-i theta}]] on each (p, q) block.
    col_p = work[:, p].copy()
    col_q = work[:, q].copy()
    work[:, p] = col_p * c - col_q * (s * phase.conj())
    work[:, q] = col_p * s + col_q * (c * phase.conj())
    # A <- U^H A
    row_p = work[p, :].copy()
    row_q = work[q, :].copy()
    work[p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
    work[q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q

    work[p, q] = 0.0
    work[q, p] = 0.0
    work[p, p] = app - t * r
    work[q, q] = aqq + t * r


def _jacobi(matrix: ComplexMatrix, tol: float, max_sweeps: int) -> HermitianSpectrum:
    work = 0.5 * (matrix + matrix.conj().T)
    threshold = tol * float(np.linalg.norm(work))
    rounds = _round_robin_rounds(work.shape[0])

    sweeps = 0
    off = _offdiag_norm(work)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, threshold {threshold:.3e})"
            )
        for p, q in rounds:
            _rotate_round(work, p, q)
        sweeps += 1
        off = _offdiag_norm(work)
        if not math.isfinite(off):
            raise ConvergenceError(
                f"Jacobi sweep {sweeps} produced a non-finite off-diagonal norm"
            )

    logger.debug("Jacobi converged: dim=%d sweeps=%d offdiag=%.3e", work.shape[0], sweeps, off)
    eigenvalues = np.sort(work.diagonal().real)[::-1].copy()
    eigenvalues.setflags(write=False)
    return HermitianSpectrum(
        eigenvalues=eigenvalues, offdiag_residual=off, tol=tol, sweeps=sweeps
    )


def hermitian_eigenvalues(
    m: npt.ArrayLike,
    tol: float = DEFAULT_EIGEN_TOL,
    method: EigenMethod = EigenMethod.JACOBI,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> HermitianSpectrum:
    """Eigenvalues of a Hermitian matrix in descending order.

    Args:
        m: Square matrix, Hermitian within 1e-8.
        tol: Relative off-diagonal threshold for the Jacobi sweeps.
        method: ``JACOBI`` (reference) or ``LAPACK`` (``numpy.linalg.eigvalsh``).
        max_sweeps: Jacobi sweep cap.

    Returns:
        ``HermitianSpectrum`` whose eigenvalues sum to the trace of ``m``.

    Raises:
        NonSquareError: ``m`` is not square.
        NotHermitianError: ``max |m - m^H|`` exceeds 1e-8.
        ConvergenceError: the sweep cap was reached.
    """

    matrix = as_complex_matrix(m)
    _require_square(matrix)
    residual = hermiticity_residual(matrix)
    if residual > HERMITIAN_INPUT_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (residual {residual:.3e})")

    if EigenMethod(method) is EigenMethod.LAPACK:
        eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[::-1].copy()
        eigenvalues.setflags(write=False)
        return HermitianSpectrum(
            eigenvalues=eigenvalues,
            offdiag_residual=0.0,
            tol=tol,
            sweeps=0,
            method=EigenMethod.LAPACK,
        )
    return _jacobi(matrix, tol, max_sweeps)


def hermitian_eigenvalues_2x2(a: float, b: float, c: complex) -> tuple[float, float]:
    """Closed-form eigenvalues ``(hi, lo)`` of ``[[a, c], [conj(c), b]]``."""

    mean = 0.5 * (a + b)
    radius = math.hypot(0.5 * (a - b), abs(c))
    return mean + radius, mean - radius


def validate_density(
    m: npt.ArrayLike,
    tol: float = DENSITY_TOL,
    trace_tol: float = DENSITY_TOL,
    eigen_tol: float = DEFAULT_EIGEN_TOL,
    method: EigenMethod = EigenMethod.JACOBI,
) -> DensityMatrix:
    """Check that ``m`` is a density matrix and attach its clamped spectrum.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative raises.

    Raises:
        NonSquareError: ``m`` is not square.
        NotHermitianError: Hermiticity residual above ``tol``.
        TraceNotOneError: ``|trace - 1|`` above ``trace_tol``.
        NotPositiveError: an eigenvalue below ``-tol``.
    """

    matrix = as_complex_matrix(m)
    _require_square(matrix)
    herm_residual = hermiticity_residual(matrix)
    if herm_residual > tol:
        raise NotHermitianError(f"matrix is not Hermitian (residual {herm_residual:.3e})")
    trace = complex(np.trace(matrix))
    trace_residual = abs(trace.real - 1.0)
    if trace_residual > trace_tol:
        raise TraceNotOneError(f"trace is {trace.real!r}, expected 1")

    hermitian = 0.5 * (matrix + matrix.conj().T)
    spectrum = hermitian_eigenvalues(hermitian, tol=eigen_tol, method=method)
    lowest = float(spectrum.eigenvalues[-1])
    if lowest < -tol:
        raise NotPositiveError(f"matrix has negative eigenvalue {lowest!r}")

    eigenvalues = np.where(spectrum.eigenvalues < 0.0, 0.0, spectrum.eigenvalues)
    eigenvalues.setflags(write=False)
    hermitian.setflags(write=False)
    return DensityMatrix(
        entries=hermitian,
        hermiticity_residual=herm_residual,
        trace_residual=trace_residual,
        eigenvalues=eigenvalues,
    )


def givens_rotation(dim: int, p: int, q: int, theta: float, phase: float = 0.0) -> ComplexMatrix:
    """Unitary acting as ``[[cos, -e^{i phase} sin], [e^{-i phase} sin, cos]]`` on ``(p, q)``."""

    if not (0 <= p < dim and 0 <= q < dim and p != q):
        raise InvalidMatrixError(f"invalid Givens indices ({p}, {q}) for dimension {dim}")
    rotation = np.eye(dim, dtype=np.complex128)
    cos, sin = math.cos(theta), math.sin(theta)
    rotation[p, p] = cos
    rotation[q, q] = cos
    rotation[p, q] = -np.exp(1j * phase) * sin
    rotation[q, p] = np.exp(-1j * phase) * sin
    return rotation


def random_givens_unitary(
    dim: int, rng: np.random.Generator, rotations: int | None = None
) -> ComplexMatrix:
    """Product of random complex Givens rotations (identity for ``dim == 1``)."""

    unitary = np.eye(dim, dtype=np.complex128)
    if dim < 2:
        return unitary
    count = rotations if rotations is not None else dim * (dim - 1)
    for _ in range(count):
        p, q = rng.choice(dim, size=2, replace=False)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        unitary = givens_rotation(dim, int(p), int(q), theta, phase) @ unitary
    return unitary


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> ComplexMatrix:
    """Random density matrix ``G G^H / Tr(G G^H)`` from a complex Gaussian ``G``."""

    columns = rank if rank is not None else dim
    ginibre = rng.normal(size=(dim, columns)) + 1j * rng.normal(size=(dim, columns))
    rho = ginibre @ ginibre.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)
