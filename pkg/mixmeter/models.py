from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from .errors import (
    ComplexAmplitudeUnsupportedError,
    DimensionMismatchError,
    InvalidDistributionError,
    InvalidParameterError,
    InvalidSpectrumError,
)

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

# Entries in [-NEGATIVE_CLAMP, 0) are rounding noise and are set to zero.
NEGATIVE_CLAMP = 1e-10
SUM_TOLERANCE = 1e-9


class EigenMethod(StrEnum):
    JACOBI = "jacobi"
    LAPACK = "lapack"


class Cat3Mode(StrEnum):
    """Which value fills the (2,3) entry of the three-state Gram matrix."""

    PAPER = "paper"
    RECOMPUTED = "recomputed"


def _frozen_array(values: npt.ArrayLike, dtype: type) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def _check_time_grid(name: str, grid: Sequence[float]) -> tuple[float, ...]:
    values = tuple(float(value) for value in grid)
    if not values:
        raise InvalidParameterError(f"{name} must contain at least one point")
    if values[0] < 0.0:
        raise InvalidParameterError(f"{name} must start at a non-negative value, got {values[0]}")
    for previous, current in zip(values, values[1:]):
        if not current > previous:
            raise InvalidParameterError(
                f"{name} must be strictly increasing, found {previous} followed by {current}"
            )
    return values


@dataclass(slots=True, frozen=True, eq=False)
class HermitianSpectrum:
    """Eigenvalues of a Hermitian matrix with the solver's convergence certificate.

    Attributes:
        eigenvalues: Real eigenvalues sorted in descending order.
        offdiag_residual: Frobenius norm of the off-diagonal part after the last sweep.
        tol: Relative convergence threshold the residual was tested against.
        sweeps: Number of Jacobi sweeps performed (0 for LAPACK or diagonal input).
        method: Solver that produced the values.
    """

    eigenvalues: RealVector
    offdiag_residual: float
    tol: float
    sweeps: int
    method: EigenMethod = EigenMethod.JACOBI

    @property
    def trace(self) -> float:
        return float(np.sum(self.eigenvalues))


@dataclass(slots=True, frozen=True, eq=False)
class DensityMatrix:
    """Validated Hermitian, positive-semidefinite, unit-trace matrix.

    Attributes:
        entries: Read-only ``dim x dim`` complex array.
        hermiticity_residual: ``max |m[i, j] - conj(m[j, i])|`` of the input.
        trace_residual: ``|trace - 1|`` of the input.
        eigenvalues: Descending eigenvalues with rounding negatives clamped to zero.
    """

    entries: ComplexMatrix
    hermiticity_residual: float
    trace_residual: float
    eigenvalues: RealVector

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


@dataclass(slots=True, frozen=True, eq=False)
class Spectrum:
    """Probability vector on which every entropy functional is evaluated."""

    probs: RealVector

    @classmethod
    def from_values(cls, values: Iterable[float]) -> Spectrum:
        """Validate and clamp a list of probabilities.

        Entries in ``[-1e-10, 0)`` become 0 and entries in ``(1, 1 + 1e-10]`` become 1;
        anything further out, non-finite, or a sum off by more than 1e-9 raises
        ``InvalidSpectrumError``.
        """

        probs = np.array(list(values), dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidSpectrumError("spectrum must be a non-empty list of probabilities")
        if not np.all(np.isfinite(probs)):
            raise InvalidSpectrumError("spectrum contains non-finite entries")
        low = float(probs.min())
        if low < -NEGATIVE_CLAMP:
            raise InvalidSpectrumError(f"spectrum entry {low} is negative")
        high = float(probs.max())
        if high > 1.0 + NEGATIVE_CLAMP:
            raise InvalidSpectrumError(f"spectrum entry {high} exceeds 1")
        probs = np.clip(probs, 0.0, 1.0)
        total = float(np.sum(probs))
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidSpectrumError(f"spectrum sums to {total!r}, expected 1")
        return cls(probs=_frozen_array(probs, np.float64))

    @property
    def support(self) -> RealVector:
        """Strictly positive entries in their original order."""
        return self.probs[self.probs > 0.0]

    def padded(self, extra_zeros: int) -> Spectrum:
        return Spectrum(
            probs=_frozen_array(np.concatenate([self.probs, np.zeros(extra_zeros)]), np.float64)
        )


@dataclass(slots=True, frozen=True, eq=False)
class PhotonDistribution:
    """Photon-number probabilities ``P_n`` indexed by ``n = 0, 1, ...``."""

    probs: RealVector

    @classmethod
    def from_values(cls, values: Iterable[float]) -> PhotonDistribution:
        probs = np.array(list(values), dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0 or not np.all(np.isfinite(probs)):
            raise InvalidDistributionError("photon distribution must be a finite non-empty list")
        if float(probs.min()) < -NEGATIVE_CLAMP:
            raise InvalidDistributionError(f"photon probability {float(probs.min())} is negative")
        probs = np.clip(probs, 0.0, None)
        total = float(np.sum(probs))
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionError(f"photon distribution sums to {total!r}, expected 1")
        return cls(probs=_frozen_array(probs, np.float64))


@dataclass(slots=True, frozen=True)
class MixednessReport:
    """Entropy functionals of one state, all computed from the same spectrum.

    Attributes:
        entropy_s: Von Neumann entropy in nats.
        linear_entropy_xi: ``1 - Tr(rho^2)``.
        entropy_variance: ``(Delta S)^2`` in nats squared.
        q_s: Mixedness parameter ``exp(-(Delta S)^2 / S)``, 0 for pure states.
        dimension: Matrix dimension the report was computed on.
        normalized_entropy: ``S / ln d`` when a reference dimension ``d`` was given.
        normalized_linear_entropy: ``d/(d-1) * xi`` when a reference dimension was given.
    """

    entropy_s: float
    linear_entropy_xi: float
    entropy_variance: float
    q_s: float
    dimension: int
    normalized_entropy: float | None = None
    normalized_linear_entropy: float | None = None

    @property
    def entropy_fluctuation(self) -> float:
        return math.sqrt(self.entropy_variance)


@dataclass(slots=True, frozen=True)
class FockConfig:
    """Truncated Fock basis settings.

    Attributes:
        truncation_n: Number of kept basis states ``|0>, ..., |N-1>``.
        renormalize: Rescale truncated vectors to unit norm (residual still reported).
        auto_raise: Allow constructors to enlarge ``truncation_n`` when the kept
            probability mass is insufficient instead of raising.
    """

    truncation_n: int
    renormalize: bool = True
    auto_raise: bool = False

    def __post_init__(self) -> None:
        if int(self.truncation_n) != self.truncation_n or self.truncation_n < 1:
            raise InvalidParameterError(
                f"truncation_n must be a positive integer, got {self.truncation_n}"
            )


@dataclass(slots=True, frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a truncated (or abstract) basis.

    Attributes:
        amps: Read-only complex amplitude vector.
        norm_sq: Cached ``<psi|psi>``.
        truncation_residual: Probability mass lost by cutting the basis.
    """

    amps: npt.NDArray[np.complex128]
    norm_sq: float
    truncation_residual: float = 0.0

    @classmethod
    def from_amplitudes(cls, amps: npt.ArrayLike, truncation_residual: float = 0.0) -> StateVector:
        vector = _frozen_array(amps, np.complex128)
        if vector.ndim != 1:
            raise InvalidParameterError("state amplitudes must be a one-dimensional vector")
        if not np.all(np.isfinite(vector)):
            raise InvalidParameterError("state amplitudes contain non-finite entries")
        norm_sq = float(np.vdot(vector, vector).real)
        return cls(amps=vector, norm_sq=norm_sq, truncation_residual=max(truncation_residual, 0.0))

    @property
    def dim(self) -> int:
        return int(self.amps.shape[0])

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"cannot take inner product of vectors of size {self.dim} and {other.dim}"
            )
        return complex(np.vdot(self.amps, other.amps))


@dataclass(slots=True, frozen=True, eq=False)
class PureStateMixture:
    """Weighted unit-norm pure states ``sum_i w_i |psi_i><psi_i|``."""

    components: tuple[tuple[float, StateVector], ...]

    @classmethod
    def from_components(cls, components: Iterable[tuple[float, StateVector]]) -> PureStateMixture:
        items = tuple((float(weight), state) for weight, state in components)
        if not items:
            raise InvalidParameterError("a mixture needs at least one component")
        for weight, state in items:
            if not 0.0 < weight <= 1.0:
                raise InvalidParameterError(f"mixture weight {weight} is outside (0, 1]")
            if abs(state.norm_sq - 1.0) > SUM_TOLERANCE:
                raise InvalidParameterError(
                    f"mixture component has norm^2 {state.norm_sq!r}; weights are carried separately"
                )
        total = sum(weight for weight, _ in items)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidParameterError(f"mixture weights sum to {total!r}, expected 1")
        dims = {state.dim for _, state in items}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixture components have differing sizes {sorted(dims)}")
        return cls(components=items)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(weight for weight, _ in self.components)

    @property
    def states(self) -> tuple[StateVector, ...]:
        return tuple(state for _, state in self.components)


@dataclass(slots=True, frozen=True)
class JcmConfig:
    """Resonant atom-field evolution settings; times are stored as ``lambda * t``.

    Attributes:
        alpha: Initial coherent amplitude of the field (atom starts excited).
        coupling_lambda: Rabi frequency, only used to convert absolute times.
        time_grid: Strictly increasing ``lambda * t`` values.
        fock: Field truncation.
        track_field: Also diagonalise the reduced field density at every point.
    """

    alpha: complex
    coupling_lambda: float
    time_grid: tuple[float, ...]
    fock: FockConfig
    track_field: bool = True

    def __post_init__(self) -> None:
        if not self.coupling_lambda > 0.0:
            raise InvalidParameterError(
                f"coupling_lambda must be positive, got {self.coupling_lambda}"
            )
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "time_grid", _check_time_grid("time_grid", self.time_grid))

    @classmethod
    def from_absolute_times(
        cls,
        alpha: complex,
        coupling_lambda: float,
        times: Sequence[float],
        fock: FockConfig,
        track_field: bool = True,
    ) -> JcmConfig:
        if not coupling_lambda > 0.0:
            raise InvalidParameterError(f"coupling_lambda must be positive, got {coupling_lambda}")
        return cls(
            alpha=alpha,
            coupling_lambda=coupling_lambda,
            time_grid=tuple(coupling_lambda * float(t) for t in times),
            fock=fock,
            track_field=track_field,
        )


@dataclass(slots=True, frozen=True, eq=False)
class JcmSnapshot:
    """Atomic and field mixedness at one interaction time.

    Attributes:
        lambda_t: Dimensionless interaction time.
        atomic_rho: Reduced 2x2 atomic density matrix.
        s_atom: Atomic entropy (nats).
        ds_atom: Atomic entropy fluctuation (nats).
        q_s_atom: Atomic mixedness parameter.
        s_field: Field entropy from the reduced field matrix, None when not tracked.
        branch_norm_sum: ``<psi1|psi1> + <psi2|psi2>``.
        mandel_q_field: Mandel parameter of the field photon statistics.
        araki_lieb: Whether the atom/field/total entropies satisfy the Araki-Lieb
            bounds with zero total entropy; None when the field is not tracked.
    """

    lambda_t: float
    atomic_rho: DensityMatrix
    s_atom: float
    ds_atom: float
    q_s_atom: float
    s_field: float | None
    branch_norm_sum: float
    mandel_q_field: float
    araki_lieb: bool | None = None


def _real_amplitude(name: str, value: complex | float) -> float:
    number = complex(value)
    if number.imag != 0.0:
        raise ComplexAmplitudeUnsupportedError(
            f"{name} must be real for the damped model, got {number}"
        )
    if number.real < 0.0:
        raise InvalidParameterError(f"{name} must be non-negative, got {number.real}")
    return number.real


@dataclass(slots=True, frozen=True)
class DampedConfig:
    """Decaying superposition of two coherent states; times are stored as ``gamma * t``.

    Only real, non-negative amplitudes are accepted so that fractional powers of the
    overlap are single valued.
    """

    alpha: float
    beta: float
    gamma: float
    time_grid: tuple[float, ...]
    fock: FockConfig = field(default_factory=lambda: FockConfig(truncation_n=128))

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _real_amplitude("alpha", self.alpha))
        object.__setattr__(self, "beta", _real_amplitude("beta", self.beta))
        if not self.gamma > 0.0:
            raise InvalidParameterError(f"gamma must be positive, got {self.gamma}")
        object.__setattr__(self, "time_grid", _check_time_grid("time_grid", self.time_grid))


@dataclass(slots=True, frozen=True)
class DampedSnapshot:
    """Closed-form two-eigenvalue spectrum of the decaying field at one ``gamma * t``."""

    gamma_t: float
    lambda_plus: float
    lambda_minus: float
    s: float
    ds: float
    q_s: float
    trace_check: float
