"""Exception hierarchy shared by every module.

``ValidationError`` marks bad input (exit code 3 in the CLI), ``ConvergenceError``
marks an eigensolver that hit its sweep cap (exit code 4). I/O problems are left
as ``OSError`` and mapped to exit code 2 by the CLI.
"""
from __future__ import annotations


class MixmeterError(Exception):
    """Base class for all library errors."""


class ValidationError(MixmeterError, ValueError):
    """Input violates a documented precondition."""


class InvalidMatrixError(ValidationError):
    pass


class NonSquareError(ValidationError):
    pass


class NotHermitianError(ValidationError):
    pass


class TraceNotOneError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class InvalidSpectrumError(ValidationError):
    pass


class InvalidDistributionError(ValidationError):
    pass


class DimensionTooSmallError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class TruncationTooSevereError(ValidationError):
    pass


class ComplexAmplitudeUnsupportedError(ValidationError):
    pass


class InvalidParameterError(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed density-matrix file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int | None = None) -> None:
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column


class ConvergenceError(MixmeterError, RuntimeError):
    """Iterative solver exceeded its iteration cap."""
