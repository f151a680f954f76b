"""Plain-text density matrix files.

Format::

    dim N
    re(0,0) im(0,0) re(0,1) im(0,1) ... re(0,N-1) im(0,N-1)
    ...                                             (N rows in total)

Tokens are whitespace separated decimals. Blank lines and lines starting with ``#``
are ignored. Values are written with 17 significant digits so a write/read cycle
reproduces every double exactly.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatchError, NonSquareError, ParseError
from .models import ComplexMatrix
from .qmatrix import as_complex_matrix

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(match.start() + 1, match.group()) for match in _TOKEN.finditer(line)]


def _parse_real(token: str, line_no: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a real number, got {token!r}", line_no, column) from None
    if not np.isfinite(value):
        raise ParseError(f"non-finite value {token!r}", line_no, column)
    return value


def parse_density_text(text: str) -> ComplexMatrix:
    """Parse the contents of a density matrix file (no physical validation)."""

    lines = [
        (index, line)
        for index, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("file is empty, expected a 'dim N' header", 1)

    header_no, header = lines[0]
    header_tokens = _tokens(header)
    if len(header_tokens) != 2 or header_tokens[0][1] != "dim":
        raise ParseError(f"expected 'dim N', got {header.strip()!r}", header_no, 1)
    column, raw_dim = header_tokens[1]
    try:
        dim = int(raw_dim)
    except ValueError:
        raise ParseError(f"dimension must be an integer, got {raw_dim!r}", header_no, column) from None
    if dim < 1:
        raise ParseError(f"dimension must be positive, got {dim}", header_no, column)

    rows = lines[1:]
    if len(rows) != dim:
        raise DimensionMismatchError(f"header declares {dim} rows but the file has {len(rows)}")

    matrix = np.empty((dim, dim), dtype=np.complex128)
    for row_index, (line_no, line) in enumerate(rows):
        tokens = _tokens(line)
        if len(tokens) != 2 * dim:
            raise ParseError(
                f"expected {2 * dim} values (re im pairs) but found {len(tokens)}", line_no
            )
        values = [_parse_real(token, line_no, col) for col, token in tokens]
        matrix[row_index] = np.array(values[0::2]) + 1j * np.array(values[1::2])
    return matrix


def read_density_file(path: Path) -> ComplexMatrix:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_start = raw.rfind(b"\n", 0, exc.start) + 1
        line = raw.count(b"\n", 0, exc.start) + 1
        raise ParseError(
            f"invalid UTF-8 byte 0x{raw[exc.start]:02x}", line, exc.start - line_start + 1
        ) from None
    return parse_density_text(text)


def format_density_text(matrix: npt.ArrayLike) -> str:
    values = as_complex_matrix(matrix)
    rows, cols = values.shape
    if rows != cols:
        raise NonSquareError(f"matrix is {rows}x{cols}, expected a square matrix")
    lines = [f"dim {rows}"]
    for row in values:
        lines.append(" ".join(f"{entry.real:.17g} {entry.imag:.17g}" for entry in row))
    return "\n".join(lines) + "\n"


def write_density_file(path: Path, matrix: npt.ArrayLike) -> Path:
    destination = Path(path)
    destination.parent.mkdir(parents=True, exist_ok=True)
    with destination.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(format_density_text(matrix))
    return destination
