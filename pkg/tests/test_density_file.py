from __future__ import annotations

import tempfile
from pathlib import Path
import unittest

import numpy as np

from mixmeter.density_file import (
    format_density_text,
    parse_density_text,
    read_density_file,
    write_density_file,
)
from mixmeter.errors import DimensionMismatchError, NonSquareError, ParseError
from mixmeter.qmatrix import random_density_matrix, validate_density


class ParseDensityTextTests(unittest.TestCase):
    def test_parses_diagonal_qubit(self) -> None:
        matrix = parse_density_text("dim 2\n0.5 0 0 0\n0 0 0.5 0\n")
        np.testing.assert_array_equal(matrix, np.diag([0.5, 0.5]))

    def test_interleaves_real_and_imaginary_parts(self) -> None:
        matrix = parse_density_text("dim 2\n0.5 0 0.1 -0.2\n0.1 0.2 0.5 0\n")
        self.assertEqual(matrix[0, 1], 0.1 - 0.2j)
        self.assertEqual(matrix[1, 0], 0.1 + 0.2j)

    def test_skips_comments_and_blank_lines(self) -> None:
        text = "# maximally mixed\n\ndim 1\n\n# only entry\n1 0\n"
        np.testing.assert_array_equal(parse_density_text(text), [[1.0]])

    def test_row_count_must_match_header(self) -> None:
        with self.assertRaises(DimensionMismatchError):
            parse_density_text("dim 3\n1 0 0 0 0 0\n0 0 0 0 0 0\n")

    def test_reports_line_and_column_of_bad_token(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            parse_density_text("dim 2\n0.5 0 0 0\n0 0 half 0\n")
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 5)
        self.assertIn("line 3, column 5", str(ctx.exception))

    def test_rejects_short_row(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            parse_density_text("dim 2\n0.5 0 0\n0 0 0.5 0\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_rejects_bad_header(self) -> None:
        for text in ("size 2\n", "dim two\n", "dim 0\n", ""):
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    parse_density_text(text)

    def test_rejects_non_finite_values(self) -> None:
        with self.assertRaises(ParseError):
            parse_density_text("dim 1\nnan 0\n")

    def test_parse_does_not_validate_physics(self) -> None:
        matrix = parse_density_text("dim 2\n1 0 0 0\n0 0 1 0\n")
        self.assertEqual(float(np.trace(matrix).real), 2.0)


class ReadDensityFileTests(unittest.TestCase):
    def test_invalid_utf8_is_a_parse_error(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "bad.txt"
            path.write_bytes(b"dim 1\n1 0 \xff\n")
            with self.assertRaises(ParseError) as ctx:
                read_density_file(path)

        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 5)
        self.assertIn("0xff", str(ctx.exception))

    def test_reads_crlf_files(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "rho.txt"
            path.write_bytes(b"dim 1\r\n1 0\r\n")
            np.testing.assert_array_equal(read_density_file(path), [[1.0]])


class DensityFileRoundTripTests(unittest.TestCase):
    def test_write_then_read_is_exact(self) -> None:
        matrix = random_density_matrix(4, np.random.default_rng(17))
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_density_file(Path(tmpdir) / "nested" / "rho.txt", matrix)
            restored = read_density_file(path)
        np.testing.assert_array_equal(restored, matrix)
        validate_density(restored)

    def test_output_uses_lf_line_endings(self) -> None:
        with tempfile.TemporaryDirectory() as tmpdir:
            path = write_density_file(Path(tmpdir) / "rho.txt", np.eye(3) / 3)
            raw = path.read_bytes()
        self.assertNotIn(b"\r", raw)
        self.assertTrue(raw.startswith(b"dim 3\n"))
        self.assertEqual(raw.count(b"\n"), 4)

    def test_format_rejects_non_square(self) -> None:
        with self.assertRaises(NonSquareError):
            format_density_text(np.ones((2, 3)))


if __name__ == "__main__":
    unittest.main()
