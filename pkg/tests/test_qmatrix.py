from __future__ import annotations

import itertools
import unittest

import numpy as np

from mixmeter.errors import (
    ConvergenceError,
    InvalidMatrixError,
    NonSquareError,
    NotHermitianError,
    NotPositiveError,
    TraceNotOneError,
)
from mixmeter.models import EigenMethod
from mixmeter.qmatrix import (
    _round_robin_rounds,
    givens_rotation,
    hermitian_eigenvalues,
    hermitian_eigenvalues_2x2,
    hermiticity_residual,
    outer_product,
    random_density_matrix,
    random_givens_unitary,
    validate_density,
)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (raw + raw.conj().T)


class HermitianEigenvaluesTests(unittest.TestCase):
    def test_diagonal_input_needs_no_sweeps(self) -> None:
        spectrum = hermitian_eigenvalues(np.diag([0.2, 0.8]))
        np.testing.assert_array_equal(spectrum.eigenvalues, [0.8, 0.2])
        self.assertEqual(spectrum.sweeps, 0)
        self.assertEqual(spectrum.offdiag_residual, 0.0)

    def test_matches_closed_form_for_two_by_two(self) -> None:
        a, b, c = 0.7, 0.3, 0.2 - 0.15j
        hi, lo = hermitian_eigenvalues_2x2(a, b, c)
        spectrum = hermitian_eigenvalues([[a, c], [c.conjugate(), b]])
        self.assertAlmostEqual(spectrum.eigenvalues[0], hi, delta=1e-12)
        self.assertAlmostEqual(spectrum.eigenvalues[1], lo, delta=1e-12)

    def test_agrees_with_lapack_on_random_matrices(self) -> None:
        rng = np.random.default_rng(7)
        for dim in (2, 3, 5, 8, 13):
            matrix = random_hermitian(dim, rng)
            jacobi = hermitian_eigenvalues(matrix)
            reference = np.sort(np.linalg.eigvalsh(matrix))[::-1]
            np.testing.assert_allclose(jacobi.eigenvalues, reference, atol=1e-10)
            self.assertAlmostEqual(jacobi.trace, float(np.trace(matrix).real), delta=1e-12)
            self.assertLessEqual(
                jacobi.offdiag_residual, jacobi.tol * np.linalg.norm(matrix) + 1e-300
            )

    def test_eigenvalues_sorted_descending(self) -> None:
        rng = np.random.default_rng(11)
        values = hermitian_eigenvalues(random_hermitian(6, rng)).eigenvalues
        self.assertTrue(np.all(np.diff(values) <= 0.0))

    def test_results_are_bit_reproducible(self) -> None:
        matrix = random_hermitian(9, np.random.default_rng(3))
        first = hermitian_eigenvalues(matrix)
        second = hermitian_eigenvalues(matrix.copy())
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)
        self.assertEqual(first.sweeps, second.sweeps)

    def test_lapack_method_reports_no_sweeps(self) -> None:
        matrix = random_hermitian(4, np.random.default_rng(5))
        spectrum = hermitian_eigenvalues(matrix, method=EigenMethod.LAPACK)
        self.assertEqual(spectrum.method, EigenMethod.LAPACK)
        self.assertEqual(spectrum.sweeps, 0)
        self.assertEqual(spectrum.offdiag_residual, 0.0)
        np.testing.assert_allclose(
            spectrum.eigenvalues, hermitian_eigenvalues(matrix).eigenvalues, atol=1e-10
        )

    def test_sweep_cap_raises_convergence_error(self) -> None:
        with self.assertRaises(ConvergenceError):
            hermitian_eigenvalues([[1.0, 0.5], [0.5, 2.0]], max_sweeps=0)

    def test_rejects_non_square(self) -> None:
        with self.assertRaises(NonSquareError):
            hermitian_eigenvalues(np.ones((2, 3)))

    def test_rejects_non_hermitian(self) -> None:
        with self.assertRaises(NotHermitianError):
            hermitian_eigenvalues([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_non_finite(self) -> None:
        with self.assertRaises(InvalidMatrixError):
            hermitian_eigenvalues([[1.0, np.nan], [np.nan, 1.0]])

    def test_single_entry_matrix(self) -> None:
        spectrum = hermitian_eigenvalues([[0.25]])
        np.testing.assert_array_equal(spectrum.eigenvalues, [0.25])

    def test_subnormal_coupling_does_not_poison_sweeps(self) -> None:
        matrix = np.diag([0.1, 0.2, 0.3, 0.4]).astype(np.complex128)
        matrix[0, 1] = matrix[1, 0] = 0.05
        matrix[2, 3] = matrix[3, 2] = 0.05
        matrix[0, 3] = matrix[3, 0] = 1e-318
        expected = np.linalg.eigvalsh(matrix)[::-1]

        spectrum = hermitian_eigenvalues(matrix)
        self.assertTrue(np.isfinite(spectrum.offdiag_residual))
        np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-12)
        np.testing.assert_allclose(validate_density(matrix).eigenvalues, expected, atol=1e-12)

    def test_tiny_coupling_against_wide_gap(self) -> None:
        spectrum = hermitian_eigenvalues([[1.0, 1e-40j], [-1e-40j, 2.0]])
        np.testing.assert_allclose(spectrum.eigenvalues, [2.0, 1.0], atol=1e-15)
        self.assertTrue(np.isfinite(spectrum.offdiag_residual))


class RoundRobinScheduleTests(unittest.TestCase):
    def test_every_pair_visited_once_per_sweep(self) -> None:
        for n in (2, 3, 4, 5, 8, 9):
            seen: list[tuple[int, int]] = []
            for p, q in _round_robin_rounds(n):
                touched = list(p) + list(q)
                self.assertEqual(len(touched), len(set(touched)), "round pairs must be disjoint")
                seen.extend(zip(p.tolist(), q.tolist()))
            self.assertEqual(sorted(seen), list(itertools.combinations(range(n), 2)))


class DensityValidationTests(unittest.TestCase):
    def test_accepts_maximally_mixed_qubit(self) -> None:
        density = validate_density(np.eye(2) / 2)
        self.assertEqual(density.dim, 2)
        np.testing.assert_allclose(density.eigenvalues, [0.5, 0.5])
        self.assertFalse(density.entries.flags.writeable)

    def test_clamps_rounding_negatives(self) -> None:
        density = validate_density(np.diag([1.0, -1e-12]))
        self.assertEqual(density.eigenvalues[-1], 0.0)

    def test_trace_check(self) -> None:
        with self.assertRaises(TraceNotOneError):
            validate_density(np.diag([0.6, 0.6]))

    def test_trace_tolerance_is_adjustable(self) -> None:
        density = validate_density(np.diag([0.5, 0.5 + 5e-9]), trace_tol=1e-8)
        self.assertAlmostEqual(density.trace_residual, 5e-9, delta=1e-15)

    def test_positivity_check(self) -> None:
        with self.assertRaises(NotPositiveError):
            validate_density(np.diag([1.1, -0.1]))

    def test_hermiticity_checked_before_trace(self) -> None:
        with self.assertRaises(NotHermitianError):
            validate_density([[2.0, 1.0], [0.0, 2.0]])

    def test_random_density_matrices_validate(self) -> None:
        rng = np.random.default_rng(21)
        for dim in range(2, 7):
            density = validate_density(random_density_matrix(dim, rng))
            self.assertAlmostEqual(float(np.sum(density.eigenvalues)), 1.0, delta=1e-12)
            self.assertLessEqual(density.hermiticity_residual, 1e-12)


class UnitaryBuilderTests(unittest.TestCase):
    def test_givens_rotation_is_unitary(self) -> None:
        rotation = givens_rotation(4, 1, 3, 0.7, 1.3)
        np.testing.assert_allclose(rotation @ rotation.conj().T, np.eye(4), atol=1e-14)

    def test_givens_rejects_equal_indices(self) -> None:
        with self.assertRaises(InvalidMatrixError):
            givens_rotation(3, 1, 1, 0.2)

    def test_random_givens_product_is_unitary(self) -> None:
        unitary = random_givens_unitary(6, np.random.default_rng(2))
        np.testing.assert_allclose(unitary @ unitary.conj().T, np.eye(6), atol=1e-12)

    def test_outer_product_conjugates_right_factor(self) -> None:
        product = outer_product([1.0, 1j], [1.0, 1j])
        self.assertEqual(product[0, 1], -1j)
        self.assertEqual(hermiticity_residual(product), 0.0)


if __name__ == "__main__":
    unittest.main()
