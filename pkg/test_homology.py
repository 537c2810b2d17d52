"""Tests for homology module."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
import unittest

import pytest

from ncg_workbench import exact_linalg as xl
from ncg_workbench.errors import DomainError, MissingAutomorphismError, SizeLimitError, ValidationError
from ncg_workbench.homology import (
    FiniteAlgebra, bar_boundary, commutator_quotient, complex_numbers, contracting_homotopy,
    cyclic_cocycle_basis, cyclic_operator, diagonal_algebra, hochschild_boundary, homology_dims,
    identity_map, inner_automorphism, matrix_algebra, swap_automorphism, twisted_boundary,
)


# ===========================================================================
# Algebras
# ===========================================================================

class TestFiniteAlgebra(unittest.TestCase):

    def test_presets_validate(self):
        for A in (complex_numbers(), diagonal_algebra(3), matrix_algebra(2)):
            A.validate()
            self.assertTrue(A.is_associative())

    def test_matrix_units_multiply(self):
        M2 = matrix_algebra(2)
        # E01 E10 = E00
        self.assertEqual(M2.multiply(M2.basis_vector(1), M2.basis_vector(2)), M2.basis_vector(0))
        # E10 E01 = E11
        self.assertEqual(M2.multiply(M2.basis_vector(2), M2.basis_vector(1)), M2.basis_vector(3))

    def test_unit_law_failure(self):
        with self.assertRaises(DomainError):
            FiniteAlgebra(1, {(0, 0, 0): 2}, (1,)).validate()

    def test_automorphism_must_be_multiplicative(self):
        sigma = xl.from_rows([[1, 1], [0, 1]])
        with self.assertRaises(DomainError):
            diagonal_algebra(2).with_automorphism(sigma).validate()

    def test_inner_automorphism_is_multiplicative(self):
        sigma = inner_automorphism(2, [[1, 0], [0, 2]])
        matrix_algebra(2).with_automorphism(sigma).validate()
        self.assertEqual(xl.entry(sigma, 1, 1), xl.qqi(xl.parse_scalar('1/2')))
        self.assertEqual(xl.entry(sigma, 2, 2), xl.qqi(2))

    def test_change_basis_preserves_homology(self):
        P = xl.from_rows([[1, 1], [0, 1]])
        A = diagonal_algebra(2).change_basis(P)
        A.validate()
        self.assertEqual(homology_dims(A, 1), [2, 0])

    def test_commutator_quotient(self):
        self.assertEqual(commutator_quotient(matrix_algebra(2)), 1)
        self.assertEqual(commutator_quotient(diagonal_algebra(2)), 2)


# ===========================================================================
# Chain maps
# ===========================================================================

class TestChainMaps:

    def setup_method(self):
        self.algebras = [diagonal_algebra(2), matrix_algebra(2)]

    def test_boundaries_square_to_zero(self):
        for A in self.algebras:
            for n in (1, 2):
                assert hochschild_boundary(A, n).compose(hochschild_boundary(A, n + 1)).is_zero
                assert bar_boundary(A, n).compose(bar_boundary(A, n + 1)).is_zero

    def test_twisted_boundary_squares_to_zero(self):
        A = diagonal_algebra(2).with_automorphism(swap_automorphism())
        for n in (1, 2):
            assert twisted_boundary(A, n).compose(twisted_boundary(A, n + 1)).is_zero

    def test_contracting_homotopy(self):
        for A in self.algebras:
            assert xl.equal(bar_boundary(A, 1).compose(contracting_homotopy(A, 0)).matrix,
                            identity_map(A, 0).matrix)
            for n in (1, 2):
                lhs = (bar_boundary(A, n + 1).compose(contracting_homotopy(A, n))
                       + contracting_homotopy(A, n - 1).compose(bar_boundary(A, n)))
                assert xl.equal(lhs.matrix, identity_map(A, n).matrix)

    def test_cyclic_operator_order(self):
        A = diagonal_algebra(2)
        lam = cyclic_operator(A, 2)
        cube = lam.compose(lam).compose(lam)
        assert xl.equal(cube.matrix, identity_map(A, 2).matrix)

    def test_degree_guards(self):
        with pytest.raises(ValidationError):
            hochschild_boundary(complex_numbers(), 0)
        with pytest.raises(MissingAutomorphismError):
            twisted_boundary(complex_numbers(), 1)


# ===========================================================================
# Homology dimensions
# ===========================================================================

class TestHomologyDims(unittest.TestCase):

    def test_complex_numbers(self):
        self.assertEqual(homology_dims(complex_numbers(), 4), [1, 0, 0, 0, 0])

    def test_cyclic_cohomology_of_complex_numbers(self):
        self.assertEqual(homology_dims(complex_numbers(), 3, 'cyclic', 'cohomology'), [1, 0, 1, 0])
        self.assertEqual(homology_dims(complex_numbers(), 3, 'cyclic', 'homology'), [1, 0, 1, 0])

    def test_hochschild_cohomology_of_complex_numbers(self):
        self.assertEqual(homology_dims(complex_numbers(), 3, side='cohomology'), [1, 0, 0, 0])

    def test_matrix_algebra(self):
        self.assertEqual(homology_dims(matrix_algebra(2), 2), [1, 0, 0])

    def test_two_points(self):
        self.assertEqual(homology_dims(diagonal_algebra(2), 2), [2, 0, 0])
        self.assertEqual(homology_dims(diagonal_algebra(2), 2, side='cohomology'), [2, 0, 0])

    def test_identity_twist_reduces_to_untwisted(self):
        for A in (diagonal_algebra(2), matrix_algebra(2)):
            twisted = A.with_automorphism(xl.identity(A.d))
            for plain, variant in (('hochschild', 'twisted-hochschild'), ('cyclic', 'twisted-cyclic')):
                for side in ('homology', 'cohomology'):
                    self.assertEqual(homology_dims(twisted, 2, variant, side),
                                     homology_dims(A, 2, plain, side), f"{A.name} {variant} {side}")

    def test_dims_invariant_under_change_of_basis(self):
        cases = [
            (matrix_algebra(2), xl.from_rows([[1, 0, 0, 1], [0, 1, 0, 0], [0, 2, 1, 0], [1, 0, 0, -1]]),
             ('hochschild', 'cyclic')),
            (diagonal_algebra(2).with_automorphism(swap_automorphism()), xl.from_rows([[1, 1], [1, -1]]),
             ('twisted-hochschild', 'twisted-cyclic')),
        ]
        for A, P, variants in cases:
            B = A.change_basis(P)
            B.validate()
            for variant in variants:
                for side in ('homology', 'cohomology'):
                    self.assertEqual(homology_dims(B, 2, variant, side), homology_dims(A, 2, variant, side),
                                     f"{A.name} {variant} {side}")

    def test_missing_automorphism(self):
        with self.assertRaises(MissingAutomorphismError):
            homology_dims(complex_numbers(), 2, 'twisted-cyclic')

    def test_argument_validation(self):
        with self.assertRaises(ValidationError):
            homology_dims(complex_numbers(), 2, 'morita')
        with self.assertRaises(ValidationError):
            homology_dims(complex_numbers(), 2, side='both')
        with self.assertRaises(ValidationError):
            homology_dims(complex_numbers(), -1)

    def test_size_guard(self):
        with self.assertRaises(SizeLimitError):
            homology_dims(matrix_algebra(2), 4, size_limit=1000)


class TestCyclicCocycles(unittest.TestCase):

    def test_complex_numbers(self):
        A = complex_numbers()
        self.assertEqual(cyclic_cocycle_basis(A, 0).shape[1], 1)
        self.assertEqual(cyclic_cocycle_basis(A, 1).shape[1], 0)
        self.assertEqual(cyclic_cocycle_basis(A, 2).shape[1], 1)

    def test_swap_twist_flips_difference_functional(self):
        A = diagonal_algebra(2).with_automorphism(swap_automorphism())
        lam = cyclic_operator(A, 0, twisted=True)
        phi = xl.from_rows([[1, -1]])
        # (λ_σ φ)(a) = φ(σ(a)) = a_2 - a_1 = -φ(a)
        moved = xl.matmul(phi, lam.matrix)
        self.assertEqual(xl.to_rows(moved), [[xl.qqi(-1), xl.qqi(1)]])
        self.assertEqual(cyclic_cocycle_basis(A, 0, twisted=True).shape[1], 0)


if __name__ == '__main__':
    unittest.main()
