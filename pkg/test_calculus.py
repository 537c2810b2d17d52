"""Tests for calculus module."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
from test_bootstrap import config_file
import unittest

import numpy as np
import pytest

from ncg_workbench import exact_linalg as xl
from ncg_workbench.algebra_io import load_calculus
from ncg_workbench.calculus import (
    GradedCalculus, MultilinearFunctional, UniversalForms, cocycle_from_trace, cyclic_cocycles,
    derivations, graded_product, hodge, is_derivation, spanning_check, to_graded_calculus,
    trace_from_cocycle, twisted_cocycle_check, twisted_trace_check, universal_forms,
    universal_property_check,
)
from ncg_workbench.errors import DegreeOverflowError, DomainError, PreconditionError, SizeLimitError
from ncg_workbench.homology import diagonal_algebra, matrix_algebra, swap_automorphism


def _random_pd(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return A @ A.conj().T + n * np.eye(n)


# ===========================================================================
# Universal forms
# ===========================================================================

class TestUniversalForms:

    def setup_method(self):
        self.rng = np.random.default_rng(21)
        self.c2 = universal_forms(diagonal_algebra(2), 2)
        self.m2 = universal_forms(matrix_algebra(2), 2)

    def test_dimensions(self):
        assert [self.c2.dim(k) for k in range(3)] == [3, 6, 12]
        assert len(self.m2.basis_labels(1)) == 20

    def test_d_squared_is_zero(self):
        for U in (self.c2, self.m2):
            assert xl.is_zero(xl.matmul(U.differential(1), U.differential(0)))
            form = U.random_form(0, self.rng)
            assert U.d_form(U.d_form(form)).is_zero

    def _pairs(self, U, count):
        for _ in range(count):
            p = int(self.rng.integers(0, 2))
            q = int(self.rng.integers(0, 2 - p))
            yield U.random_form(p, self.rng), U.random_form(q, self.rng)

    def test_leibniz(self):
        for U, count in ((self.c2, 50), (self.m2, 15)):
            for omega, eta in self._pairs(U, count):
                lhs = U.d_form(U.graded_product(omega, eta))
                sign = -1 if omega.degree % 2 else 1
                rhs = U.graded_product(U.d_form(omega), eta) + U.graded_product(omega, U.d_form(eta)).scale(sign)
                assert lhs == rhs

    def test_product_formula_matches_bimodule_actions(self):
        for U, count in ((self.c2, 50), (self.m2, 15)):
            for omega, eta in self._pairs(U, count):
                assert U.graded_product(omega, eta) == U.product_by_actions(omega, eta)

    def test_associativity(self):
        U = self.c2
        for _ in range(10):
            a, b = U.random_form(0, self.rng), U.random_form(1, self.rng)
            c = U.random_form(1, self.rng)
            assert graded_product(U, graded_product(U, a, b), c) == graded_product(U, a, graded_product(U, b, c))

    def test_unit_is_neutral(self):
        U = self.m2
        omega = U.random_form(1, self.rng)
        assert U.graded_product(U.unit_form(), omega) == omega
        assert U.graded_product(omega, U.unit_form()) == omega

    def test_monomial(self):
        U = self.c2
        # e_0 d e_1
        form = U.monomial([1, 0], [0, 1])
        assert form.terms == {(0, 1): xl.ONE}
        assert U.d_form(form).terms == {(2, 0, 1): xl.ONE}

    def test_vector_round_trip(self):
        U = self.m2
        omega = U.random_form(1, self.rng)
        values = U.to_vector(omega)
        assert len(values) == U.dim(1)
        assert U.from_vector(1, values) == omega

    def test_action_matrices_match_products(self):
        U = self.m2
        for k in range(3):
            omega = U.random_form(k, self.rng)
            column = xl.vector_to_column(U.to_vector(omega))
            for j in range(U.A.d):
                e_j = U.basis_form((j,))
                left = xl.column_to_vector(xl.matmul(U.left_action(j, k), column))
                right = xl.column_to_vector(xl.matmul(U.right_action(j, k), column))
                assert U.from_vector(k, left) == U.graded_product(e_j, omega)
                assert U.from_vector(k, right) == U.graded_product(omega, e_j)

    def test_guards(self):
        with pytest.raises(DegreeOverflowError):
            self.c2.d_form(self.c2.random_form(2, self.rng))
        with pytest.raises(DegreeOverflowError):
            self.c2.graded_product(self.c2.basis_form((0, 1)), self.c2.basis_form((1, 0, 1)))
        with pytest.raises(SizeLimitError):
            UniversalForms(matrix_algebra(2), 10)


# ===========================================================================
# Derivations
# ===========================================================================

class TestDerivations(unittest.TestCase):

    def test_matrix_algebra(self):
        basis = derivations(matrix_algebra(2))
        self.assertEqual(len(basis), 3)
        for X in basis:
            self.assertTrue(is_derivation(matrix_algebra(2), X))

    def test_commutative_points(self):
        self.assertEqual(derivations(diagonal_algebra(2)), [])

    def test_non_derivation(self):
        self.assertFalse(is_derivation(diagonal_algebra(2), xl.identity(2)))


# ===========================================================================
# Cyclic cocycles and closed graded traces
# ===========================================================================

class TestCocycleTraceCorrespondence(unittest.TestCase):

    def test_round_trip(self):
        A = diagonal_algebra(2)
        for n in range(3):
            for psi in cyclic_cocycles(A, n):
                U, integral = trace_from_cocycle(psi, A)
                self.assertEqual(cocycle_from_trace(U, integral, n), psi)

    def test_multilinear_evaluation(self):
        phi = MultilinearFunctional(1, 2, [1, 2, 3, 4])
        self.assertEqual(phi.evaluate([1, 0], [0, 1]), phi(0, 1))
        self.assertEqual(phi(0, 1), xl.qqi(2))
        self.assertEqual(phi.evaluate([1, 1], [1, 1]), xl.qqi(10))
        self.assertEqual(phi.evaluate([0, 2], [1, 0]), xl.qqi(6))

    def test_degree_zero_cocycles_are_traces(self):
        self.assertEqual(len(cyclic_cocycles(diagonal_algebra(2), 0)), 2)
        self.assertEqual(len(cyclic_cocycles(matrix_algebra(2), 0)), 1)

    def test_non_closed_integral(self):
        U = universal_forms(diagonal_algebra(2), 1)
        integral = [0] * U.dim(1)
        integral[U.index((U.unit_index, 0))] = 1
        with self.assertRaises(PreconditionError) as ctx:
            cocycle_from_trace(U, integral, 1)
        self.assertEqual(ctx.exception.witness, (0,))

    def test_non_cocycle_is_rejected(self):
        A = diagonal_algebra(2)
        psi = MultilinearFunctional(1, 2, [1, 0, 0, 0])
        with self.assertRaises(PreconditionError):
            trace_from_cocycle(psi, A)

    def test_twisted_trace_check(self):
        U = universal_forms(diagonal_algebra(2), 0)
        integral = [1, 2, 0]
        self.assertTrue(twisted_trace_check(U, integral, xl.identity(2), 0))
        self.assertFalse(twisted_trace_check(U, integral, swap_automorphism(), 0))

    def test_twisted_cocycle_check(self):
        A = diagonal_algebra(2).with_automorphism(swap_automorphism())
        phi = MultilinearFunctional(0, 2, [1, -1])
        self.assertFalse(twisted_cocycle_check(phi, swap_automorphism(), A, 0))
        identity_twist = diagonal_algebra(2).with_automorphism(xl.identity(2))
        self.assertTrue(twisted_cocycle_check(phi, xl.identity(2), identity_twist, 0))


# ===========================================================================
# Finite calculi and Hodge decomposition
# ===========================================================================

class TestGradedCalculus:

    def setup_method(self):
        self.two_point = load_calculus(config_file('calculi', 'two_point.yaml'))

    def test_rejects_non_complex(self):
        with pytest.raises(DomainError):
            GradedCalculus([1, 1, 1], [xl.from_rows([[1]]), xl.from_rows([[1]])])

    def test_rejects_indefinite_gram(self):
        with pytest.raises(DomainError):
            GradedCalculus([1, 1], [xl.from_rows([[1]])], grams=[np.eye(1), -np.eye(1)])

    def test_spanning(self):
        U = universal_forms(diagonal_algebra(2), 2)
        C = to_graded_calculus(U)
        assert spanning_check(C, 1)
        assert spanning_check(C, 2)
        assert spanning_check(self.two_point, 1)

    def test_universal_property(self):
        U = universal_forms(diagonal_algebra(2), 2)
        assert universal_property_check(U, self.two_point, xl.identity(2)) is None

    def test_two_point_hodge(self):
        report = hodge(self.two_point)
        assert report.harmonic_dimensions == [1, 0, 1]
        assert report.cohomology_dimensions == [1, 0, 1]
        assert report.orthogonal and report.additive


class TestHodge(unittest.TestCase):

    def setUp(self):
        self.U = universal_forms(diagonal_algebra(2), 2)

    def test_random_grams(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            grams = [_random_pd(rng, self.U.dim(k)) for k in range(3)]
            report = hodge(to_graded_calculus(self.U, grams))
            self.assertTrue(report.additive)
            for degree in report.degrees:
                self.assertLess(degree.orthogonality_residual, 1e-9)
                self.assertGreaterEqual(float(np.min(degree.laplacian_eigenvalues, initial=0.0)), -1e-12)
            self.assertEqual(report.harmonic_dimensions, report.cohomology_dimensions)

    def test_universal_cohomology(self):
        report = hodge(to_graded_calculus(self.U))
        # 1̃ in degree 0; everything not of the form 1̃ da.. in the top degree
        self.assertEqual(report.cohomology_dimensions, [1, 0, 8])

    def test_projectors_sum_to_identity(self):
        rng = np.random.default_rng(9)
        grams = [_random_pd(rng, self.U.dim(k)) for k in range(3)]
        report = hodge(to_graded_calculus(self.U, grams))
        for k in range(3):
            total = sum(report.projector(k, kind) for kind in ('harmonic', 'exact', 'coexact'))
            np.testing.assert_allclose(total, np.eye(self.U.dim(k)), atol=1e-8)

    def test_rescaled_grams_keep_subspaces(self):
        rng = np.random.default_rng(13)
        grams = [_random_pd(rng, self.U.dim(k)) for k in range(3)]
        base = hodge(to_graded_calculus(self.U, grams))
        scaled = hodge(to_graded_calculus(self.U, [c * g for c, g in zip((0.5, 3.0, 20.0), grams)]))
        self.assertEqual(scaled.harmonic_dimensions, base.harmonic_dimensions)
        for k in range(3):
            for kind in ('harmonic', 'exact', 'coexact'):
                np.testing.assert_allclose(scaled.projector(k, kind), base.projector(k, kind), atol=1e-8)

    def test_dirac_squares_to_laplacian(self):
        report = hodge(to_graded_calculus(self.U))
        lap = np.sort(np.concatenate([d.laplacian_eigenvalues for d in report.degrees]))
        np.testing.assert_allclose(report.laplacian_eigenvalues, lap, atol=1e-9)


if __name__ == '__main__':
    unittest.main()
