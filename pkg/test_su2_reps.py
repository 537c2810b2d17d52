"""Tests for su2_reps module."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
import unittest

import numpy as np
import pytest

from ncg_workbench.errors import DomainError, InvalidDimensionError, ShapeError
from ncg_workbench.su2_reps import (
    GroupPoint, axis_rotation, coherent_state, coherent_states, haar_average, highest_weight,
    random_group_point, section, sphere_quadrature, spin_rep, unitary,
)


# ===========================================================================
# Representations
# ===========================================================================

class TestSpinRep(unittest.TestCase):

    def test_identities_hold_entrywise(self):
        for n in range(1, 17):
            rep = spin_rep(n)
            self.assertLess(rep.hermiticity_error(), 1e-12, f"n={n}")
            self.assertLess(rep.commutator_error(), 1e-12 * n, f"n={n}")
            self.assertLess(rep.casimir_error(), 1e-12 * n * n, f"n={n}")

    def test_casimir_n3(self):
        rep = spin_rep(3)
        total = sum(J @ J for J in rep.generators)
        np.testing.assert_allclose(total, 8 * np.eye(3), atol=1e-12)

    def test_j3_spectrum(self):
        rep = spin_rep(5)
        np.testing.assert_allclose(np.diag(rep.J3).real, [4, 2, 0, -2, -4])

    def test_trivial_representation(self):
        rep = spin_rep(1)
        for J in rep.generators:
            self.assertEqual(J.shape, (1, 1))
            self.assertEqual(J[0, 0], 0)

    def test_invalid_dimension(self):
        with self.assertRaises(InvalidDimensionError):
            spin_rep(0)
        with self.assertRaises(InvalidDimensionError):
            spin_rep(-3)
        with self.assertRaises(InvalidDimensionError):
            spin_rep(2.5)

    def test_highest_weight(self):
        rep = spin_rep(4)
        xi, P = highest_weight(rep)
        np.testing.assert_allclose(rep.J3 @ xi, 3 * xi, atol=1e-12)
        self.assertAlmostEqual(np.trace(P).real, 1.0, places=12)
        np.testing.assert_allclose(P @ P, P, atol=1e-12)


# ===========================================================================
# Group elements
# ===========================================================================

class TestGroupPoint:

    def setup_method(self):
        self.rng = np.random.default_rng(11)

    def test_axis_must_be_unit(self):
        with pytest.raises(DomainError):
            GroupPoint((1.0, 1.0, 0.0), 0.5)

    def test_angle_range(self):
        GroupPoint((0.0, 0.0, 1.0), 2 * np.pi)
        with pytest.raises(DomainError):
            GroupPoint((0.0, 0.0, 1.0), 2 * np.pi + 0.1)
        with pytest.raises(DomainError):
            GroupPoint((0.0, 0.0, 1.0), -0.1)

    def test_axis_shape(self):
        with pytest.raises(ShapeError):
            GroupPoint((1.0, 0.0), 0.5)

    def test_full_turn_is_minus_identity(self):
        rep = spin_rep(2)
        U = unitary(rep, GroupPoint((0.0, 0.0, 1.0), 2 * np.pi))
        np.testing.assert_allclose(U, -np.eye(2), atol=1e-12)

    def test_unitarity(self):
        for n in (2, 3, 6):
            rep = spin_rep(n)
            for _ in range(5):
                U = unitary(rep, random_group_point(self.rng))
                np.testing.assert_allclose(U @ U.conj().T, np.eye(n), atol=1e-12)

    def test_homomorphism(self):
        for n in (2, 3, 5):
            rep = spin_rep(n)
            for _ in range(10):
                g, h = random_group_point(self.rng), random_group_point(self.rng)
                np.testing.assert_allclose(unitary(rep, g) @ unitary(rep, h),
                                           unitary(rep, g.compose(h)), atol=1e-10)

    def test_inverse(self):
        g = random_group_point(self.rng)
        e = g.compose(g.inverse())
        assert e.so3_angle() < 1e-7

    def test_so3_angle_folds_second_sheet(self):
        g = GroupPoint((1.0, 0.0, 0.0), 1.5 * np.pi)
        assert g.so3_angle() == pytest.approx(0.5 * np.pi)

    def test_rotation_matrix_is_orthogonal(self):
        R = random_group_point(self.rng).rotation_matrix()
        np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0)

    def test_axis_rotation_reduces_angle(self):
        g = axis_rotation((0.0, 0.0, 2.0), 3 * np.pi)
        assert g.angle == pytest.approx(np.pi)
        np.testing.assert_allclose(g.axis, (0.0, 0.0, -1.0))

    def test_random_points_are_seeded(self):
        a = random_group_point(np.random.default_rng(5))
        b = random_group_point(np.random.default_rng(5))
        assert a == b


# ===========================================================================
# Coherent states
# ===========================================================================

class TestCoherentStates:

    def test_north_pole_is_highest_weight(self):
        rep = spin_rep(4)
        xi, _ = highest_weight(rep)
        np.testing.assert_allclose(coherent_state(rep, 0.0, 1.3), xi, atol=1e-12)

    def test_matches_section_unitary(self):
        rep = spin_rep(3)
        xi, _ = highest_weight(rep)
        for theta, phi in ((0.4, 0.0), (1.2, 2.1), (2.9, 5.5)):
            expected = unitary(rep, section(theta, phi)) @ xi
            np.testing.assert_allclose(coherent_state(rep, theta, phi), expected, atol=1e-12)

    def test_overlap_with_north(self):
        n = 5
        rep = spin_rep(n)
        xi, _ = highest_weight(rep)
        theta = np.linspace(0.0, np.pi, 7)
        psi = coherent_states(rep, theta, np.full_like(theta, 0.7))
        overlaps = np.abs(psi.conj() @ xi) ** 2
        np.testing.assert_allclose(overlaps, np.cos(theta / 2) ** (2 * (n - 1)), atol=1e-12)


# ===========================================================================
# Quadrature and averaging
# ===========================================================================

class TestSphereQuadrature(unittest.TestCase):

    def test_weights(self):
        for rule in ('legendre', 'polar'):
            quad = sphere_quadrature(6, rule)
            self.assertAlmostEqual(float(np.sum(quad.weights)), 1.0, places=13)
            self.assertTrue(np.all(quad.weights > 0))
            self.assertEqual(quad.size, 6 * 12)

    def test_low_moments(self):
        quad = sphere_quadrature(2)
        z = np.cos(quad.theta)
        self.assertAlmostEqual(quad.integrate(z ** 2).real, 1 / 3, delta=1e-13)
        self.assertAlmostEqual(quad.integrate(z).real, 0.0, delta=1e-13)

    def test_polynomial_exactness(self):
        quad = sphere_quadrature(3)
        self.assertEqual(quad.degree, 5)
        x, y, z = quad.points().T
        cases = [(x ** 2, 1 / 3), (x ** 4, 1 / 5), (z ** 4, 1 / 5), (x ** 2 * y ** 2, 1 / 15),
                 (x * y * z, 0.0), (x ** 3 * z ** 2, 0.0)]
        for values, expected in cases:
            self.assertAlmostEqual(quad.integrate(values).real, expected, delta=1e-12)

    def test_polar_rule_integrates_geodesic_distance(self):
        quad = sphere_quadrature(16, 'polar')
        self.assertAlmostEqual(quad.integrate(quad.theta).real, np.pi / 2, delta=1e-10)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidDimensionError):
            sphere_quadrature(0)
        with self.assertRaises(DomainError):
            sphere_quadrature(4, 'trapezoid')
        with self.assertRaises(ShapeError):
            sphere_quadrature(2).integrate(np.ones(3))


class TestHaarAverage(unittest.TestCase):

    def test_averages_to_trace(self):
        rng = np.random.default_rng(3)
        rep = spin_rep(4)
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        T = A + A.conj().T
        avg = haar_average(rep, T, sphere_quadrature(8))
        np.testing.assert_allclose(avg, np.trace(T) / 4 * np.eye(4), atol=1e-10)

    def test_traceless_averages_to_zero(self):
        rep = spin_rep(2)
        avg = haar_average(rep, rep.J3, sphere_quadrature(8))
        np.testing.assert_allclose(avg, np.zeros((2, 2)), atol=1e-12)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            haar_average(spin_rep(2), np.eye(3), sphere_quadrature(4))


if __name__ == '__main__':
    unittest.main()
