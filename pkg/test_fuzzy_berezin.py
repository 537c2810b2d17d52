"""Tests for fuzzy_berezin module."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
import unittest

import numpy as np
import pytest

from ncg_workbench.errors import DomainError, ShapeError
from ncg_workbench.fuzzy_berezin import (
    SampledFunction, berezin_kernel, berezin_quadrature, berezin_transform, closed_form_kernel,
    contravariant_symbol, covariant_symbol, default_level, fuzzy_sphere, hilbert_schmidt,
    kernel_convolution, l2_inner, sample_coordinate,
)
from ncg_workbench.su2_reps import highest_weight, sphere_quadrature, spin_rep


# ===========================================================================
# Fuzzy sphere coordinates
# ===========================================================================

class TestFuzzySphere(unittest.TestCase):

    def test_radius_and_commutators(self):
        for n in (2, 3, 4, 8, 16, 32, 64):
            sphere = fuzzy_sphere(n)
            self.assertLess(sphere.radius_error(), 1e-12, f"n={n}")
            self.assertLess(sphere.commutator_error(), 1e-12, f"n={n}")

    def test_n1_is_zero(self):
        sphere = fuzzy_sphere(1)
        for x in sphere.coordinates:
            self.assertEqual(x.shape, (1, 1))
            self.assertEqual(x[0, 0], 0)
        self.assertEqual(sphere.commutator_error(), 0.0)

    def test_default_level(self):
        self.assertEqual(default_level(3), 8)
        self.assertEqual(default_level(20), 20)
        self.assertEqual(default_level(3, floor=2), 3)


# ===========================================================================
# Covariant and contravariant symbols
# ===========================================================================

class TestSymbols:

    def setup_method(self):
        self.quad = sphere_quadrature(8)

    def test_symbol_of_identity(self):
        for n in (1, 2, 5):
            sigma = covariant_symbol(np.eye(n), self.quad)
            np.testing.assert_allclose(sigma.values, 1.0, atol=1e-12)

    def test_symbol_of_x3_n2(self):
        x3 = fuzzy_sphere(2).x3
        sigma = covariant_symbol(x3, self.quad)
        np.testing.assert_allclose(sigma.values, np.cos(self.quad.theta) / np.sqrt(3), atol=1e-12)

    def test_symbol_of_x3_general(self):
        n = 6
        sigma = covariant_symbol(fuzzy_sphere(n).x3, self.quad)
        expected = np.sqrt((n - 1) / (n + 1)) * np.cos(self.quad.theta)
        np.testing.assert_allclose(sigma.values, expected, atol=1e-12)

    def test_symbol_shape_errors(self):
        with pytest.raises(ShapeError):
            covariant_symbol(np.ones((2, 3)), self.quad)
        with pytest.raises(ShapeError):
            covariant_symbol(np.eye(3), self.quad, spin_rep(2))

    def test_contravariant_of_one(self):
        for n in (2, 4, 8):
            one = SampledFunction.constant(self.quad)
            np.testing.assert_allclose(contravariant_symbol(one, spin_rep(n)), np.eye(n), atol=1e-12)

    def test_contravariant_needs_level_n(self):
        quad = sphere_quadrature(4)
        one = SampledFunction.constant(quad)
        np.testing.assert_allclose(contravariant_symbol(one, spin_rep(4)), np.eye(4), atol=1e-12)
        with pytest.raises(DomainError):
            contravariant_symbol(one, spin_rep(5))

    def test_contravariant_of_cos_theta_n2(self):
        # 2 ∫ cos θ |ψ><ψ| dμ = (1/3) σ_3 for the spin-1/2 coherent states
        rep = spin_rep(2)
        f = sample_coordinate(self.quad, 3)
        expected = np.diag([1.0, -1.0]) / 3.0
        np.testing.assert_allclose(contravariant_symbol(f, rep), expected, atol=1e-12)

    def test_positivity(self):
        rep = spin_rep(4)
        f = SampledFunction.from_callable(self.quad, lambda t, p: (1 + np.cos(t)) ** 2 * (2 + np.sin(p)))
        breve = contravariant_symbol(f, rep)
        breve = (breve + breve.conj().T) / 2
        assert np.linalg.eigvalsh(breve)[0] >= -1e-12

    def test_adjointness(self):
        rng = np.random.default_rng(2)
        n = 3
        rep = spin_rep(n)
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        f = SampledFunction.from_callable(self.quad, lambda t, p: np.cos(t) + 0.5j * np.sin(t) * np.cos(p))
        lhs = l2_inner(covariant_symbol(A, self.quad, rep), f)
        rhs = hilbert_schmidt(A, contravariant_symbol(f, rep))
        assert lhs == pytest.approx(rhs, abs=1e-12)


# ===========================================================================
# Berezin kernel and transform
# ===========================================================================

class TestBerezinKernel(unittest.TestCase):

    def test_n2_kernel(self):
        theta = np.linspace(0, np.pi, 9)
        np.testing.assert_allclose(berezin_kernel(spin_rep(2), theta), 2 * np.cos(theta / 2) ** 2, atol=1e-12)

    def test_closed_form_matches_matrix_definition(self):
        theta = np.linspace(0, np.pi, 25)
        for n in range(1, 17):
            np.testing.assert_allclose(berezin_kernel(spin_rep(n), theta), closed_form_kernel(n, theta),
                                       atol=1e-10, err_msg=f"n={n}")

    def test_scalar_argument(self):
        self.assertIsInstance(berezin_kernel(spin_rep(3), 0.5), float)
        self.assertAlmostEqual(berezin_kernel(spin_rep(3), 0.0), 3.0, places=12)

    def test_kernel_is_nonnegative_with_unit_mass(self):
        for n in (2, 4, 8, 16):
            quad = berezin_quadrature(n)
            k = berezin_kernel(spin_rep(n), quad.theta)
            self.assertTrue(np.all(k >= 0))
            self.assertAlmostEqual(quad.integrate(k).real, 1.0, delta=1e-10)


class TestBerezinTransform:

    def test_constant_is_fixed(self):
        quad = sphere_quadrature(8)
        out = berezin_transform(SampledFunction.constant(quad), spin_rep(5))
        np.testing.assert_allclose(out.values, 1.0, atol=1e-12)

    def test_matches_kernel_convolution(self):
        quad = sphere_quadrature(10)
        f = SampledFunction.from_callable(quad, lambda t, p: np.sin(t) ** 2 * np.cos(2 * p) + np.cos(t) ** 3)
        for n in (2, 4, 7):
            rep = spin_rep(n)
            np.testing.assert_allclose(berezin_transform(f, rep).values, kernel_convolution(f, rep).values,
                                       atol=1e-10)

    def test_coordinate_is_shrunk(self):
        # B(cos θ) = ((n-1)/(n+1)) cos θ
        n = 4
        quad = sphere_quadrature(8)
        out = berezin_transform(sample_coordinate(quad, 3), spin_rep(n))
        np.testing.assert_allclose(out.values.real, (n - 1) / (n + 1) * np.cos(quad.theta), atol=1e-12)

    def test_projection_symbol_is_the_kernel(self):
        rep = spin_rep(3)
        quad = sphere_quadrature(8)
        sigma = covariant_symbol(highest_weight(rep)[1], quad, rep)
        np.testing.assert_allclose(rep.n * sigma.values.real, closed_form_kernel(3, quad.theta), atol=1e-12)


class TestSampledFunction:

    def test_shape_is_checked(self):
        with pytest.raises(ShapeError):
            SampledFunction(sphere_quadrature(2), np.zeros(5))

    def test_arithmetic(self):
        quad = sphere_quadrature(3)
        f = SampledFunction.from_callable(quad, lambda t, p: np.cos(t))
        g = 2 * f - f
        np.testing.assert_allclose(g.values, f.values)
        assert f.is_real()
        assert f.max_abs() <= 1.0
        assert abs(f.integral()) < 1e-13


if __name__ == '__main__':
    unittest.main()
