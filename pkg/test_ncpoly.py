"""Tests for ncpoly module."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
import unittest

import pytest

from ncg_workbench import exact_linalg as xl
from ncg_workbench.errors import DomainError, ParseError, UnknownGeneratorError, ValidationError
from ncg_workbench.ncpoly import (
    COEFF_ONE, Q, Alphabet, NCPoly, coeff, conj_coeff, parse, specialize_coeff,
)


def su_alphabet() -> Alphabet:
    return Alphabet.build(['a', 'a*', 'g', 'g*'], [2, 2, 1, 1], [('a', 'a*'), ('g', 'g*')])


# ===========================================================================
# Alphabet
# ===========================================================================

class TestAlphabet(unittest.TestCase):
    """Letters, weights, star map and word order"""

    def setUp(self):
        self.A = su_alphabet()

    def test_star_is_involution(self):
        self.assertEqual(self.A.star, (1, 0, 3, 2))

    def test_word_order_weight_first(self):
        a, g = self.A.word(['a']), self.A.word(['g'])
        gg = self.A.word(['g', 'g'])
        self.assertTrue(self.A.less(g, a))
        self.assertTrue(self.A.less(a, gg))
        self.assertTrue(self.A.less((), g))

    def test_words_enumeration(self):
        self.assertEqual(len(self.A.words(2)), 16)
        self.assertEqual(self.A.words(0), [()])

    def test_format_word(self):
        self.assertEqual(self.A.format_word(self.A.word(['a*', 'g'])), 'a* g')
        self.assertEqual(self.A.format_word(()), '1')

    def test_rejections(self):
        with self.assertRaises(ValidationError):
            Alphabet.build([])
        with self.assertRaises(ValidationError):
            Alphabet.build(['x', 'x'])
        with self.assertRaises(ValidationError):
            Alphabet.build(['q', 'x'])
        with self.assertRaises(ValidationError):
            Alphabet.build(['x', 'y'], [1, 0])
        with self.assertRaises(UnknownGeneratorError):
            Alphabet.build(['x', 'y'], star_pairs=[('x', 'z')])
        with self.assertRaises(UnknownGeneratorError):
            self.A.index('b')


# ===========================================================================
# Coefficients
# ===========================================================================

class TestCoefficients:
    """Q(i)(q) coefficients"""

    def test_conjugation_keeps_q(self):
        c = coeff(xl.qqi(1, 2)) * Q
        assert conj_coeff(c) == coeff(xl.qqi(1, -2)) * Q

    def test_specialize(self):
        c = (Q ** 2 - 1) / (Q + 1)
        assert specialize_coeff(c, 3) == coeff(2)

    def test_specialize_with_denominator(self):
        assert specialize_coeff((Q + 2) / (Q - 1), '1/2') == coeff(-5)
        assert specialize_coeff(COEFF_ONE / Q, '1/2') == coeff(2)
        assert specialize_coeff(Q ** 2, xl.qqi(0, 1)) == coeff(-1)
        assert specialize_coeff(COEFF_ONE, 7) == COEFF_ONE

    def test_pole_raises(self):
        with pytest.raises(DomainError):
            specialize_coeff(COEFF_ONE / (Q - 1), 1)


# ===========================================================================
# Polynomials
# ===========================================================================

class TestNCPoly(unittest.TestCase):
    """Arithmetic, star and printing"""

    def setUp(self):
        self.A = su_alphabet()
        self.a = NCPoly.letter(self.A, 'a')
        self.g = NCPoly.letter(self.A, 'g')

    def test_noncommutative_product(self):
        self.assertNotEqual(self.a * self.g, self.g * self.a)
        self.assertEqual((self.a * self.g).degree(), 2)

    def test_scalar_arithmetic(self):
        p = 2 * self.a - self.a
        self.assertEqual(p, self.a)
        self.assertTrue((self.a - self.a).is_zero())
        self.assertEqual(NCPoly.zero(self.A).degree(), -1)

    def test_power(self):
        self.assertEqual(self.g ** 3, self.g * self.g * self.g)
        self.assertEqual(self.g ** 0, NCPoly.constant(self.A))

    def test_star_reverses_and_conjugates(self):
        p = NCPoly.monomial(self.A, self.A.word(['a', 'g']), xl.qqi(0, 1))
        expected = NCPoly.monomial(self.A, self.A.word(['g*', 'a*']), xl.qqi(0, -1))
        self.assertEqual(p.star(), expected)
        self.assertEqual(p.star().star(), p)

    def test_star_without_structure(self):
        B = Alphabet.build(['x', 'y'])
        with self.assertRaises(DomainError):
            NCPoly.letter(B, 'x').star()

    def test_as_scalar(self):
        self.assertEqual(NCPoly.constant(self.A, 3).as_scalar(), coeff(3))
        self.assertIsNone(self.a.as_scalar())

    def test_specialize_kills_terms(self):
        p = NCPoly.monomial(self.A, self.A.word(['a']), Q - 1)
        self.assertTrue(p.specialize(1).is_zero())

    def test_str(self):
        self.assertEqual(str(parse('a - 1', self.A)), 'a - 1')
        self.assertEqual(str(NCPoly.zero(self.A)), '0')


# ===========================================================================
# Parser
# ===========================================================================

class TestParser:
    """Grammar of polynomial expressions"""

    def setup_method(self):
        self.A = su_alphabet()

    def test_juxtaposition_and_star_letters(self):
        p = parse('a a* g', self.A)
        assert p == NCPoly.monomial(self.A, (0, 1, 2))

    def test_q_powers(self):
        p = parse('q^-1 a g', self.A)
        assert p.coefficient((0, 2)) == COEFF_ONE / Q
        assert parse('q^2 - q q', self.A).is_zero()

    def test_fractions_and_parentheses(self):
        p = parse('(1/2 a + g)(a - g)', self.A)
        assert p.coefficient((0, 0)) == coeff(xl.qqi(1, 0)) / 2
        assert p.coefficient((2, 2)) == -COEFF_ONE
        assert len(p.terms) == 4

    def test_leading_sign(self):
        assert parse('-a + a', self.A).is_zero()

    def test_unknown_generator(self):
        with pytest.raises(UnknownGeneratorError):
            parse('a b', self.A)

    @pytest.mark.parametrize("text", ['a +', 'a^-1', '(a', 'a ^ 1/2', ')', ''])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse(text, self.A)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse('a + )', self.A)
        assert info.value.position == 4
