"""Tests for algebra_io module and the exact scalar grammar."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
from test_bootstrap import config_file
from fractions import Fraction
import unittest

import pytest

from ncg_workbench import exact_linalg as xl
from ncg_workbench.algebra_io import (
    load_algebra, load_calculus, load_presentation, parse_algebra, parse_calculus,
)
from ncg_workbench.errors import InputFormatError


# ===========================================================================
# Scalars
# ===========================================================================

class TestScalarGrammar:
    """parse_scalar / format_scalar"""

    @pytest.mark.parametrize("text,expected", [
        ('3', xl.qqi(3)),
        ('-1/2', xl.qqi(Fraction(-1, 2))),
        ('0.25', xl.qqi(Fraction(1, 4))),
        ('2i', xl.qqi(0, 2)),
        ('-i', xl.qqi(0, -1)),
        ('1/2+3/4i', xl.qqi(Fraction(1, 2), Fraction(3, 4))),
        ('1-i', xl.qqi(1, -1)),
    ])
    def test_accepted_forms(self, text, expected):
        assert xl.parse_scalar(text) == expected

    def test_qqi_accepts_scalar_strings(self):
        assert xl.qqi('1/2') == xl.qqi(Fraction(1, 2))
        assert xl.qqi('-3') == xl.qqi(-3)
        assert xl.qqi('1-i') == xl.qqi(1, -1)
        assert xl.qqi(1, '1/3') == xl.qqi(1, Fraction(1, 3))
        with pytest.raises(ValueError):
            xl.qqi('half')

    def test_decimal_is_exact(self):
        assert xl.parse_scalar('0.1') == xl.qqi(Fraction(1, 10))

    @pytest.mark.parametrize("text", ['', 'abc', '1/0', '1e3', 'i1', True])
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            xl.parse_scalar(text)

    @pytest.mark.parametrize("text", ['3', '-1/2', '2i', '-i', '1/2+3/4i', '1-i'])
    def test_format_is_canonical(self, text):
        assert xl.format_scalar(xl.parse_scalar(text)) == text


# ===========================================================================
# Algebras
# ===========================================================================

class TestAlgebraFiles(unittest.TestCase):
    """Bundled algebra documents"""

    def test_bundled_algebras_load(self):
        expected = {'complex': 1, 'c2': 2, 'c2_swap': 2, 'm2': 4, 'm2_twisted': 4}
        for name, d in expected.items():
            A = load_algebra(config_file('algebras', f'{name}.yaml'))
            self.assertEqual(A.d, d)
            self.assertEqual(A.name, name)
            self.assertTrue(A.is_associative())

    def test_fraction_entries_stay_exact(self):
        A = load_algebra(config_file('algebras', 'm2_twisted.yaml'))
        self.assertEqual(xl.entry(A.automorphism, 1, 1), xl.qqi(Fraction(1, 2)))
        self.assertEqual(xl.entry(A.automorphism, 2, 2), xl.qqi(2))

    def test_swap_automorphism(self):
        A = load_algebra(config_file('algebras', 'c2_swap.yaml'))
        self.assertEqual(xl.entry(A.automorphism, 0, 1), xl.ONE)
        self.assertIsNone(A.involution)

    def test_missing_file(self):
        with self.assertRaises(InputFormatError) as ctx:
            load_algebra(config_file('algebras', 'nope.yaml'))
        self.assertIn('nope.yaml', str(ctx.exception))


class TestAlgebraErrors:
    """Malformed algebra documents report a position"""

    def test_bad_scalar_position(self):
        text = "dimension: 1\nunit: [1]\nstructure:\n  - [0, 0, 0, 1, zz]\n"
        with pytest.raises(InputFormatError) as info:
            parse_algebra(text, source='bad.yaml')
        assert info.value.line == 4
        assert info.value.column == 18
        assert info.value.source == 'bad.yaml'

    def test_index_out_of_range(self):
        text = "dimension: 1\nunit: [1]\nstructure:\n  - [0, 1, 0, 1, 0]\n"
        with pytest.raises(InputFormatError) as info:
            parse_algebra(text)
        assert info.value.line == 4

    def test_missing_field(self):
        with pytest.raises(InputFormatError) as info:
            parse_algebra("dimension: 1\nunit: [1]\n")
        assert 'structure' in str(info.value)

    def test_unknown_field(self):
        with pytest.raises(InputFormatError):
            parse_algebra("dimension: 1\nunit: [1]\nstructure: []\ncolour: red\n")

    def test_duplicate_constant(self):
        text = "dimension: 1\nunit: [1]\nstructure:\n  - [0, 0, 0, 1, 0]\n  - [0, 0, 0, 1, 0]\n"
        with pytest.raises(InputFormatError) as info:
            parse_algebra(text)
        assert info.value.line == 5

    def test_unit_law_failure_reported(self):
        text = "dimension: 1\nunit: [1]\nstructure:\n  - [0, 0, 0, 2, 0]\n"
        with pytest.raises(InputFormatError):
            parse_algebra(text)
        A = parse_algebra(text, validate=False)
        assert A.d == 1

    def test_yaml_syntax_error(self):
        with pytest.raises(InputFormatError) as info:
            parse_algebra("dimension: [1\nunit: [1]\n")
        assert info.value.line is not None

    def test_empty_document(self):
        with pytest.raises(InputFormatError):
            parse_algebra("")

    def test_wrong_unit_length(self):
        with pytest.raises(InputFormatError):
            parse_algebra("dimension: 2\nunit: [1]\nstructure: []\n")


# ===========================================================================
# Calculi
# ===========================================================================

class TestCalculusFiles(unittest.TestCase):
    """Graded calculus documents"""

    def test_two_point_loads(self):
        C = load_calculus(config_file('calculi', 'two_point.yaml'))
        self.assertEqual(list(C.dims), [2, 2, 2])
        self.assertEqual(C.N, 2)
        self.assertEqual(C.unit, (xl.ONE, xl.ONE))

    def test_nonzero_square_rejected(self):
        text = "dimensions: [1, 1, 1]\ndifferentials:\n  - [[1]]\n  - [[1]]\n"
        with self.assertRaises(InputFormatError) as ctx:
            parse_calculus(text)
        self.assertEqual(ctx.exception.line, 1)

    def test_indefinite_gram_rejected(self):
        text = "dimensions: [1]\ndifferentials: []\ngrams:\n  - [[-1]]\n"
        with self.assertRaises(InputFormatError):
            parse_calculus(text)

    def test_differential_count(self):
        text = "dimensions: [1, 1]\ndifferentials: []\n"
        with self.assertRaises(InputFormatError) as ctx:
            parse_calculus(text)
        self.assertEqual(ctx.exception.line, 2)

    def test_product_index_out_of_range(self):
        text = ("dimensions: [1, 1]\ndifferentials:\n  - [[0]]\n"
                "products:\n  - [0, 0, 1, 3, 0, 1]\n")
        with self.assertRaises(InputFormatError) as ctx:
            parse_calculus(text)
        self.assertEqual(ctx.exception.line, 5)


# ===========================================================================
# Presentations
# ===========================================================================

class TestPresentationFiles:
    """Plain-text rewriting presentations"""

    def test_bundled_presentations(self):
        su = load_presentation(config_file('presentations', 'su_q2.txt'))
        sl = load_presentation(config_file('presentations', 'sl_q2.txt'))
        assert su.alphabet.star is not None
        assert sl.alphabet.star is None
        assert len(sl.rules) == 7

    def test_missing_presentation(self):
        with pytest.raises(InputFormatError):
            load_presentation(config_file('presentations', 'missing.txt'))
