"""
Noncommutative polynomials with coefficients in Q(i)(q), and their text grammar.

Words are tuples of letter indices into an Alphabet; a letter index is also
its rank in the word order. The formal parameter q lives in the coefficient
field, so q^-1 is an ordinary coefficient and specialising q is exact.

Grammar accepted by parse():

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power power*              (juxtaposition is the product)
    power  := atom ['^' ['-'] INT]      (negative powers only for scalars)
    atom   := NUMBER | 'q' | LETTER ['*'] | '(' expr ')'
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.fields import FracElement, field

from . import exact_linalg as xl
from .errors import DomainError, ParseError, UnknownGeneratorError, ValidationError
from .logger import get_logger

logger = get_logger('ncpoly')

Word = Tuple[int, ...]

QFIELD, Q = field('q', QQ_I)
COEFF_ZERO = QFIELD.zero
COEFF_ONE = QFIELD.one


# ===== Coefficients =====

def coeff(value) -> FracElement:
    """Coerce ints, Fractions, Q(i) elements or field elements into Q(i)(q)."""
    if isinstance(value, FracElement):
        return value
    return QFIELD.ground_new(xl.qqi(value))


def conj_coeff(c: FracElement) -> FracElement:
    """Conjugate the Gaussian coefficients; q is real."""
    ring = QFIELD.ring

    def _conj(poly):
        return ring.from_dict({monom: xl.conj(value) for monom, value in poly.items()})

    return QFIELD.new(_conj(c.numer), _conj(c.denom))


def _evaluate(poly, value):
    result = xl.ZERO
    for (n,), c in poly.iterterms():
        result += c * value ** n
    return result


def specialize_coeff(c: FracElement, value) -> FracElement:
    """c(q := value), a constant of the same field. Numerator and denominator are evaluated separately."""
    value = xl.qqi(value)
    denom = _evaluate(c.denom, value)
    if not denom:
        raise DomainError(f"coefficient {format_coeff(c)} has a pole at q = {xl.format_scalar(value)}")
    return QFIELD.ground_new(_evaluate(c.numer, value) / denom)


def format_coeff(c: FracElement) -> str:
    return str(c.as_expr()).replace('**', '^')


# ===== Alphabet =====

@dataclass(frozen=True)
class Alphabet:
    """
    Ordered generator names with word-order weights and an optional star map.

    Attributes:
        letters: names in increasing order
        weights: positive weight per letter (first component of the word order)
        star: star[i] is the index of letter i's adjoint, or None for no *-structure
    """
    letters: Tuple[str, ...]
    weights: Tuple[int, ...]
    star: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not self.letters:
            raise ValidationError("alphabet is empty")
        if len(set(self.letters)) != len(self.letters):
            raise ValidationError(f"duplicate letters in alphabet {self.letters}")
        if 'q' in self.letters:
            raise ValidationError("'q' is reserved for the deformation parameter")
        if len(self.weights) != len(self.letters) or any(w < 1 for w in self.weights):
            raise ValidationError("every letter needs a positive integer weight")
        if self.star is not None:
            if sorted(self.star) != list(range(len(self.letters))):
                raise ValidationError("star must permute the alphabet")
            if any(self.star[self.star[i]] != i for i in range(len(self.letters))):
                raise ValidationError("star must be an involution on the alphabet")

    @classmethod
    def build(cls, letters: Sequence[str], weights: Optional[Sequence[int]] = None,
              star_pairs: Iterable[Tuple[str, str]] = ()) -> 'Alphabet':
        letters = tuple(letters)
        weights = tuple(weights) if weights else (1,) * len(letters)
        pairs = list(star_pairs)
        star = None
        if pairs:
            lookup = {name: i for i, name in enumerate(letters)}
            star_list = list(range(len(letters)))
            for left, right in pairs:
                for name in (left, right):
                    if name not in lookup:
                        raise UnknownGeneratorError(f"star pair names unknown generator {name!r}")
                star_list[lookup[left]] = lookup[right]
                star_list[lookup[right]] = lookup[left]
            star = tuple(star_list)
        return cls(letters, weights, star)

    def index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise UnknownGeneratorError(f"unknown generator {name!r}; alphabet is {' '.join(self.letters)}")

    def word(self, names: Iterable[str]) -> Word:
        return tuple(self.index(name) for name in names)

    def key(self, word: Word) -> Tuple[int, int, Word]:
        """Word order: total weight, then length, then lexicographic by letter rank."""
        return (sum(self.weights[i] for i in word), len(word), word)

    def less(self, u: Word, v: Word) -> bool:
        return self.key(u) < self.key(v)

    def format_word(self, word: Word) -> str:
        return ' '.join(self.letters[i] for i in word) if word else '1'

    def words(self, length: int) -> List[Word]:
        """All words of the given length, in lexicographic rank order."""
        out: List[Word] = [()]
        for _ in range(length):
            out = [w + (i,) for w in out for i in range(len(self.letters))]
        return out


# ===== Polynomials =====

class NCPoly:
    """Finite sum of coefficient * word; zero coefficients are never stored."""

    __slots__ = ('alphabet', 'terms')

    def __init__(self, alphabet: Alphabet, terms: Optional[Dict[Word, FracElement]] = None):
        self.alphabet = alphabet
        self.terms: Dict[Word, FracElement] = {w: c for w, c in (terms or {}).items() if c}

    # ----- constructors -----

    @classmethod
    def zero(cls, alphabet: Alphabet) -> 'NCPoly':
        return cls(alphabet)

    @classmethod
    def constant(cls, alphabet: Alphabet, value=1) -> 'NCPoly':
        return cls(alphabet, {(): coeff(value)})

    @classmethod
    def monomial(cls, alphabet: Alphabet, word: Word, value=1) -> 'NCPoly':
        return cls(alphabet, {tuple(word): coeff(value)})

    @classmethod
    def letter(cls, alphabet: Alphabet, name: str) -> 'NCPoly':
        return cls.monomial(alphabet, (alphabet.index(name),))

    # ----- arithmetic -----

    def _same(self, other: 'NCPoly'):
        if other.alphabet != self.alphabet:
            raise ValidationError("polynomials over different alphabets")

    def __add__(self, other) -> 'NCPoly':
        if not isinstance(other, NCPoly):
            other = NCPoly.constant(self.alphabet, other)
        self._same(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, COEFF_ZERO) + c
        return NCPoly(self.alphabet, terms)

    __radd__ = __add__

    def __neg__(self) -> 'NCPoly':
        return NCPoly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> 'NCPoly':
        if not isinstance(other, NCPoly):
            other = NCPoly.constant(self.alphabet, other)
        return self + (-other)

    def __rsub__(self, other) -> 'NCPoly':
        return (-self) + other

    def scale(self, value) -> 'NCPoly':
        c = coeff(value)
        return NCPoly(self.alphabet, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other) -> 'NCPoly':
        if not isinstance(other, NCPoly):
            return self.scale(other)
        self._same(other)
        terms: Dict[Word, FracElement] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                terms[w] = terms.get(w, COEFF_ZERO) + a * b
        return NCPoly(self.alphabet, terms)

    def __rmul__(self, other) -> 'NCPoly':
        return self.scale(other)

    def __pow__(self, k: int) -> 'NCPoly':
        if k < 0:
            raise DomainError("negative powers of polynomials are undefined")
        out = NCPoly.constant(self.alphabet)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            other = NCPoly.constant(self.alphabet, other)
        return self.alphabet == other.alphabet and (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms)))

    # ----- inspection -----

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word: Word) -> FracElement:
        return self.terms.get(tuple(word), COEFF_ZERO)

    def sorted_terms(self) -> List[Tuple[Word, FracElement]]:
        """Terms in increasing word order."""
        return sorted(self.terms.items(), key=lambda item: self.alphabet.key(item[0]))

    def as_scalar(self) -> Optional[FracElement]:
        """The coefficient if self is a constant, else None."""
        if not self.terms:
            return COEFF_ZERO
        if set(self.terms) == {()}:
            return self.terms[()]
        return None

    # ----- maps -----

    def star(self) -> 'NCPoly':
        """(c w)* = conj(c) w*, with w* the reversed word of starred letters."""
        if self.alphabet.star is None:
            raise DomainError("alphabet has no *-structure")
        s = self.alphabet.star
        return NCPoly(self.alphabet, {tuple(s[i] for i in reversed(w)): conj_coeff(c)
                                      for w, c in self.terms.items()})

    def specialize(self, value) -> 'NCPoly':
        return NCPoly(self.alphabet, {w: specialize_coeff(c, value) for w, c in self.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        parts = []
        for w, c in reversed(self.sorted_terms()):
            word = self.alphabet.format_word(w) if w else ''
            if c == COEFF_ONE:
                parts.append(word or '1')
            elif c == -COEFF_ONE:
                parts.append(f"-{word or '1'}")
            else:
                text = format_coeff(c)
                if word:
                    text = f"({text}) {word}" if any(ch in text[1:] for ch in '+-') else f"{text} {word}"
                parts.append(text)
        return ' + '.join(parts).replace('+ -', '- ')

    def __repr__(self) -> str:
        return f"NCPoly({self})"


# ===== Parser =====

_TOKEN = re.compile(r'\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[*^+\-()]))')


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        offset = 0
        while offset < len(text):
            if text[offset:].strip() == '':
                break
            match = _TOKEN.match(text, offset)
            if not match or match.end() == offset:
                start = len(text) - len(text[offset:].lstrip())
                raise ParseError(f"unexpected character {text[start]!r}", start, text)
            kind = match.lastgroup
            tokens.append((kind, match.group(kind), match.start(kind)))
            offset = match.end()
        tokens.append(('end', '', len(text)))
        return tokens

    def _peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def _next(self) -> Tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _error(self, message: str, position: int):
        return ParseError(message, position, self.text)

    def parse(self) -> NCPoly:
        result = self._expr()
        kind, value, position = self._peek()
        if kind != 'end':
            raise self._error(f"unexpected {value!r}", position)
        return result

    def _expr(self) -> NCPoly:
        sign = 1
        kind, value, _ = self._peek()
        if kind == 'op' and value in '+-':
            self._next()
            sign = -1 if value == '-' else 1
        total = self._term().scale(sign)
        while True:
            kind, value, _ = self._peek()
            if kind == 'op' and value in '+-':
                self._next()
                term = self._term()
                total = total + term if value == '+' else total - term
            else:
                return total

    def _starts_atom(self) -> bool:
        kind, value, _ = self._peek()
        return kind in ('number', 'name') or (kind == 'op' and value == '(')

    def _term(self) -> NCPoly:
        if not self._starts_atom():
            kind, value, position = self._peek()
            raise self._error("expected a factor" if kind != 'end' else "unexpected end of input", position)
        product = self._power()
        while self._starts_atom():
            product = product * self._power()
        return product

    def _power(self) -> NCPoly:
        base = self._atom()
        kind, value, position = self._peek()
        if not (kind == 'op' and value == '^'):
            return base
        self._next()
        negative = False
        kind, value, position = self._peek()
        if kind == 'op' and value == '-':
            self._next()
            negative = True
            kind, value, position = self._peek()
        if kind != 'number' or '/' in value:
            raise self._error("exponent must be an integer", position)
        self._next()
        exponent = int(value)
        if not negative:
            return base ** exponent
        scalar = base.as_scalar()
        if scalar is None:
            raise self._error("negative power of a non-scalar", position)
        if not scalar:
            raise self._error("negative power of zero", position)
        return NCPoly.constant(self.alphabet, scalar ** -exponent)

    def _atom(self) -> NCPoly:
        kind, value, position = self._next()
        if kind == 'number':
            return NCPoly.constant(self.alphabet, Fraction(value))
        if kind == 'name':
            if value == 'q':
                return NCPoly.constant(self.alphabet, Q)
            name = value
            nxt_kind, nxt_value, _ = self._peek()
            if nxt_kind == 'op' and nxt_value == '*':
                self._next()
                name += '*'
            if name not in self.alphabet.letters:
                raise UnknownGeneratorError(
                    f"unknown generator {name!r} at position {position}; alphabet is {' '.join(self.alphabet.letters)}")
            return NCPoly.letter(self.alphabet, name)
        if kind == 'op' and value == '(':
            inner = self._expr()
            close_kind, close_value, close_position = self._next()
            if not (close_kind == 'op' and close_value == ')'):
                raise self._error("expected ')'", close_position)
            return inner
        if kind == 'end':
            raise self._error("unexpected end of input", position)
        raise self._error(f"unexpected {value!r}", position)


def parse(text: str, alphabet: Alphabet) -> NCPoly:
    """
    Parse a polynomial expression over the alphabet.

    Raises:
        ParseError: On a syntax error (carries the 0-based position)
        UnknownGeneratorError: On a name outside the alphabet
    """
    return _Parser(text, alphabet).parse()
