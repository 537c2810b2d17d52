"""
Presented *-algebras, normal forms by rewriting, and Hopf-axiom verification.

A Presentation is an ordered alphabet plus rules `word -> polynomial`, each
strictly decreasing in the weighted word order of the alphabet; termination
follows from that order. Two presets ship with the package: the quantum group
SU_q(2) (letters a, a*, g, g*) and the SL_q(2) relations (letters a, b, c, d).

Coproduct, counit and antipode are defined on generators for su_q2 and
extended multiplicatively (anti-multiplicatively for the antipode);
tensor factors are reduced independently.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (
    CONFLUENCE_MAX_DEGREE, CONFLUENCE_SAMPLES, COUNIT_PAIRS, DEFAULT_COMMUTATIVITY_DEGREE,
    DEFAULT_HOPF_DEGREE, MAX_HOPF_DEGREE, REWRITE_STEP_LIMIT, REWRITE_STRATEGIES,
)
from .errors import (
    InputFormatError, NonTerminationError, ParseError, SizeLimitError, UnsupportedError,
    ValidationError,
)
from .logger import get_logger
from .ncpoly import (
    COEFF_ONE, COEFF_ZERO, Q, Alphabet, NCPoly, Word, coeff, format_coeff, parse,
)
from .utils import parallel_map

logger = get_logger('hopf')


# ===== Presets =====

SU_Q2_TEXT = """\
# SU_q(2): a*a + g*g = 1, aa* + q^2 gg* = 1, gg* = g*g,
# q ga = ag, q g*a = ag* (and their adjoints)
name: su_q2
alphabet: a a* g g*
weights: 2 2 1 1
star: a a*, g g*
g a -> q^-1 a g
g* a -> q^-1 a g*
g* g -> g g*
a* a -> 1 - g g*
a a* -> 1 - q^2 g g*
g* a* -> q a* g*
g a* -> q a* g
"""

SL_Q2_TEXT = """\
# SL_q(2): ab = qba, ac = qca, bd = qdb, cd = qdc, bc = cb,
# ad - qbc = 1, da - q^-1 bc = 1
name: sl_q2
alphabet: b c a d
weights: 1 1 2 2
a b -> q b a
a c -> q c a
d b -> q^-1 b d
d c -> q^-1 c d
c b -> b c
a d -> 1 + q b c
d a -> 1 + q^-1 b c
"""

PRESET_TEXTS = {'su_q2': SU_Q2_TEXT, 'sl_q2': SL_Q2_TEXT}


# ===== Presentations =====

@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: NCPoly

    def describe(self) -> str:
        return f"{self.rhs.alphabet.format_word(self.lhs)} -> {self.rhs}"


@dataclass
class RewriteStep:
    """One rewrite: `rule` applied to `word` at offset `position`."""
    word: Word
    position: int
    rule: int


class Presentation:
    """
    Alphabet plus terminating rewrite rules.

    Raises:
        ValidationError: If a rule does not strictly decrease the word order
    """

    def __init__(self, name: str, alphabet: Alphabet, rules: Sequence[Rule]):
        self.name = name
        self.alphabet = alphabet
        self.rules: List[Rule] = list(rules)
        self._by_first: Dict[int, List[Tuple[int, Rule]]] = {}
        self._cache: Dict[Word, NCPoly] = {}
        self.step_limit = REWRITE_STEP_LIMIT
        for index, rule in enumerate(self.rules):
            if not rule.lhs:
                raise ValidationError(f"rule {index + 1} has an empty left side")
            for word in rule.rhs.terms:
                if not alphabet.less(word, rule.lhs):
                    raise ValidationError(
                        f"rule {index + 1} ({rule.describe()}) does not decrease the word order: "
                        f"{alphabet.format_word(word)} is not below {alphabet.format_word(rule.lhs)}")
            self._by_first.setdefault(rule.lhs[0], []).append((index, rule))
        logger.debug(f"Presentation {name}: {len(alphabet.letters)} letters, {len(self.rules)} rules")

    # ----- construction -----

    @classmethod
    def from_text(cls, text: str, source: Optional[str] = None) -> 'Presentation':
        """
        Read the presentation file format.

        Lines are `name:`, `alphabet:` (names in increasing order), optional
        `weights:` and `star:` (comma-separated pairs), then rules
        `word -> polynomial`. `#` starts a comment.

        Raises:
            InputFormatError: With the line and column of the offending text
        """
        header: Dict[str, Tuple[str, int, int]] = {}
        rule_lines: List[Tuple[str, int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].rstrip()
            if not line.strip():
                continue
            column = len(line) - len(line.lstrip()) + 1
            stripped = line.strip()
            if '->' in stripped:
                rule_lines.append((stripped, lineno, column))
                continue
            key, sep, value = stripped.partition(':')
            if not sep or key.strip() not in ('name', 'alphabet', 'weights', 'star'):
                raise InputFormatError(f"expected a header or a rule, got {stripped!r}", lineno, column, source)
            if rule_lines:
                raise InputFormatError(f"header {key.strip()!r} after the first rule", lineno, column, source)
            header[key.strip()] = (value.strip(), lineno, column + len(key) + 1)

        if 'alphabet' not in header:
            raise InputFormatError("missing 'alphabet:' line", 1, 1, source)
        letters_text, a_line, a_col = header['alphabet']
        letters = letters_text.split()

        weights = None
        if 'weights' in header:
            w_text, w_line, w_col = header['weights']
            try:
                weights = [int(token) for token in w_text.split()]
            except ValueError:
                raise InputFormatError("weights must be integers", w_line, w_col, source)
            if len(weights) != len(letters):
                raise InputFormatError(f"{len(weights)} weights for {len(letters)} letters", w_line, w_col, source)

        pairs: List[Tuple[str, str]] = []
        if 'star' in header:
            s_text, s_line, s_col = header['star']
            for chunk in s_text.split(','):
                names = chunk.split()
                if len(names) != 2:
                    raise InputFormatError(f"star pair {chunk.strip()!r} must name two letters", s_line, s_col, source)
                pairs.append((names[0], names[1]))

        try:
            alphabet = Alphabet.build(letters, weights, pairs)
        except ValidationError as e:
            raise InputFormatError(str(e), a_line, a_col, source)

        rules = []
        for stripped, lineno, column in rule_lines:
            lhs_text, _, rhs_text = stripped.partition('->')
            rhs_column = column + len(lhs_text) + 2
            try:
                lhs = parse(lhs_text, alphabet)
            except ParseError as e:
                raise InputFormatError(f"left side: {e}", lineno, column + e.position, source)
            except ValidationError as e:
                raise InputFormatError(str(e), lineno, column, source)
            if len(lhs.terms) != 1 or list(lhs.terms.values())[0] != COEFF_ONE or () in lhs.terms:
                raise InputFormatError("left side must be a single word", lineno, column, source)
            try:
                rhs = parse(rhs_text, alphabet)
            except ParseError as e:
                raise InputFormatError(f"right side: {e}", lineno, rhs_column + e.position, source)
            except ValidationError as e:
                raise InputFormatError(str(e), lineno, rhs_column, source)
            rules.append(Rule(next(iter(lhs.terms)), rhs))

        name = header['name'][0] if 'name' in header else (source or 'presentation')
        try:
            return cls(name, alphabet, rules)
        except ValidationError as e:
            raise InputFormatError(str(e), a_line, a_col, source)

    @classmethod
    def from_file(cls, path: str) -> 'Presentation':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_text(f.read(), source=path)

    def specialize(self, value) -> 'Presentation':
        """Substitute q := value in every rule."""
        rules = [Rule(rule.lhs, rule.rhs.specialize(value)) for rule in self.rules]
        special = Presentation(f"{self.name}[q={value}]", self.alphabet, rules)
        special.step_limit = self.step_limit
        return special

    # ----- rewriting -----

    def parse(self, text: str) -> NCPoly:
        return parse(text, self.alphabet)

    def find(self, word: Word, rightmost: bool = False) -> Optional[Tuple[int, int]]:
        """(position, rule index) of the first match scanning left to right (or right to left)."""
        positions = range(len(word) - 1, -1, -1) if rightmost else range(len(word))
        for pos in positions:
            for index, rule in self._by_first.get(word[pos], ()):
                if word[pos:pos + len(rule.lhs)] == rule.lhs:
                    return pos, index
        return None

    def is_normal(self, word: Word) -> bool:
        return self.find(word) is None

    def rewrite_at(self, word: Word, position: int, rule_index: int) -> NCPoly:
        """The polynomial obtained by one application of a rule inside a word."""
        rule = self.rules[rule_index]
        if word[position:position + len(rule.lhs)] != rule.lhs:
            raise ValidationError(f"rule {rule_index + 1} does not match at position {position}")
        head, tail = word[:position], word[position + len(rule.lhs):]
        return NCPoly(self.alphabet, {head + w + tail: c for w, c in rule.rhs.terms.items()})

    def normal_form(self, p: NCPoly, strategy: str = 'largest-first',
                    step_limit: Optional[int] = None,
                    trace: Optional[List[RewriteStep]] = None) -> NCPoly:
        """
        Reduce p until no rule applies to any of its words.

        Strategies: 'largest-first' rewrites the largest pending word at its
        leftmost match; 'fifo-rightmost' rewrites pending words in arrival
        order at their rightmost match. Both give the same result exactly
        when the rules are confluent on p.

        Raises:
            NonTerminationError: If step_limit rewrites are exceeded
        """
        if strategy not in REWRITE_STRATEGIES:
            raise ValidationError(f"unknown strategy {strategy!r}; expected one of {REWRITE_STRATEGIES}")
        step_limit = step_limit or self.step_limit
        key = self.alphabet.key
        pending: Dict[Word, object] = dict(p.terms)
        done: Dict[Word, object] = {}
        steps = 0
        while pending:
            if strategy == 'largest-first':
                word = max(pending, key=key)
            else:
                word = next(iter(pending))
            c = pending.pop(word)
            match = self.find(word, rightmost=(strategy == 'fifo-rightmost'))
            if match is None:
                total = done.get(word, COEFF_ZERO) + c
                if total:
                    done[word] = total
                else:
                    done.pop(word, None)
                continue
            steps += 1
            if steps > step_limit:
                raise NonTerminationError(
                    f"{self.name}: more than {step_limit} rewrite steps (last word {self.alphabet.format_word(word)})")
            position, index = match
            if trace is not None:
                trace.append(RewriteStep(word, position, index))
            rule = self.rules[index]
            head, tail = word[:position], word[position + len(rule.lhs):]
            for w, rc in rule.rhs.terms.items():
                new = head + w + tail
                total = pending.get(new, COEFF_ZERO) + c * rc
                if total:
                    pending[new] = total
                else:
                    pending.pop(new, None)
        return NCPoly(self.alphabet, done)

    def reduce_word(self, word: Word) -> NCPoly:
        """Cached normal form of a single word."""
        cached = self._cache.get(word)
        if cached is None:
            cached = self.normal_form(NCPoly.monomial(self.alphabet, word))
            self._cache[word] = cached
        return cached

    def reduce(self, p: NCPoly) -> NCPoly:
        """normal_form(p) assembled from cached word normal forms."""
        out: Dict[Word, object] = {}
        for word, c in p.terms.items():
            for w, v in self.reduce_word(word).terms.items():
                out[w] = out.get(w, COEFF_ZERO) + c * v
        return NCPoly(self.alphabet, out)

    def normal_words(self, max_degree: int) -> List[Word]:
        """Every normal word of length <= max_degree, shortest first."""
        level: List[Word] = [()]
        out: List[Word] = [()]
        for _ in range(max_degree):
            nxt = []
            for w in level:
                for i in range(len(self.alphabet.letters)):
                    candidate = w + (i,)
                    if not self._suffix_match(candidate):
                        nxt.append(candidate)
            out.extend(nxt)
            level = nxt
        return out

    def _suffix_match(self, word: Word) -> bool:
        for rule in self.rules:
            n = len(rule.lhs)
            if n <= len(word) and word[-n:] == rule.lhs:
                return True
        return False

    def format_step(self, step: RewriteStep) -> str:
        return (f"{self.alphabet.format_word(step.word)} @ {step.position}: "
                f"{self.rules[step.rule].describe()}")

    # ----- critical pairs -----

    def critical_pairs(self) -> List['CriticalPair']:
        """
        Every overlap and inclusion ambiguity between two left sides, with
        both one-step rewrites reduced to normal form.
        """
        pairs = []
        for i, r1 in enumerate(self.rules):
            for j, r2 in enumerate(self.rules):
                l1, l2 = r1.lhs, r2.lhs
                # overlap: a suffix of l1 is a proper prefix of l2
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        word = l1 + l2[k:]
                        pairs.append(self._resolve(word, (0, i), (len(l1) - k, j)))
                # inclusion: l2 inside l1
                if i != j and len(l2) <= len(l1):
                    for pos in range(len(l1) - len(l2) + 1):
                        if l1[pos:pos + len(l2)] == l2:
                            pairs.append(self._resolve(l1, (0, i), (pos, j)))
        logger.info(f"{self.name}: {len(pairs)} critical pairs, "
                    f"{sum(1 for p in pairs if not p.resolved)} unresolved")
        return pairs

    def _resolve(self, word: Word, first: Tuple[int, int], second: Tuple[int, int]) -> 'CriticalPair':
        left = self.normal_form(self.rewrite_at(word, *first))
        right = self.normal_form(self.rewrite_at(word, *second))
        return CriticalPair(self.alphabet.format_word(word), first[1], second[1], left, right)


@dataclass
class CriticalPair:
    word: str
    first_rule: int
    second_rule: int
    left: NCPoly
    right: NCPoly

    @property
    def resolved(self) -> bool:
        return self.left == self.right


def preset(name: str) -> Presentation:
    """Build a bundled presentation ('su_q2' or 'sl_q2')."""
    if name not in PRESET_TEXTS:
        raise ValidationError(f"unknown preset {name!r}; expected one of {sorted(PRESET_TEXTS)}")
    return Presentation.from_text(PRESET_TEXTS[name], source=name)


def presets() -> Dict[str, Presentation]:
    return {name: preset(name) for name in PRESET_TEXTS}


# ===== Empirical checks on the rewriting system =====

def random_polynomial(alphabet: Alphabet, rng: np.random.Generator,
                      max_degree: int = CONFLUENCE_MAX_DEGREE, terms: int = 3) -> NCPoly:
    """A few random words with coefficients ±k q^e, k in 1..3, e in -1..1."""
    out = NCPoly.zero(alphabet)
    for _ in range(terms):
        length = int(rng.integers(0, max_degree + 1))
        word = tuple(int(i) for i in rng.integers(0, len(alphabet.letters), size=length))
        c = coeff(int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)) * Q ** int(rng.integers(-1, 2))
        out = out + NCPoly.monomial(alphabet, word, c)
    return out


def is_confluent_on(P: Presentation, samples: Iterable[NCPoly]) -> List[NCPoly]:
    """Inputs on which the two rewriting strategies disagree (empty when confluent on them)."""
    samples = list(samples)

    def _disagrees(p: NCPoly) -> bool:
        return P.normal_form(p, 'largest-first') != P.normal_form(p, 'fifo-rightmost')

    flags = parallel_map(_disagrees, samples)
    failures = [p for p, bad in zip(samples, flags) if bad]
    logger.info(f"{P.name}: confluence test on {len(samples)} samples, {len(failures)} disagreements")
    return failures


def confluence_samples(P: Presentation, seed: int = 0, count: int = CONFLUENCE_SAMPLES,
                       max_degree: int = CONFLUENCE_MAX_DEGREE) -> List[NCPoly]:
    rng = np.random.default_rng(seed)
    return [random_polynomial(P.alphabet, rng, max_degree) for _ in range(count)]


def star_compatibility_check(P: Presentation, samples: Iterable[NCPoly]) -> List[NCPoly]:
    """Inputs where normal_form(normal_form(p*)*) != normal_form(p) or p** != p."""
    if P.alphabet.star is None:
        raise UnsupportedError(f"{P.name} has no *-structure")
    failures = []
    for p in samples:
        if p.star().star() != p or P.reduce(P.reduce(p.star()).star()) != P.reduce(p):
            failures.append(p)
    return failures


def q1_commutativity_check(P: Presentation, max_degree: int = DEFAULT_COMMUTATIVITY_DEGREE,
                           q_value=1) -> Optional[Tuple[str, str, NCPoly]]:
    """
    Specialise q := q_value and test normal_form(uv - vu) = 0 for every pair of
    normal words u, v of degree 1..max_degree.

    Returns:
        None when every pair commutes, else (u, v, normal_form(uv - vu)) for the first failure
    """
    if max_degree > MAX_HOPF_DEGREE:
        raise SizeLimitError(f"degree {max_degree} exceeds the limit {MAX_HOPF_DEGREE}")
    special = P.specialize(q_value)
    words = [w for w in special.normal_words(max_degree) if w]

    def _first_failure(u: Word):
        for v in words:
            if v <= u:
                continue
            uv = NCPoly.monomial(special.alphabet, u + v) - NCPoly.monomial(special.alphabet, v + u)
            residual = special.reduce(uv)
            if not residual.is_zero():
                return (special.alphabet.format_word(u), special.alphabet.format_word(v), residual)
        return None

    for result in parallel_map(_first_failure, words):
        if result is not None:
            logger.info(f"{P.name} at q={q_value}: [{result[0]}, {result[1]}] = {result[2]}")
            return result
    logger.info(f"{P.name} at q={q_value}: commutative up to degree {max_degree}")
    return None


# ===== Tensors =====

class TensorPoly:
    """Finite sum of coefficient * (w_1 ⊗ ... ⊗ w_arity); arity 0 is a scalar."""

    __slots__ = ('alphabet', 'arity', 'terms')

    def __init__(self, alphabet: Alphabet, arity: int, terms: Optional[Dict[Tuple[Word, ...], object]] = None):
        self.alphabet = alphabet
        self.arity = arity
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def scalar(cls, alphabet: Alphabet, value=1) -> 'TensorPoly':
        return cls(alphabet, 0, {(): coeff(value)})

    @classmethod
    def of_poly(cls, p: NCPoly) -> 'TensorPoly':
        return cls(p.alphabet, 1, {(w,): c for w, c in p.terms.items()})

    @classmethod
    def simple(cls, alphabet: Alphabet, words: Sequence[Word], value=1) -> 'TensorPoly':
        return cls(alphabet, len(words), {tuple(words): coeff(value)})

    def _check(self, other: 'TensorPoly'):
        if other.arity != self.arity:
            raise ValidationError(f"tensor arities differ: {self.arity} vs {other.arity}")

    def __add__(self, other: 'TensorPoly') -> 'TensorPoly':
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, COEFF_ZERO) + c
        return TensorPoly(self.alphabet, self.arity, terms)

    def __neg__(self) -> 'TensorPoly':
        return TensorPoly(self.alphabet, self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: 'TensorPoly') -> 'TensorPoly':
        return self + (-other)

    def scale(self, value) -> 'TensorPoly':
        c = coeff(value)
        return TensorPoly(self.alphabet, self.arity, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: 'TensorPoly') -> 'TensorPoly':
        """Factorwise product (a ⊗ b)(c ⊗ d) = ac ⊗ bd."""
        self._check(other)
        terms: Dict[Tuple[Word, ...], object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(u + v for u, v in zip(k1, k2))
                terms[key] = terms.get(key, COEFF_ZERO) + c1 * c2
        return TensorPoly(self.alphabet, self.arity, terms)

    def tensor(self, other: 'TensorPoly') -> 'TensorPoly':
        """self ⊗ other (arity adds)."""
        terms: Dict[Tuple[Word, ...], object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = k1 + k2
                terms[key] = terms.get(key, COEFF_ZERO) + c1 * c2
        return TensorPoly(self.alphabet, self.arity + other.arity, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorPoly) and other.arity == self.arity
                and (self - other).is_zero())

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms))))

    def as_poly(self) -> NCPoly:
        if self.arity == 0:
            return NCPoly.constant(self.alphabet, self.terms.get((), COEFF_ZERO))
        if self.arity != 1:
            raise ValidationError(f"arity {self.arity} tensor is not a polynomial")
        return NCPoly(self.alphabet, {k[0]: c for k, c in self.terms.items()})

    def contract(self) -> NCPoly:
        """The multiplication map m(w_1 ⊗ ... ⊗ w_k) = w_1 ... w_k."""
        out: Dict[Word, object] = {}
        for k, c in self.terms.items():
            w = tuple(letter for part in k for letter in part)
            out[w] = out.get(w, COEFF_ZERO) + c
        return NCPoly(self.alphabet, out)

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        parts = []
        for k, c in sorted(self.terms.items()):
            factors = ' ⊗ '.join(self.alphabet.format_word(w) for w in k) or '1'
            parts.append(factors if c == COEFF_ONE else f"({format_coeff(c)}) {factors}")
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f"TensorPoly({self})"


def reduce_tensor(P: Presentation, T: TensorPoly) -> TensorPoly:
    """Normal form of every tensor factor, independently."""
    out = TensorPoly(P.alphabet, T.arity)
    for key, c in T.terms.items():
        term = TensorPoly.scalar(P.alphabet, c)
        for w in key:
            term = term.tensor(TensorPoly.of_poly(P.reduce_word(w)))
        out = out + term
    return out


# ===== Hopf structure =====

# Δ, ε and S on generators of su_q2, written with the presentation's letters
_SU_Q2_COPRODUCT = {
    'a': [('a', 'a', 1), ('g*', 'g', -Q)],
    'a*': [('a*', 'a*', 1), ('g', 'g*', -Q)],
    'g': [('g', 'a', 1), ('a*', 'g', 1)],
    'g*': [('g*', 'a*', 1), ('a', 'g*', 1)],
}
_SU_Q2_COUNIT = {'a': 1, 'a*': 1, 'g': 0, 'g*': 0}
_SU_Q2_ANTIPODE = {'a': 'a*', 'a*': 'a', 'g': '-q g', 'g*': '-q^-1 g*'}


class HopfStructure:
    """Coproduct, counit and antipode on generators of a presentation."""

    def __init__(self, presentation: Presentation, coproduct: Dict[int, TensorPoly],
                 counit: Dict[int, object], antipode: Dict[int, NCPoly]):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        letters = range(len(self.alphabet.letters))
        for table, what in ((coproduct, 'coproduct'), (counit, 'counit'), (antipode, 'antipode')):
            missing = [self.alphabet.letters[i] for i in letters if i not in table]
            if missing:
                raise ValidationError(f"{what} undefined on {', '.join(missing)}")
        self._coproduct = coproduct
        self._counit = {i: coeff(v) for i, v in counit.items()}
        self._antipode = antipode

    # ----- maps on polynomials -----

    def coproduct_word(self, word: Word, reduced: bool = True) -> TensorPoly:
        out = TensorPoly.simple(self.alphabet, [(), ()])
        for letter in word:
            out = out * self._coproduct[letter]
            if reduced:
                out = reduce_tensor(self.presentation, out)
        return out

    def coproduct(self, p: NCPoly) -> TensorPoly:
        """Δ extended multiplicatively; both factors in normal form."""
        out = TensorPoly(self.alphabet, 2)
        for w, c in p.terms.items():
            out = out + self.coproduct_word(w).scale(c)
        return out

    def counit_word(self, word: Word):
        value = COEFF_ONE
        for letter in word:
            value = value * self._counit[letter]
            if not value:
                break
        return value

    def counit(self, p: NCPoly):
        """ε extended multiplicatively (a coefficient of Q(i)(q))."""
        total = COEFF_ZERO
        for w, c in p.terms.items():
            total = total + c * self.counit_word(w)
        return total

    def antipode_word(self, word: Word, reduced: bool = True) -> NCPoly:
        out = NCPoly.constant(self.alphabet)
        for letter in reversed(word):
            out = out * self._antipode[letter]
            if reduced:
                out = self.presentation.reduce(out)
        return out

    def antipode(self, p: NCPoly) -> NCPoly:
        """S extended anti-multiplicatively, then reduced."""
        out = NCPoly.zero(self.alphabet)
        for w, c in p.terms.items():
            out = out + self.antipode_word(w).scale(c)
        return out

    # ----- maps on tensor factors -----

    def _identity(self, word: Word) -> TensorPoly:
        return TensorPoly.simple(self.alphabet, [word])

    def _delta(self, word: Word) -> TensorPoly:
        return self.coproduct_word(word)

    def _epsilon(self, word: Word) -> TensorPoly:
        return TensorPoly.scalar(self.alphabet, self.counit_word(word))

    def _sigma(self, word: Word) -> TensorPoly:
        return TensorPoly.of_poly(self.antipode_word(word))

    def apply(self, T: TensorPoly, maps: Sequence[Callable[[Word], TensorPoly]]) -> TensorPoly:
        """(f_1 ⊗ ... ⊗ f_k)(T), each f_i sending a word to a tensor."""
        if len(maps) != T.arity:
            raise ValidationError(f"{len(maps)} maps for an arity {T.arity} tensor")
        out: Optional[TensorPoly] = None
        for key, c in T.terms.items():
            term = TensorPoly.scalar(self.alphabet, c)
            for f, w in zip(maps, key):
                term = term.tensor(f(w))
            out = term if out is None else out + term
        if out is None:
            arity = sum(f(()).arity for f in maps)
            return TensorPoly(self.alphabet, arity)
        return reduce_tensor(self.presentation, out)

    # ----- the five identities -----

    def axiom_residuals(self, word: Word) -> Dict[str, str]:
        """Nonzero residuals of the Hopf identities on one word (empty when all hold)."""
        P = self.presentation
        f = NCPoly.monomial(self.alphabet, word)
        delta = self.coproduct_word(word)
        unit = NCPoly.constant(self.alphabet, self.counit_word(word))
        residuals: Dict[str, str] = {}

        coassoc = self.apply(delta, [self._delta, self._identity]) - self.apply(delta, [self._identity, self._delta])
        if not coassoc.is_zero():
            residuals['coassociativity'] = str(coassoc)
        for name, maps in (('counit-left', [self._epsilon, self._identity]),
                           ('counit-right', [self._identity, self._epsilon])):
            residual = P.reduce(self.apply(delta, maps).as_poly()) - f
            if not residual.is_zero():
                residuals[name] = str(residual)
        for name, maps in (('antipode-left', [self._sigma, self._identity]),
                           ('antipode-right', [self._identity, self._sigma])):
            residual = P.reduce(self.apply(delta, maps).contract()) - unit
            if not residual.is_zero():
                residuals[name] = str(residual)
        return residuals

    def antipode_evidence(self, word: Word) -> Tuple[NCPoly, List[str], NCPoly]:
        """
        m(S ⊗ id)Δ(word) before reduction, the rewrite steps that reduce it,
        and the reduced result (which should be ε(word)·1).
        """
        delta = self.coproduct_word(word, reduced=False)
        unreduced = NCPoly.zero(self.alphabet)
        for (left, right), c in delta.terms.items():
            unreduced = unreduced + self.antipode_word(left, reduced=False) * NCPoly.monomial(self.alphabet, right, c)
        trace: List[RewriteStep] = []
        result = self.presentation.normal_form(unreduced, trace=trace)
        return unreduced, [self.presentation.format_step(s) for s in trace], result

    def relation_residuals(self) -> List[Tuple[str, str, str]]:
        """
        Apply Δ, ε and S to lhs - rhs of every rule; the maps are well
        defined on the quotient exactly when the list is empty.
        """
        failures = []
        for rule in self.presentation.rules:
            relation = NCPoly.monomial(self.alphabet, rule.lhs) - rule.rhs
            delta = self.coproduct(relation)
            if not delta.is_zero():
                failures.append((rule.describe(), 'coproduct', str(delta)))
            eps = self.counit(relation)
            if eps:
                failures.append((rule.describe(), 'counit', format_coeff(eps)))
            s = self.antipode(relation)
            if not s.is_zero():
                failures.append((rule.describe(), 'antipode', str(s)))
        return failures

    def counit_multiplicative_failures(self, rng: np.random.Generator, pairs: int = COUNIT_PAIRS,
                                       max_degree: int = DEFAULT_HOPF_DEGREE) -> List[Tuple[str, str]]:
        """Random normal-word pairs (u, v) with ε(nf(uv)) != ε(u) ε(v)."""
        words = self.presentation.normal_words(max_degree)
        failures = []
        for _ in range(pairs):
            u = words[int(rng.integers(len(words)))]
            v = words[int(rng.integers(len(words)))]
            product = self.presentation.reduce_word(u + v)
            if self.counit(product) - self.counit_word(u) * self.counit_word(v):
                failures.append((self.alphabet.format_word(u), self.alphabet.format_word(v)))
        return failures


def su_q2_hopf(presentation: Optional[Presentation] = None) -> HopfStructure:
    P = presentation or preset('su_q2')
    A = P.alphabet
    coproduct = {}
    for name, terms in _SU_Q2_COPRODUCT.items():
        T = TensorPoly(A, 2)
        for left, right, c in terms:
            T = T + TensorPoly.simple(A, [(A.index(left),), (A.index(right),)], c)
        coproduct[A.index(name)] = T
    counit = {A.index(name): v for name, v in _SU_Q2_COUNIT.items()}
    antipode = {A.index(name): P.parse(text) for name, text in _SU_Q2_ANTIPODE.items()}
    return HopfStructure(P, coproduct, counit, antipode)


def hopf_structure(P: Presentation) -> HopfStructure:
    """
    The Hopf structure of a presentation; only su_q2 carries one.

    Raises:
        UnsupportedError: For any other presentation
    """
    if P.name != 'su_q2':
        raise UnsupportedError(f"no coproduct is defined for {P.name}; only su_q2 carries a Hopf structure")
    return su_q2_hopf(P)


# ===== Hopf axiom check =====

@dataclass
class AxiomFailure:
    identity: str
    word: str
    residual: str


@dataclass
class HopfReport:
    presentation: str
    max_degree: int
    monomials: int
    failures: List[AxiomFailure] = field(default_factory=list)
    relation_failures: List[Tuple[str, str, str]] = field(default_factory=list)
    counit_failures: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.failures or self.relation_failures or self.counit_failures)

    @property
    def first_counterexample(self) -> Optional[AxiomFailure]:
        return self.failures[0] if self.failures else None


HOPF_IDENTITIES = ('coassociativity', 'counit-left', 'counit-right', 'antipode-left', 'antipode-right')


def hopf_axiom_check(max_degree: int = DEFAULT_HOPF_DEGREE, hopf: Optional[HopfStructure] = None,
                     seed: int = 0) -> HopfReport:
    """
    Verify coassociativity, both counit laws and both antipode laws on every
    normal monomial of degree <= max_degree, plus well-definedness on the
    relations and multiplicativity of the counit on random pairs.

    Raises:
        SizeLimitError: If max_degree exceeds the Hopf degree guard
    """
    if max_degree > MAX_HOPF_DEGREE:
        raise SizeLimitError(f"degree {max_degree} exceeds the limit {MAX_HOPF_DEGREE}")
    if max_degree < 0:
        raise ValidationError("degree must be non-negative")
    hopf = hopf or su_q2_hopf()
    P = hopf.presentation
    words = P.normal_words(max_degree)
    logger.info(f"Hopf axiom check on {P.name}: {len(words)} normal monomials up to degree {max_degree}")

    report = HopfReport(P.name, max_degree, len(words))
    for word, residuals in zip(words, parallel_map(hopf.axiom_residuals, words)):
        for identity in HOPF_IDENTITIES:
            if identity in residuals:
                report.failures.append(AxiomFailure(identity, P.alphabet.format_word(word), residuals[identity]))
    report.relation_failures = hopf.relation_residuals()
    report.counit_failures = hopf.counit_multiplicative_failures(np.random.default_rng(seed))
    if report.passed:
        logger.info(f"Hopf axioms hold on {len(words)} monomials")
    else:
        logger.warning(f"Hopf axiom check: {len(report.failures)} identity failures, "
                       f"{len(report.relation_failures)} relation failures")
    return report
