"""
Clifford algebras over diagonal forms, the grading automorphism, spin
representations and Dirac operators at the symbol level.

Monomials e_{i1} ... e_{ik} (i1 < ... < ik) are bitmasks; every identity in
this module is checked in exact arithmetic.
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from . import exact_linalg as xl
from .constants import MAX_CLIFFORD_GENERATORS, MAX_SPIN_K
from .errors import (
    CliffordRelationError, InternalError, InvalidDimensionError, ShapeError, SizeLimitError, UnsupportedError,
)
from .logger import get_logger

logger = get_logger('clifford')


def _popcount(x: np.ndarray) -> np.ndarray:
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


# ===== Clifford algebras =====

class CliffordAlgebra:
    """
    Cl(V, B) for B diagonal: e_i² = -B_i, e_i e_j = -e_j e_i (i ≠ j).

    e_A e_B = sign(A, B) · Π_{i ∈ A∩B} (-B_i) · e_{A xor B}; the reordering
    signs are kept as an int8 table, the form factors per common mask.
    """

    def __init__(self, n: int, form: Optional[Sequence[object]] = None):
        if n < 0:
            raise InvalidDimensionError(f"number of generators must be >= 0, got {n}")
        if n > MAX_CLIFFORD_GENERATORS:
            raise SizeLimitError(f"Cl with {n} generators exceeds the limit of {MAX_CLIFFORD_GENERATORS}")
        form = [1] * n if form is None else list(form)
        if len(form) != n:
            raise ShapeError(f"form needs {n} diagonal coefficients, got {len(form)}")
        self.n = n
        self.form = tuple(xl.qqi(b) for b in form)
        self.dim = 2 ** n
        logger.debug(f"Clifford algebra with {n} generators, dimension {self.dim}")

    @cached_property
    def signs(self) -> np.ndarray:
        """signs[a, b] = ±1 from moving the generators of b past those of a."""
        masks = np.arange(self.dim, dtype=np.int64)
        parity = np.zeros((self.dim, self.dim), dtype=np.int8)
        for j in range(self.n):
            above = (_popcount(masks >> (j + 1)) & 1).astype(np.int8)
            has_j = ((masks >> j) & 1).astype(np.int8)
            parity ^= above[:, None] & has_j[None, :]
        return np.where(parity == 1, -1, 1).astype(np.int8)

    @cached_property
    def square_factors(self) -> List[object]:
        """Π_{i ∈ mask} (-B_i) for every mask."""
        factors = [xl.ONE] * self.dim
        for mask in range(1, self.dim):
            low = (mask & -mask).bit_length() - 1
            factors[mask] = factors[mask & (mask - 1)] * (-self.form[low])
        return factors

    def basis_product(self, a: int, b: int) -> Tuple[int, object]:
        """e_a e_b = coefficient · e_{a xor b}"""
        return a ^ b, int(self.signs[a, b]) * self.square_factors[a & b]

    def basis_labels(self) -> List[str]:
        return [monomial_label(mask) for mask in range(self.dim)]

    def one(self) -> 'CliffordElement':
        return CliffordElement(self, {0: xl.ONE})

    def generator(self, i: int) -> 'CliffordElement':
        """e_i, 1-based."""
        if not 1 <= i <= self.n:
            raise ShapeError(f"generator index must lie in 1..{self.n}, got {i}")
        return CliffordElement(self, {1 << (i - 1): xl.ONE})

    def monomial(self, indices: Sequence[int]) -> 'CliffordElement':
        """e_{i1} e_{i2} ... in the given order (1-based)."""
        out = self.one()
        for i in indices:
            out = out * self.generator(i)
        return out

    def basis_element(self, mask: int) -> 'CliffordElement':
        return CliffordElement(self, {mask: xl.ONE})

    def random_element(self, rng: np.random.Generator, density: float = 0.5) -> 'CliffordElement':
        coeffs = {m: int(rng.integers(-3, 4)) for m in range(self.dim) if rng.random() < density}
        return CliffordElement(self, coeffs)

    def relation_witness(self) -> Optional[Tuple[int, int]]:
        """First generator pair (1-based) violating e_i e_j + e_j e_i = -2 B_i δ_ij."""
        for i, j in itertools.product(range(1, self.n + 1), repeat=2):
            ei, ej = self.generator(i), self.generator(j)
            expected = self.one().scale(-2 * self.form[i - 1]) if i == j else CliffordElement(self, {})
            if ei * ej + ej * ei != expected:
                return i, j
        return None


def monomial_label(mask: int) -> str:
    if mask == 0:
        return '1'
    return ''.join(f"e{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


def clifford(n: int, form: Optional[Sequence[object]] = None) -> CliffordAlgebra:
    return CliffordAlgebra(n, form)


@dataclass(eq=False)
class CliffordElement:
    algebra: CliffordAlgebra
    coeffs: Dict[int, object] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {m: xl.qqi(c) for m, c in self.coeffs.items() if c}

    def _same(self, other: 'CliffordElement'):
        if other.algebra is not self.algebra:
            raise ShapeError("elements of different Clifford algebras")

    def __add__(self, other: 'CliffordElement') -> 'CliffordElement':
        self._same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, xl.ZERO) + c
        return CliffordElement(self.algebra, out)

    def __neg__(self) -> 'CliffordElement':
        return self.scale(-1)

    def __sub__(self, other: 'CliffordElement') -> 'CliffordElement':
        return self + (-other)

    def scale(self, c) -> 'CliffordElement':
        c = xl.qqi(c)
        return CliffordElement(self.algebra, {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other: 'CliffordElement') -> 'CliffordElement':
        self._same(other)
        out: Dict[int, object] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                target, c = self.algebra.basis_product(a, b)
                out[target] = out.get(target, xl.ZERO) + x * y * c
        return CliffordElement(self.algebra, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return other.algebra is self.algebra and not (self - other).coeffs

    def __hash__(self):
        return id(self)

    def __repr__(self) -> str:
        if not self.coeffs:
            return '0'
        return ' + '.join(f"({xl.format_scalar(c)}){monomial_label(m)}" for m, c in sorted(self.coeffs.items()))


# ===== Grading =====

@dataclass(frozen=True)
class Grading:
    """χ(monomial of length k) = (-1)^k monomial."""
    algebra: CliffordAlgebra

    def __call__(self, x: CliffordElement) -> CliffordElement:
        return CliffordElement(self.algebra, {m: (-c if bin(m).count('1') % 2 else c) for m, c in x.coeffs.items()})

    def matrix(self) -> DomainMatrix:
        return xl.sparse({(m, m): (-1 if bin(m).count('1') % 2 else 1) for m in range(self.algebra.dim)},
                         (self.algebra.dim, self.algebra.dim))

    def eigenspace_dimensions(self) -> Tuple[int, int]:
        """(dim Cl⁺, dim Cl⁻)"""
        even = sum(1 for m in range(self.algebra.dim) if bin(m).count('1') % 2 == 0)
        return even, self.algebra.dim - even

    def is_involution(self) -> bool:
        chi = self.matrix()
        return xl.equal(xl.matmul(chi, chi), xl.identity(self.algebra.dim))


def grading(C: CliffordAlgebra) -> Grading:
    return Grading(C)


# ===== Matrix representations =====

PAULI = {
    'x': xl.from_rows([[0, 1], [1, 0]]),
    'y': xl.from_rows([[0, xl.qqi(0, -1)], [xl.qqi(0, 1), 0]]),
    'z': xl.from_rows([[1, 0], [0, -1]]),
    '1': xl.identity(2),
}


def _kron_all(factors: Sequence[DomainMatrix]) -> DomainMatrix:
    out = factors[0]
    for f in factors[1:]:
        out = xl.kron(out, f)
    return out


def spin_representation(k: int) -> List[DomainMatrix]:
    """
    c(e_1) .. c(e_2k) on C^{2^k}: i times the Jordan-Wigner strings
    Z ⊗ .. ⊗ Z ⊗ X ⊗ 1 .. and Z ⊗ .. ⊗ Z ⊗ Y ⊗ 1 ..

    Raises:
        InvalidDimensionError: If k < 1
        SizeLimitError: If k exceeds the supported size
    """
    if k < 1:
        raise InvalidDimensionError(f"spin representation needs k >= 1, got {k}")
    if k > MAX_SPIN_K:
        raise SizeLimitError(f"spin representation with k={k} exceeds the limit of {MAX_SPIN_K}")
    i_unit = xl.I_UNIT
    generators = []
    for j in range(k):
        for middle in ('x', 'y'):
            factors = [PAULI['z']] * j + [PAULI[middle]] + [PAULI['1']] * (k - j - 1)
            generators.append(_kron_all(factors).mul(i_unit))
    return generators


def relation_witness(matrices: Sequence) -> Optional[Tuple[int, int]]:
    """First pair (1-based) with c_i c_j + c_j c_i ≠ -2 δ_ij, or None."""
    mats = [xl.exact_matrix(m) for m in matrices]
    if not mats:
        return None
    size = mats[0].shape[0]
    for m in mats:
        if m.shape != (size, size):
            raise ShapeError("representation matrices must be square and of equal size")
    ident = xl.identity(size)
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            anti = xl.matmul(mats[i], mats[j]).to_sparse() + xl.matmul(mats[j], mats[i]).to_sparse()
            expected = ident.mul(xl.qqi(-2)) if i == j else xl.zeros(size, size)
            if not xl.equal(anti, expected):
                return i + 1, j + 1
    return None


def check_relations(matrices: Sequence) -> None:
    """
    Raises:
        CliffordRelationError: With the first offending pair
    """
    pair = relation_witness(matrices)
    if pair is not None:
        raise CliffordRelationError(pair)


def monomial_images(generators: Sequence) -> List[DomainMatrix]:
    """c(e_A) for every mask A, built as c(e_{A minus top}) c(e_top)."""
    mats = [xl.exact_matrix(m) for m in generators]
    size = mats[0].shape[0]
    images = [xl.identity(size)]
    for mask in range(1, 2 ** len(mats)):
        top = mask.bit_length() - 1
        images.append(xl.matmul(images[mask ^ (1 << top)], mats[top]))
    return images


def monomial_span_rank(generators: Sequence) -> int:
    """Rank of the monomial images flattened to vectors (4^k for the full matrix algebra)."""
    images = monomial_images(generators)
    size = images[0].shape[0]
    entries = {}
    for col, m in enumerate(images):
        for (r, c), v in xl.items(m):
            entries[(r * size + c, col)] = v
    return xl.rank(xl.sparse(entries, (size * size, len(images))))


def odd_spin_representation(k: int):
    """Cl(C^{2k+1}) ≅ M_{2^k} ⊕ M_{2^k} is not realized."""
    raise UnsupportedError(f"odd-dimensional Clifford algebra Cl(C^{2 * k + 1}) is not supported")


def dirac_matrices() -> Tuple[DomainMatrix, List[DomainMatrix]]:
    """
    Dirac's A_0 = diag(1_2, -1_2) and A_i = [[0, σ_i], [-σ_i, 0]], i = 1, 2, 3.
    """
    ident2 = xl.identity(2)
    zero2 = xl.zeros(2, 2)

    def block(a, b, c, d) -> DomainMatrix:
        top = xl.hstack([a, b])
        bottom = xl.hstack([c, d])
        return xl.vstack([top, bottom])

    a0 = block(ident2, zero2, zero2, ident2.mul(xl.qqi(-1)))
    spatial = [block(zero2, PAULI[s], PAULI[s].mul(xl.qqi(-1)), zero2) for s in ('x', 'y', 'z')]
    return a0, spatial


def dirac_relations_hold() -> bool:
    """A_0² = 1, A_i A_0 = -A_0 A_i and the Clifford relations among A_1..A_3."""
    a0, spatial = dirac_matrices()
    if not xl.equal(xl.matmul(a0, a0), xl.identity(4)):
        return False
    for a in spatial:
        if not xl.equal(xl.matmul(a, a0), xl.matmul(a0, a).mul(xl.qqi(-1))):
            return False
    return relation_witness(spatial) is None


def two_dimensional_examples() -> Tuple[List[DomainMatrix], List[DomainMatrix]]:
    """
    Coefficients of the two 2x2 flat Dirac operators
    [[0, i∂1 + ∂2], [i∂1 - ∂2, 0]] and i[[∂2, ∂1], [∂1, -∂2]].
    """
    i = xl.I_UNIT
    first = [xl.from_rows([[0, i], [i, 0]]), xl.from_rows([[0, 1], [-1, 0]])]
    second = [xl.from_rows([[0, i], [i, 0]]), xl.from_rows([[i, 0], [0, -i]])]
    return first, second


# ===== Symbol operators =====

def symbol_ring(n: int):
    """Polynomial ring Q(i)[∂1, .., ∂n] in commuting symbols."""
    names = ','.join(f"d{i}" for i in range(1, n + 1))
    R, *gens = ring(names, QQ_I)
    return R, gens


@dataclass(eq=False)
class SymbolOperator:
    """m x m matrix of polynomials in the symbols ∂_i."""
    ring: object
    entries: List[List[object]]

    def __post_init__(self):
        m = len(self.entries)
        if any(len(row) != m for row in self.entries):
            raise ShapeError("symbol operator must be a square matrix")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __mul__(self, other: 'SymbolOperator') -> 'SymbolOperator':
        m = self.size
        zero = self.ring.zero
        out = [[sum((self.entries[a][c] * other.entries[c][b] for c in range(m)), zero)
                for b in range(m)] for a in range(m)]
        return SymbolOperator(self.ring, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolOperator):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return id(self)

    @classmethod
    def scalar(cls, R, poly, m: int) -> 'SymbolOperator':
        return cls(R, [[poly if a == b else R.zero for b in range(m)] for a in range(m)])

    def __str__(self) -> str:
        return '[' + '; '.join(', '.join(str(p) for p in row) for row in self.entries) + ']'


def dirac_operator(matrices: Sequence) -> SymbolOperator:
    """D = Σ c(e_i) ∂_i."""
    mats = [xl.exact_matrix(m) for m in matrices]
    R, gens = symbol_ring(len(mats))
    size = mats[0].shape[0]
    entries = [[R.zero] * size for _ in range(size)]
    for mat, symbol in zip(mats, gens):
        for (r, c), v in xl.items(mat):
            entries[r][c] = entries[r][c] + symbol * v
    return SymbolOperator(R, entries)


def negative_laplacian(R, gens, size: int) -> SymbolOperator:
    """-(Σ ∂_i²) · identity"""
    return SymbolOperator.scalar(R, -sum((g ** 2 for g in gens), R.zero), size)


def dirac_square(matrices: Sequence, check: bool = True) -> Tuple[SymbolOperator, SymbolOperator]:
    """
    (D, D²) for D = Σ c(e_i) ∂_i.

    Raises:
        CliffordRelationError: If check and the matrices violate the Clifford relations
    """
    if check:
        check_relations(matrices)
    D = dirac_operator(matrices)
    square = D * D
    if check and square != negative_laplacian(D.ring, D.ring.gens, D.size):
        raise InternalError("D² differs from the negative Laplacian although the relations hold")
    return D, square


def squares_to_laplacian(matrices: Sequence) -> bool:
    """D² = -Σ∂_i² · 1, decided on the symbols alone."""
    D, square = dirac_square(matrices, check=False)
    return square == negative_laplacian(D.ring, D.ring.gens, D.size)
