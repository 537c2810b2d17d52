"""
Hochschild, cyclic and twisted (co)homology of finite-dimensional algebras.

Chains live in C_n = A^{⊗(n+1)} with the row-major tensor basis
(e_{t0} ⊗ ... ⊗ e_{tn} has index sum t_k d^{n-k}). Every map is an exact
sparse matrix over Q(i); dimensions come from exact ranks.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from . import exact_linalg as xl
from .constants import CHAIN_SIZE_LIMIT, HOMOLOGY_SIDES, HOMOLOGY_VARIANTS
from .errors import (
    DomainError, MissingAutomorphismError, ShapeError, SizeLimitError, ValidationError,
)
from .logger import get_logger
from .utils import chunked, parallel_map, worker_count

logger = get_logger('homology')

Tensor = Tuple[int, ...]
Terms = Dict[Tensor, object]


# ===== Algebras =====

@dataclass(eq=False)
class FiniteAlgebra:
    """
    Finite-dimensional unital algebra given by structure constants.

    structure[(i, j, k)] = c_ij^k with e_i e_j = sum_k c_ij^k e_k (zeros omitted).
    automorphism and involution store images of basis vectors as columns.
    """
    d: int
    structure: Dict[Tuple[int, int, int], object]
    unit: Tuple[object, ...]
    automorphism: Optional[DomainMatrix] = None
    involution: Optional[DomainMatrix] = None
    name: str = 'A'

    def __post_init__(self):
        if self.d < 1:
            raise ValidationError(f"Algebra dimension must be >= 1, got {self.d}")
        if len(self.unit) != self.d:
            raise ShapeError(f"Unit vector has {len(self.unit)} entries, expected {self.d}")
        self.structure = {key: xl.qqi(v) for key, v in self.structure.items() if v}
        self.unit = tuple(xl.qqi(v) for v in self.unit)
        for (i, j, k) in self.structure:
            if not (0 <= i < self.d and 0 <= j < self.d and 0 <= k < self.d):
                raise ShapeError(f"Structure index ({i}, {j}, {k}) out of range for d={self.d}")
        for label, m in (('automorphism', self.automorphism), ('involution', self.involution)):
            if m is not None and m.shape != (self.d, self.d):
                raise ShapeError(f"{label} must be {self.d}x{self.d}, got {m.shape}")

    @cached_property
    def products(self) -> Dict[Tuple[int, int], List[Tuple[int, object]]]:
        """(i, j) -> [(k, c_ij^k), ...]"""
        table: Dict[Tuple[int, int], List[Tuple[int, object]]] = defaultdict(list)
        for (i, j, k), c in sorted(self.structure.items()):
            table[(i, j)].append((k, c))
        return dict(table)

    def product_terms(self, i: int, j: int) -> List[Tuple[int, object]]:
        return self.products.get((i, j), [])

    @cached_property
    def sigma_columns(self) -> Optional[List[List[Tuple[int, object]]]]:
        if self.automorphism is None:
            return None
        return _columns(self.automorphism, self.d)

    def multiply(self, x: Sequence[object], y: Sequence[object]) -> List[object]:
        """Product of two coordinate vectors."""
        out = [xl.ZERO] * self.d
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in self.product_terms(i, j):
                    out[k] += xi * yj * c
        return out

    def basis_vector(self, i: int) -> List[object]:
        v = [xl.ZERO] * self.d
        v[i] = xl.ONE
        return v

    def apply(self, matrix: DomainMatrix, x: Sequence[object]) -> List[object]:
        return xl.column_to_vector(xl.matmul(matrix, xl.vector_to_column(x)))

    def is_associative(self) -> bool:
        return self.associativity_witness() is None

    def associativity_witness(self) -> Optional[Tuple[int, int, int]]:
        for i, j, k in itertools.product(range(self.d), repeat=3):
            left = self.multiply(self.multiply(self.basis_vector(i), self.basis_vector(j)), self.basis_vector(k))
            right = self.multiply(self.basis_vector(i), self.multiply(self.basis_vector(j), self.basis_vector(k)))
            if left != right:
                return (i, j, k)
        return None

    def validate(self) -> 'FiniteAlgebra':
        """
        Check associativity, unit laws and (if present) that σ is a multiplicative bijection.

        Raises:
            DomainError: With the first violating basis tuple
        """
        witness = self.associativity_witness()
        if witness is not None:
            raise DomainError(f"{self.name}: associativity fails at basis triple {witness}")
        for i in range(self.d):
            e = self.basis_vector(i)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise DomainError(f"{self.name}: unit law fails for basis element {i}")
        if self.automorphism is not None:
            if xl.rank(self.automorphism) != self.d:
                raise DomainError(f"{self.name}: automorphism is not invertible")
            for i, j in itertools.product(range(self.d), repeat=2):
                lhs = self.apply(self.automorphism, self.multiply(self.basis_vector(i), self.basis_vector(j)))
                rhs = self.multiply(self.apply(self.automorphism, self.basis_vector(i)),
                                    self.apply(self.automorphism, self.basis_vector(j)))
                if lhs != rhs:
                    raise DomainError(f"{self.name}: automorphism is not multiplicative at ({i}, {j})")
        return self

    def with_automorphism(self, sigma: Optional[DomainMatrix], name: Optional[str] = None) -> 'FiniteAlgebra':
        return FiniteAlgebra(self.d, dict(self.structure), self.unit, sigma, self.involution,
                             name or self.name)

    def change_basis(self, P: DomainMatrix) -> 'FiniteAlgebra':
        """
        Same algebra in the basis f_i = sum_j P[j, i] e_j.

        Structure constants, unit and automorphism are transported exactly.
        """
        if P.shape != (self.d, self.d) or xl.rank(P) != self.d:
            raise DomainError("change of basis must be an invertible d x d matrix")
        P_inv = xl.inverse(P)
        cols = _columns(P, self.d)
        structure: Dict[Tuple[int, int, int], object] = defaultdict(lambda: xl.ZERO)
        for i, j in itertools.product(range(self.d), repeat=2):
            prod = [xl.ZERO] * self.d
            for a, pa in cols[i]:
                for b, pb in cols[j]:
                    for m, c in self.product_terms(a, b):
                        prod[m] += pa * pb * c
            new_coords = self.apply(P_inv, prod)
            for k, v in enumerate(new_coords):
                if v:
                    structure[(i, j, k)] += v
        unit = self.apply(P_inv, self.unit)
        sigma = None
        if self.automorphism is not None:
            sigma = xl.matmul(xl.matmul(P_inv, self.automorphism), P)
        involution = None
        if self.involution is not None:
            # conjugate-linear: J' = P^{-1} J conj(P)
            conj_P = xl.sparse({rc: xl.conj(v) for rc, v in xl.items(P)}, P.shape)
            involution = xl.matmul(xl.matmul(P_inv, self.involution), conj_P)
        return FiniteAlgebra(self.d, dict(structure), tuple(unit), sigma, involution, f"{self.name}'")


def _columns(matrix: DomainMatrix, d: int) -> List[List[Tuple[int, object]]]:
    cols: List[List[Tuple[int, object]]] = [[] for _ in range(d)]
    for (r, c), v in sorted(xl.items(matrix)):
        cols[c].append((r, v))
    return cols


def complex_numbers() -> FiniteAlgebra:
    return FiniteAlgebra(1, {(0, 0, 0): 1}, (1,), name='C')


def diagonal_algebra(d: int) -> FiniteAlgebra:
    """Functions on d points (C^d with pointwise product)."""
    return FiniteAlgebra(d, {(i, i, i): 1 for i in range(d)}, tuple([1] * d), name=f"C^{d}")


def matrix_algebra(m: int) -> FiniteAlgebra:
    """M_m with matrix units E_ab at index a*m + b."""
    structure = {}
    for a, b, c in itertools.product(range(m), repeat=3):
        structure[(a * m + b, b * m + c, a * m + c)] = 1
    unit = tuple(1 if a == b else 0 for a in range(m) for b in range(m))
    return FiniteAlgebra(m * m, structure, unit, name=f"M{m}")


def swap_automorphism() -> DomainMatrix:
    return xl.from_rows([[0, 1], [1, 0]])


def inner_automorphism(m: int, g: Sequence[Sequence[object]]) -> DomainMatrix:
    """Matrix of x -> g x g^{-1} on M_m in the matrix-unit basis."""
    G = xl.from_rows(g)
    G_inv = xl.to_rows(xl.inverse(G))
    g_rows = xl.to_rows(G)
    entries = {}
    for a, b in itertools.product(range(m), repeat=2):
        for c, e in itertools.product(range(m), repeat=2):
            v = g_rows[c][a] * G_inv[b][e]
            if v:
                entries[(c * m + e, a * m + b)] = v
    return xl.sparse(entries, (m * m, m * m))


# ===== Chain maps =====

@dataclass
class ChainMap:
    """Exact linear map between tensor powers of A (columns = source basis)."""
    name: str
    degree: int
    source_dim: int
    target_dim: int
    matrix: DomainMatrix = field(repr=False)

    def compose(self, other: 'ChainMap') -> 'ChainMap':
        """self ∘ other"""
        if other.target_dim != self.source_dim:
            raise ShapeError(f"cannot compose {self.name} after {other.name}")
        return ChainMap(f"{self.name}∘{other.name}", other.degree, other.source_dim, self.target_dim,
                        xl.matmul(self.matrix, other.matrix))

    def __add__(self, other: 'ChainMap') -> 'ChainMap':
        return ChainMap(f"{self.name}+{other.name}", self.degree, self.source_dim, self.target_dim,
                        self.matrix.to_sparse() + other.matrix.to_sparse())

    def __sub__(self, other: 'ChainMap') -> 'ChainMap':
        return ChainMap(f"{self.name}-{other.name}", self.degree, self.source_dim, self.target_dim,
                        self.matrix.to_sparse() - other.matrix.to_sparse())

    def transpose(self) -> DomainMatrix:
        return xl.transpose(self.matrix)

    @property
    def is_zero(self) -> bool:
        return xl.is_zero(self.matrix)

    def rank(self) -> int:
        return xl.rank(self.matrix)

    def to_numpy(self):
        return xl.to_numpy(self.matrix)


def tensor_index(t: Tensor, d: int) -> int:
    idx = 0
    for x in t:
        idx = idx * d + x
    return idx


def tensor_basis(d: int, length: int) -> List[Tensor]:
    return list(itertools.product(range(d), repeat=length))


def check_size(A: FiniteAlgebra, length: int, limit: int = CHAIN_SIZE_LIMIT) -> None:
    """Raise SizeLimitError when d^length exceeds the guard."""
    if A.d ** length > limit:
        raise SizeLimitError(f"{A.name}: d^{length} = {A.d ** length} exceeds the size guard {limit}")


def _assemble(A: FiniteAlgebra, source_len: int, target_len: int,
              column_terms: Callable[[Tensor], Terms], name: str, degree: int) -> ChainMap:
    """Build the exact matrix column by column, chunks of columns on the worker pool."""
    check_size(A, max(source_len, target_len))
    d = A.d
    sources = tensor_basis(d, source_len)

    def work(chunk):
        entries = {}
        for t in chunk:
            col = tensor_index(t, d)
            for target, c in column_terms(t).items():
                if c:
                    entries[(tensor_index(target, d), col)] = c
        return entries

    entries = {}
    for part in parallel_map(work, chunked(sources, worker_count())):
        entries.update(part)
    return ChainMap(name, degree, d ** source_len, d ** target_len,
                    xl.sparse(entries, (d ** target_len, d ** source_len)))


def _resolve_sigma(A: FiniteAlgebra, sigma: Optional[DomainMatrix]) -> List[List[Tuple[int, object]]]:
    if sigma is not None:
        if sigma.shape != (A.d, A.d):
            raise ShapeError(f"automorphism must be {A.d}x{A.d}")
        return _columns(sigma, A.d)
    if A.sigma_columns is None:
        raise MissingAutomorphismError(f"{A.name} has no automorphism; twisted operators need σ")
    return A.sigma_columns


def _face_terms(A: FiniteAlgebra, t: Tensor, out: Terms, n: int) -> None:
    for i in range(n):
        sign = -1 if i % 2 else 1
        for k, c in A.product_terms(t[i], t[i + 1]):
            key = t[:i] + (k,) + t[i + 2:]
            out[key] = out.get(key, xl.ZERO) + sign * c


def _wrap_terms(A: FiniteAlgebra, t: Tensor, out: Terms, n: int,
                sigma_cols: Optional[List[List[Tuple[int, object]]]]) -> None:
    sign = -1 if n % 2 else 1
    images = sigma_cols[t[n]] if sigma_cols is not None else [(t[n], xl.ONE)]
    for m, s in images:
        for k, c in A.product_terms(m, t[0]):
            key = (k,) + t[1:n]
            out[key] = out.get(key, xl.ZERO) + sign * s * c


def hochschild_boundary(A: FiniteAlgebra, n: int) -> ChainMap:
    """b_n : A^{⊗(n+1)} -> A^{⊗n}, faces plus the wrap term (-1)^n a_n a_0 ⊗ ..."""
    if n < 1:
        raise ValidationError(f"hochschild_boundary needs n >= 1, got {n}")

    def terms(t):
        out: Terms = {}
        _face_terms(A, t, out, n)
        _wrap_terms(A, t, out, n, None)
        return out

    return _assemble(A, n + 1, n, terms, f"b{n}", n)


def twisted_boundary(A: FiniteAlgebra, n: int, sigma: Optional[DomainMatrix] = None) -> ChainMap:
    """b_σ,n: as b_n with σ applied to a_n in the wrap term."""
    if n < 1:
        raise ValidationError(f"twisted_boundary needs n >= 1, got {n}")
    sigma_cols = _resolve_sigma(A, sigma)

    def terms(t):
        out: Terms = {}
        _face_terms(A, t, out, n)
        _wrap_terms(A, t, out, n, sigma_cols)
        return out

    return _assemble(A, n + 1, n, terms, f"bσ{n}", n)


def bar_boundary(A: FiniteAlgebra, n: int) -> ChainMap:
    """b'_n: the faces of b_n without the wrap term."""
    if n < 1:
        raise ValidationError(f"bar_boundary needs n >= 1, got {n}")

    def terms(t):
        out: Terms = {}
        _face_terms(A, t, out, n)
        return out

    return _assemble(A, n + 1, n, terms, f"b'{n}", n)


def contracting_homotopy(A: FiniteAlgebra, n: int) -> ChainMap:
    """s_n : A^{⊗(n+1)} -> A^{⊗(n+2)}, x -> 1 ⊗ x."""
    if n < 0:
        raise ValidationError(f"contracting_homotopy needs n >= 0, got {n}")
    unit_terms = [(m, u) for m, u in enumerate(A.unit) if u]

    def terms(t):
        return {(m,) + t: u for m, u in unit_terms}

    return _assemble(A, n + 1, n + 2, terms, f"s{n}", n)


def cyclic_operator(A: FiniteAlgebra, n: int, sigma: Optional[DomainMatrix] = None,
                    twisted: bool = False) -> ChainMap:
    """
    λ_n(a_0 ⊗ ... ⊗ a_n) = (-1)^n a_n ⊗ a_0 ⊗ ... ⊗ a_{n-1}.

    With twisted=True (or an explicit sigma) the rotated slot carries σ(a_n);
    λ_σ^{n+1} is then σ applied to every slot.
    """
    if n < 0:
        raise ValidationError(f"cyclic_operator needs n >= 0, got {n}")
    sigma_cols = _resolve_sigma(A, sigma) if (twisted or sigma is not None) else None
    sign = -1 if n % 2 else 1

    def terms(t):
        images = sigma_cols[t[n]] if sigma_cols is not None else [(t[n], xl.ONE)]
        return {(m,) + t[:n]: sign * s for m, s in images}

    return _assemble(A, n + 1, n + 1, terms, f"λσ{n}" if sigma_cols else f"λ{n}", n)


def diagonal_action(A: FiniteAlgebra, n: int, sigma: Optional[DomainMatrix] = None) -> ChainMap:
    """σ^{⊗(n+1)} on A^{⊗(n+1)}."""
    sigma_cols = _resolve_sigma(A, sigma)

    def terms(t):
        out: Terms = {}
        for choice in itertools.product(*(sigma_cols[x] for x in t)):
            key = tuple(m for m, _ in choice)
            coeff = xl.ONE
            for _, s in choice:
                coeff *= s
            out[key] = out.get(key, xl.ZERO) + coeff
        return out

    return _assemble(A, n + 1, n + 1, terms, f"σ⊗{n}", n)


def identity_map(A: FiniteAlgebra, n: int) -> ChainMap:
    check_size(A, n + 1)
    dim = A.d ** (n + 1)
    return ChainMap(f"id{n}", n, dim, dim, xl.identity(dim))


# ===== Homology =====

def _reduction(A: FiniteAlgebra, n: int, variant: str) -> Optional[DomainMatrix]:
    """Matrix whose image is quotiented out (homology) / whose kernel is kept (cohomology)."""
    if variant == 'hochschild':
        return None
    ident = identity_map(A, n)
    if variant == 'twisted-hochschild':
        return (ident - diagonal_action(A, n)).matrix
    if variant == 'cyclic':
        return (ident - cyclic_operator(A, n)).matrix
    return (ident - cyclic_operator(A, n, twisted=True)).matrix


def _boundary(A: FiniteAlgebra, n: int, variant: str) -> ChainMap:
    if variant.startswith('twisted'):
        return twisted_boundary(A, n)
    return hochschild_boundary(A, n)


def homology_dims(A: FiniteAlgebra, N: int, variant: str = 'hochschild',
                  side: str = 'homology', size_limit: int = CHAIN_SIZE_LIMIT) -> List[int]:
    """
    Dimensions H_0..H_N (or H^0..H^N) by exact rank-nullity.

    Cyclic variants use the quotient C_n / im(1-λ) on the homology side and
    the fixed cochains ker(1-λ)^T on the cohomology side; twisted Hochschild
    uses C_n / im(1-σ^⊗) with b_σ.

    Raises:
        ValidationError: Unknown variant/side or N < 0
        MissingAutomorphismError: Twisted variant without σ
        SizeLimitError: d^{N+2} above the guard
    """
    if variant not in HOMOLOGY_VARIANTS:
        raise ValidationError(f"Unknown variant {variant!r}; expected one of {HOMOLOGY_VARIANTS}")
    if side not in HOMOLOGY_SIDES:
        raise ValidationError(f"Unknown side {side!r}; expected one of {HOMOLOGY_SIDES}")
    if N < 0:
        raise ValidationError(f"max degree must be >= 0, got {N}")
    if variant.startswith('twisted') and A.automorphism is None:
        raise MissingAutomorphismError(f"{A.name}: variant {variant} needs an automorphism")
    check_size(A, N + 2, size_limit)

    logger.info(f"{A.name}: {variant} {side} up to degree {N}")
    degrees = list(range(N + 2))
    boundaries: Dict[int, DomainMatrix] = {}
    for n, b in zip(degrees[1:], parallel_map(lambda k: _boundary(A, k, variant), degrees[1:])):
        boundaries[n] = b.matrix
    reductions: Dict[int, Optional[DomainMatrix]] = dict(
        zip(degrees, parallel_map(lambda k: _reduction(A, k, variant), degrees)))

    if side == 'homology':
        dims = _homology_side(A, N, boundaries, reductions)
    else:
        dims = _cohomology_side(A, N, boundaries, reductions)
    logger.info(f"{A.name}: {variant} {side} dims = {dims}")
    return dims


def _homology_side(A, N, boundaries, reductions) -> List[int]:
    def quotient_rank(n: int) -> int:
        # rank of b_n on C_n/R_n -> C_{n-1}/R_{n-1}
        b = boundaries[n]
        r = reductions[n - 1]
        if r is None:
            return xl.rank(b)
        return xl.rank(xl.hstack([b, r])) - xl.rank(r)

    def quotient_dim(n: int) -> int:
        r = reductions[n]
        full = A.d ** (n + 1)
        return full if r is None else full - xl.rank(r)

    ranks = dict(zip(range(1, N + 2), parallel_map(quotient_rank, range(1, N + 2))))
    dims = parallel_map(quotient_dim, range(N + 1))
    return [dims[n] - ranks.get(n, 0) - ranks[n + 1] for n in range(N + 1)]


def _cohomology_side(A, N, boundaries, reductions) -> List[int]:
    def kept(n: int) -> DomainMatrix:
        r = reductions[n]
        if r is None:
            return xl.identity(A.d ** (n + 1))
        return xl.nullspace(xl.transpose(r))

    kernels = dict(zip(range(N + 2), parallel_map(kept, range(N + 2))))

    def coboundary_rank(n: int) -> int:
        # δ_n = b_{n+1}^T restricted to the kept cochains of degree n
        return xl.rank(xl.matmul(xl.transpose(boundaries[n + 1]), kernels[n]))

    ranks = dict(zip(range(N + 1), parallel_map(coboundary_rank, range(N + 1))))
    return [kernels[n].shape[1] - ranks[n] - ranks.get(n - 1, 0) for n in range(N + 1)]


def commutator_quotient(A: FiniteAlgebra) -> int:
    """dim A/[A, A]"""
    entries = {}
    col = 0
    for i, j in itertools.product(range(A.d), repeat=2):
        for k, c in A.product_terms(i, j):
            entries[(k, col)] = entries.get((k, col), xl.ZERO) + c
        for k, c in A.product_terms(j, i):
            entries[(k, col)] = entries.get((k, col), xl.ZERO) - c
        col += 1
    return A.d - xl.rank(xl.sparse(entries, (A.d, col)))


def cyclic_cocycle_basis(A: FiniteAlgebra, n: int, sigma: Optional[DomainMatrix] = None,
                         twisted: bool = False) -> DomainMatrix:
    """
    Basis (columns) of Z^n_λ: cochains φ with b φ = 0 and λ φ = φ.

    Twisted: b_σ φ = 0 and λ_σ φ = φ.
    """
    use_sigma = twisted or sigma is not None
    b = twisted_boundary(A, n + 1, sigma) if use_sigma else hochschild_boundary(A, n + 1)
    lam = cyclic_operator(A, n, sigma, twisted=use_sigma)
    fixed = identity_map(A, n) - lam
    system = xl.vstack([b.transpose(), fixed.transpose()])
    return xl.nullspace(system)
