"""
Universal differential forms, derivations, cyclic cocycles as closed graded
traces, and Hodge decomposition of finite graded calculi.

Degree k of the universal calculus is modeled as Ã ⊗ A^{⊗k}, Ã = A ⊕ C1̃:
the basis label (i0, i1, ..., ik) stands for e_{i0} de_{i1} ... de_{ik},
with i0 = d meaning the adjoined unit 1̃. Everything except hodge() is exact.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.matrices import DomainMatrix

from . import exact_linalg as xl
from .constants import CHAIN_SIZE_LIMIT, GRAM_MIN_EIGENVALUE, HARMONIC_RTOL, HODGE_ORTHOGONALITY_TOL
from .errors import (
    DegreeOverflowError, DomainError, InternalError, PreconditionError, ShapeError, SizeLimitError,
    ValidationError,
)
from .homology import (
    FiniteAlgebra, cyclic_cocycle_basis, cyclic_operator, hochschild_boundary, identity_map,
    tensor_basis, tensor_index, twisted_boundary,
)
from .logger import get_logger
from .utils import parallel_map

logger = get_logger('calculus')

Label = Tuple[int, ...]


# ===== Forms =====

@dataclass(eq=False)
class Form:
    """Element of one degree of the universal calculus: {label: coefficient}."""
    degree: int
    terms: Dict[Label, object] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: xl.qqi(v) for k, v in self.terms.items() if v}

    def __add__(self, other: 'Form') -> 'Form':
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, xl.ZERO) + v
        return Form(self.degree, out)

    def __neg__(self) -> 'Form':
        return Form(self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: 'Form') -> 'Form':
        return self + (-other)

    def scale(self, c) -> 'Form':
        c = xl.qqi(c)
        return Form(self.degree, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and (self - other).is_zero

    def __hash__(self):
        return id(self)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: 'Form'):
        if other.degree != self.degree:
            raise ShapeError(f"cannot add forms of degree {self.degree} and {other.degree}")


def _accumulate(out: Dict[Label, object], key: Label, value) -> None:
    out[key] = out.get(key, xl.ZERO) + value


class UniversalForms:
    """
    Truncation at degree N of the universal differential calculus Ω_u(A).

    d(ã0 da1 ... dak) = dã0 da1 ... dak, with d(1̃) = 0; in degree 0 this is
    a ↦ 1̃ ⊗ a.
    """

    def __init__(self, A: FiniteAlgebra, N: int, size_limit: int = CHAIN_SIZE_LIMIT):
        if N < 0:
            raise ValidationError(f"max degree must be >= 0, got {N}")
        top = (A.d + 1) * A.d ** N
        if top > size_limit:
            raise SizeLimitError(f"(d+1)·d^N = {top} exceeds the size guard {size_limit}")
        self.A = A
        self.N = N
        self.d = A.d
        self.unit_index = A.d
        logger.debug(f"universal forms over {A.name} up to degree {N}")

    # ----- bookkeeping -----

    def dim(self, k: int) -> int:
        return (self.d + 1) * self.d ** k

    def basis_labels(self, k: int) -> List[Label]:
        return [(i0,) + rest for i0 in range(self.d + 1) for rest in tensor_basis(self.d, k)]

    def index(self, label: Label) -> int:
        k = len(label) - 1
        return label[0] * self.d ** k + tensor_index(label[1:], self.d)

    def basis_form(self, label: Sequence[int]) -> Form:
        return Form(len(label) - 1, {tuple(label): xl.ONE})

    def unit_form(self) -> Form:
        """1̃ in degree 0."""
        return self.basis_form((self.unit_index,))

    def algebra_element(self, coords: Sequence[object], tilde: object = 0) -> Form:
        """a + λ1̃ in degree 0 from A-coordinates."""
        terms = {(i,): c for i, c in enumerate(coords)}
        terms[(self.unit_index,)] = tilde
        return Form(0, terms)

    def monomial(self, a0: Sequence[object], *slots: Sequence[object]) -> Form:
        """a0 da1 ... dak for coordinate vectors (a0 in Ã: d+1 entries, or d entries)."""
        a0 = list(a0) + [0] * (self.d + 1 - len(a0))
        out: Dict[Label, object] = {}
        factors = [list(enumerate(a0))] + [list(enumerate(s)) for s in slots]
        for choice in itertools.product(*factors):
            coeff = xl.ONE
            for _, c in choice:
                coeff = coeff * xl.qqi(c)
            if coeff:
                _accumulate(out, tuple(i for i, _ in choice), coeff)
        return Form(len(slots), out)

    def to_vector(self, form: Form) -> List[object]:
        out = [xl.ZERO] * self.dim(form.degree)
        for label, c in form.terms.items():
            out[self.index(label)] = c
        return out

    def from_vector(self, k: int, values: Sequence[object]) -> Form:
        labels = self.basis_labels(k)
        return Form(k, {labels[i]: v for i, v in enumerate(values) if v})

    def random_form(self, k: int, rng: np.random.Generator, density: float = 0.5) -> Form:
        """Small-integer coefficients on a random subset of the basis."""
        terms = {}
        for label in self.basis_labels(k):
            if rng.random() < density:
                terms[label] = int(rng.integers(-3, 4))
        return Form(k, terms)

    # ----- products in Ã -----

    def _tilde_times(self, i0: int, j: int) -> List[Tuple[int, object]]:
        """ã_{i0} · e_j (e_j in A)."""
        if i0 == self.unit_index:
            return [(j, xl.ONE)]
        return self.A.product_terms(i0, j)

    def _times_tilde(self, j: int, i0: int) -> List[Tuple[int, object]]:
        """e_j · ã_{i0}."""
        if i0 == self.unit_index:
            return [(j, xl.ONE)]
        return self.A.product_terms(j, i0)

    # ----- differential -----

    def d_form(self, form: Form) -> Form:
        if form.degree + 1 > self.N:
            raise DegreeOverflowError(f"d of a degree-{form.degree} form leaves the truncation N={self.N}")
        out: Dict[Label, object] = {}
        for label, c in form.terms.items():
            if label[0] != self.unit_index:
                _accumulate(out, (self.unit_index,) + label, c)
        return Form(form.degree + 1, out)

    def differential(self, k: int) -> DomainMatrix:
        """d_k : Ω^k -> Ω^{k+1} as an exact matrix."""
        if not 0 <= k < self.N:
            raise DegreeOverflowError(f"differential d_{k} is outside degrees 0..{self.N}")
        entries = {}
        for label in self.basis_labels(k):
            if label[0] != self.unit_index:
                entries[(self.index((self.unit_index,) + label), self.index(label))] = xl.ONE
        return xl.sparse(entries, (self.dim(k + 1), self.dim(k)))

    # ----- products -----

    def _product_labels(self, a: Label, b: Label) -> Dict[Label, object]:
        """(a0 da1..dap)(b0 db1..dbq) = Σ_r (-1)^{p-r} (r-th merge of a0,a1..ap,b0) db1..dbq."""
        p = len(a) - 1
        tail = b[1:]
        if b[0] == self.unit_index:
            return {a + tail: xl.ONE}
        seq = a + (b[0],)
        out: Dict[Label, object] = {}
        for r in range(p + 1):
            sign = -1 if (p - r) % 2 else 1
            merged = self._tilde_times(seq[0], seq[1]) if r == 0 else self.A.product_terms(seq[r], seq[r + 1])
            for k, c in merged:
                _accumulate(out, seq[:r] + (k,) + seq[r + 2:] + tail, sign * c)
        return out

    def _right_act(self, a: Label, b: int) -> Dict[Label, object]:
        """(ω' da_k) b = ω' d(a_k b) - (ω' a_k) db, recursively."""
        if len(a) == 1:
            return {(k,): c for k, c in self._tilde_times(a[0], b)}
        prefix, last = a[:-1], a[-1]
        out: Dict[Label, object] = {}
        for k, c in self.A.product_terms(last, b):
            _accumulate(out, prefix + (k,), c)
        for key, c in self._right_act(prefix, last).items():
            _accumulate(out, key + (b,), -c)
        return out

    def _bilinear(self, omega: Form, eta: Form, kernel) -> Form:
        if omega.degree + eta.degree > self.N:
            raise DegreeOverflowError(
                f"product of degrees {omega.degree} and {eta.degree} exceeds N={self.N}")
        out: Dict[Label, object] = {}
        for a, ca in omega.terms.items():
            for b, cb in eta.terms.items():
                for key, c in kernel(a, b).items():
                    _accumulate(out, key, ca * cb * c)
        return Form(omega.degree + eta.degree, out)

    def graded_product(self, omega: Form, eta: Form) -> Form:
        """Product by the closed formula."""
        return self._bilinear(omega, eta, self._product_labels)

    def product_by_actions(self, omega: Form, eta: Form) -> Form:
        """Product by repeated right action of b0 followed by appending db1..dbq."""
        def kernel(a: Label, b: Label) -> Dict[Label, object]:
            if b[0] == self.unit_index:
                return {a + b[1:]: xl.ONE}
            return {key + b[1:]: c for key, c in self._right_act(a, b[0]).items()}
        return self._bilinear(omega, eta, kernel)

    def left_action(self, j: int, k: int) -> DomainMatrix:
        """ω ↦ e_j ω on degree k."""
        entries = {}
        for label in self.basis_labels(k):
            for m, c in self._times_tilde(j, label[0]):
                entries[(self.index((m,) + label[1:]), self.index(label))] = c
        return xl.sparse(entries, (self.dim(k), self.dim(k)))

    def right_action(self, j: int, k: int) -> DomainMatrix:
        """ω ↦ ω e_j on degree k."""
        entries: Dict[Tuple[int, int], object] = {}
        for label in self.basis_labels(k):
            col = self.index(label)
            for key, c in self._product_labels(label, (j,)).items():
                row = self.index(key)
                entries[(row, col)] = entries.get((row, col), xl.ZERO) + c
        return xl.sparse(entries, (self.dim(k), self.dim(k)))


def universal_forms(A: FiniteAlgebra, N: int) -> UniversalForms:
    return UniversalForms(A, N)


def graded_product(U: UniversalForms, omega: Form, eta: Form) -> Form:
    return U.graded_product(omega, eta)


# ===== Derivations =====

def derivations(A: FiniteAlgebra) -> List[DomainMatrix]:
    """
    Basis of Der(A): d x d matrices X (columns = images of basis vectors)
    with X(e_i e_j) = X(e_i) e_j + e_i X(e_j).
    """
    d = A.d
    entries: Dict[Tuple[int, int], object] = defaultdict(lambda: xl.ZERO)
    for i, j in itertools.product(range(d), repeat=2):
        row_base = (i * d + j) * d
        for m, c in A.product_terms(i, j):
            for k in range(d):
                entries[(row_base + k, k * d + m)] += c
        for a in range(d):
            for k, c in A.product_terms(a, j):
                entries[(row_base + k, a * d + i)] -= c
            for k, c in A.product_terms(i, a):
                entries[(row_base + k, a * d + j)] -= c
    system = xl.sparse(dict(entries), (d ** 3, d * d))
    kernel = xl.nullspace(system)
    basis = []
    for col in range(kernel.shape[1]):
        values = xl.column(kernel, col)
        basis.append(xl.sparse({(idx // d, idx % d): v for idx, v in values.items()}, (d, d)))
    logger.info(f"{A.name}: dim Der = {len(basis)}")
    return basis


def is_derivation(A: FiniteAlgebra, X: DomainMatrix) -> bool:
    for i, j in itertools.product(range(A.d), repeat=2):
        ei, ej = A.basis_vector(i), A.basis_vector(j)
        lhs = A.apply(X, A.multiply(ei, ej))
        rhs = [x + y for x, y in zip(A.multiply(A.apply(X, ei), ej), A.multiply(ei, A.apply(X, ej)))]
        if lhs != rhs:
            return False
    return True


# ===== Cochains =====

@dataclass(eq=False)
class MultilinearFunctional:
    """φ ∈ C^n(A): coefficients[tensor_index(t)] = φ(e_t0, ..., e_tn)."""
    degree: int
    d: int
    coefficients: List[object]

    def __post_init__(self):
        self.coefficients = [xl.qqi(c) for c in self.coefficients]
        if len(self.coefficients) != self.d ** (self.degree + 1):
            raise ShapeError(f"degree-{self.degree} cochain on d={self.d} needs "
                             f"{self.d ** (self.degree + 1)} coefficients")

    @classmethod
    def from_column(cls, degree: int, d: int, matrix: DomainMatrix, col: int = 0) -> 'MultilinearFunctional':
        values = [xl.ZERO] * (d ** (degree + 1))
        for r, v in xl.column(matrix, col).items():
            values[r] = v
        return cls(degree, d, values)

    def __call__(self, *indices: int):
        return self.coefficients[tensor_index(tuple(indices), self.d)]

    def evaluate(self, *vectors: Sequence[object]):
        """Multilinear evaluation on coordinate vectors."""
        total = xl.ZERO
        for t in itertools.product(range(self.d), repeat=self.degree + 1):
            c = self(*t)
            if not c:
                continue
            for slot, i in zip(vectors, t):
                c = c * xl.qqi(slot[i])
            total += c
        return total

    def column(self) -> DomainMatrix:
        return xl.vector_to_column(self.coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearFunctional):
            return NotImplemented
        return (self.degree, self.d) == (other.degree, other.d) and self.coefficients == other.coefficients

    def __hash__(self):
        return id(self)


def _first_nonzero(matrix: DomainMatrix) -> Optional[int]:
    rows = sorted(r for (r, _c), _v in xl.items(matrix))
    return rows[0] if rows else None


def _cocycle_witness(A: FiniteAlgebra, phi: MultilinearFunctional,
                     sigma: Optional[DomainMatrix], twisted: bool) -> Optional[Tuple[str, Tuple[int, ...]]]:
    n = phi.degree
    if twisted:
        b = twisted_boundary(A, n + 1, sigma)
        lam = cyclic_operator(A, n, sigma, twisted=True)
    else:
        b = hochschild_boundary(A, n + 1)
        lam = cyclic_operator(A, n)
    column = phi.column()
    closed = xl.matmul(b.transpose(), column)
    row = _first_nonzero(closed)
    if row is not None:
        return 'b-closedness', tensor_basis(A.d, n + 2)[row]
    fixed = xl.matmul((identity_map(A, n) - lam).transpose(), column)
    row = _first_nonzero(fixed)
    if row is not None:
        return 'cyclicity', tensor_basis(A.d, n + 1)[row]
    return None


def twisted_cocycle_check(phi: MultilinearFunctional, sigma: DomainMatrix, A: FiniteAlgebra, n: int) -> bool:
    """b_σ φ = 0 and λ_σ φ = φ, exactly."""
    if phi.degree != n or phi.d != A.d:
        raise ShapeError(f"cochain of degree {phi.degree} on d={phi.d} does not match n={n}, d={A.d}")
    return _cocycle_witness(A, phi, sigma, twisted=True) is None


def cyclic_cocycles(A: FiniteAlgebra, n: int, sigma: Optional[DomainMatrix] = None,
                    twisted: bool = False) -> List[MultilinearFunctional]:
    basis = cyclic_cocycle_basis(A, n, sigma, twisted)
    return [MultilinearFunctional.from_column(n, A.d, basis, c) for c in range(basis.shape[1])]


# ===== Closed graded traces =====

def _integrate(U: UniversalForms, integral: Sequence[object], form: Form):
    total = xl.ZERO
    for label, c in form.terms.items():
        total += integral[U.index(label)] * c
    return total


def _coerce_integral(U: UniversalForms, n: int, integral: Sequence[object]) -> List[object]:
    values = [xl.qqi(v) for v in integral]
    if len(values) != U.dim(n):
        raise ShapeError(f"integral on degree {n} needs {U.dim(n)} coefficients, got {len(values)}")
    return values


def closedness_witness(U: UniversalForms, n: int, integral: Sequence[object]) -> Optional[Label]:
    """First basis label ω of degree n-1 with ∫dω ≠ 0."""
    if n == 0:
        return None
    for label in U.basis_labels(n - 1):
        if _integrate(U, integral, U.d_form(U.basis_form(label))):
            return label
    return None


def graded_trace_witness(U: UniversalForms, n: int, integral: Sequence[object]) -> Optional[Tuple[Label, Label]]:
    """First basis pair with ∫ω_p ω_q ≠ (-1)^{pq} ∫ω_q ω_p, p + q = n."""
    for p in range(n + 1):
        q = n - p
        sign = -1 if (p * q) % 2 else 1
        for a in U.basis_labels(p):
            fa = U.basis_form(a)
            for b in U.basis_labels(q):
                fb = U.basis_form(b)
                lhs = _integrate(U, integral, U.graded_product(fa, fb))
                rhs = _integrate(U, integral, U.graded_product(fb, fa))
                if lhs != sign * rhs:
                    return a, b
    return None


def twisted_trace_witness(U: UniversalForms, n: int, integral: Sequence[object],
                          sigma: DomainMatrix) -> Optional[Tuple[int, Label]]:
    """First (a, ω) with ∫σ(a)ω ≠ ∫ωa, a a basis vector of A, ω of degree n."""
    for j in range(U.d):
        sa = U.algebra_element(U.A.apply(sigma, U.A.basis_vector(j)))
        a = U.basis_form((j,))
        for label in U.basis_labels(n):
            omega = U.basis_form(label)
            if _integrate(U, integral, U.graded_product(sa, omega)) != \
                    _integrate(U, integral, U.graded_product(omega, a)):
                return j, label
    return None


def twisted_trace_check(U: UniversalForms, integral: Sequence[object], sigma: DomainMatrix, n: int) -> bool:
    return twisted_trace_witness(U, n, _coerce_integral(U, n, integral), sigma) is None


def cocycle_from_trace(U: UniversalForms, integral: Sequence[object], n: int) -> MultilinearFunctional:
    """
    φ(a0, ..., an) = ∫ a0 da1 ... dan for a closed graded trace ∫ on degree n.

    Raises:
        PreconditionError: ∫ is not closed or not a graded trace (witness attached)
        InternalError: The resulting φ is not a cyclic cocycle
    """
    if n > U.N:
        raise DegreeOverflowError(f"degree {n} exceeds the truncation N={U.N}")
    integral = _coerce_integral(U, n, integral)
    witness = closedness_witness(U, n, integral)
    if witness is not None:
        raise PreconditionError("integral is not closed", witness)
    pair = graded_trace_witness(U, n, integral)
    if pair is not None:
        raise PreconditionError("integral is not a graded trace", pair)

    coefficients = [integral[U.index(t)] for t in tensor_basis(U.d, n + 1)]
    phi = MultilinearFunctional(n, U.d, coefficients)
    failure = _cocycle_witness(U.A, phi, None, twisted=False)
    if failure is not None:
        raise InternalError(f"cochain from a closed graded trace fails {failure[0]} at {failure[1]}")
    return phi


def trace_from_cocycle(psi: MultilinearFunctional, A: FiniteAlgebra,
                       sigma: Optional[DomainMatrix] = None) -> Tuple[UniversalForms, List[object]]:
    """
    Closed graded trace on the degree-n truncation of Ω_u(A) with ∫a0 da1..dan = ψ(a0, ..., an)
    and ∫ da1..dan = 0.

    With sigma, ψ must be a twisted cyclic cocycle and ∫ satisfies ∫σ(a)ω = ∫ωa.

    Raises:
        PreconditionError: ψ is not a (twisted) cyclic cocycle (witness attached)
        InternalError: The constructed functional fails its own checks
    """
    n = psi.degree
    twisted = sigma is not None
    failure = _cocycle_witness(A, psi, sigma, twisted)
    if failure is not None:
        raise PreconditionError(f"cochain fails {failure[0]}", failure[1])
    U = UniversalForms(A, n)
    integral = [xl.ZERO] * U.dim(n)
    for t in tensor_basis(A.d, n + 1):
        integral[U.index(t)] = psi(*t)

    if closedness_witness(U, n, integral) is not None:
        raise InternalError("constructed integral is not closed")
    if twisted:
        witness = twisted_trace_witness(U, n, integral, sigma)
        if witness is not None:
            raise InternalError(f"constructed integral is not a twisted trace at {witness}")
    elif graded_trace_witness(U, n, integral) is not None:
        raise InternalError("constructed integral is not a graded trace")
    return U, integral


# ===== Finite graded calculi =====

ProductTable = Dict[Tuple[int, int], List[Tuple[int, object]]]


@dataclass(eq=False)
class GradedCalculus:
    """
    Finite graded calculus: exact differentials and products, floating Gram matrices.

    differentials[k] maps degree k to k+1; products[(p, q)][(i, j)] lists
    (k, c) with ω^p_i ω^q_j = Σ c ω^{p+q}_k.
    """
    dims: List[int]
    differentials: List[DomainMatrix]
    products: Dict[Tuple[int, int], ProductTable] = field(default_factory=dict)
    grams: Optional[List[np.ndarray]] = None
    unit: Optional[Tuple[object, ...]] = None
    name: str = 'Ω'

    def __post_init__(self):
        if not self.dims or any(k < 0 for k in self.dims):
            raise ValidationError("degree dimensions must be non-negative and non-empty")
        if len(self.differentials) != len(self.dims) - 1:
            raise ShapeError(f"need {len(self.dims) - 1} differentials, got {len(self.differentials)}")
        for k, dk in enumerate(self.differentials):
            if dk.shape != (self.dims[k + 1], self.dims[k]):
                raise ShapeError(f"d_{k} must be {self.dims[k + 1]}x{self.dims[k]}, got {dk.shape}")
        for k in range(len(self.differentials) - 1):
            if not xl.is_zero(xl.matmul(self.differentials[k + 1], self.differentials[k])):
                raise DomainError(f"{self.name}: d_{k + 1} ∘ d_{k} ≠ 0")
        if self.grams is None:
            self.grams = [np.eye(k) for k in self.dims]
        self.grams = [np.asarray(g, dtype=complex) for g in self.grams]
        for k, g in enumerate(self.grams):
            check_gram(g, self.dims[k], k)
        if self.unit is not None:
            self.unit = tuple(xl.qqi(v) for v in self.unit)

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def multiply(self, p: int, x: Sequence[object], q: int, y: Sequence[object]) -> List[object]:
        if p + q > self.N:
            raise DegreeOverflowError(f"product of degrees {p} and {q} exceeds N={self.N}")
        table = self.products.get((p, q))
        if table is None:
            raise DomainError(f"{self.name}: no product table for degrees ({p}, {q})")
        out = [xl.ZERO] * self.dims[p + q]
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in table.get((i, j), []):
                    out[k] += xi * yj * c
        return out

    def d(self, k: int, x: Sequence[object]) -> List[object]:
        return xl.column_to_vector(xl.matmul(self.differentials[k], xl.vector_to_column(x)))


def check_gram(gram: np.ndarray, dim: int, degree: int) -> None:
    """
    Raises:
        DomainError: If the Gram matrix is not Hermitian positive definite
    """
    if gram.shape != (dim, dim):
        raise ShapeError(f"Gram matrix of degree {degree} must be {dim}x{dim}, got {gram.shape}")
    if dim == 0:
        return
    if np.max(np.abs(gram - gram.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(gram))):
        raise DomainError(f"Gram matrix of degree {degree} is not Hermitian")
    smallest = np.linalg.eigvalsh(gram)[0]
    if smallest <= GRAM_MIN_EIGENVALUE:
        raise DomainError(f"Gram matrix of degree {degree} is not positive definite "
                          f"(smallest eigenvalue {smallest:.3g})")


def to_graded_calculus(U: UniversalForms, grams: Optional[List[np.ndarray]] = None) -> GradedCalculus:
    """The truncated universal calculus as a GradedCalculus (identity Grams by default)."""
    dims = [U.dim(k) for k in range(U.N + 1)]
    differentials = [U.differential(k) for k in range(U.N)]
    products: Dict[Tuple[int, int], ProductTable] = {}
    for p in range(U.N + 1):
        for q in range(U.N + 1 - p):
            table: ProductTable = {}
            for a in U.basis_labels(p):
                for b in U.basis_labels(q):
                    terms = U._product_labels(a, b)
                    if terms:
                        table[(U.index(a), U.index(b))] = [(U.index(k), c) for k, c in terms.items() if c]
            products[(p, q)] = table
    unit = tuple(xl.ONE if i == U.unit_index else xl.ZERO for i in range(U.dim(0)))
    return GradedCalculus(dims, differentials, products, grams, unit, f"Ω_u({U.A.name})")


def spanning_check(C: GradedCalculus, n: int) -> bool:
    """Ω^n = span(d(Ω^{n-1}) ∪ Ω^0 · d(Ω^{n-1}))."""
    if not 1 <= n <= C.N:
        raise DegreeOverflowError(f"spanning check needs 1 <= n <= {C.N}")
    columns = []
    for j in range(C.dims[n - 1]):
        e = [xl.ONE if i == j else xl.ZERO for i in range(C.dims[n - 1])]
        de = C.d(n - 1, e)
        columns.append(de)
        for i in range(C.dims[0]):
            a = [xl.ONE if m == i else xl.ZERO for m in range(C.dims[0])]
            columns.append(C.multiply(0, a, n, de))
    matrix = xl.sparse({(r, c): v for c, col in enumerate(columns) for r, v in enumerate(col)},
                       (C.dims[n], len(columns)))
    return xl.rank(matrix) == C.dims[n]


def canonical_map(U: UniversalForms, C: GradedCalculus, generators: DomainMatrix) -> List[DomainMatrix]:
    """
    π_k : Ω_u^k -> Ω^k determined by π(a) on A (columns of `generators`) and 1̃ ↦ unit:
    π(a0 da1 .. dak) = π(a0) dπ(a1) ... dπ(ak).
    """
    if C.unit is None:
        raise DomainError(f"{C.name} has no unit; the canonical map needs one")
    if generators.shape != (C.dims[0], U.d):
        raise ShapeError(f"generator images must be {C.dims[0]}x{U.d}, got {generators.shape}")
    images = [xl.column_to_vector(xl.matmul(generators, xl.vector_to_column(U.A.basis_vector(j))))
              for j in range(U.d)]
    degree0 = images + [list(C.unit)]
    d_images = [C.d(0, v) for v in images]

    maps = []
    current: Dict[Label, List[object]] = {(i,): degree0[i] for i in range(U.d + 1)}
    for k in range(min(U.N, C.N) + 1):
        if k > 0:
            current = {label + (j,): C.multiply(k - 1, vec, 1, d_images[j])
                       for label, vec in current.items() for j in range(U.d)}
        entries = {(r, U.index(label)): v for label, vec in current.items() for r, v in enumerate(vec) if v}
        maps.append(xl.sparse(entries, (C.dims[k], U.dim(k))))
    return maps


def universal_property_check(U: UniversalForms, C: GradedCalculus,
                             generators: DomainMatrix) -> Optional[Tuple[int, Label]]:
    """
    π ∘ d_u = d ∘ π on every basis element; returns the first failing (degree, label).
    """
    maps = canonical_map(U, C, generators)
    for k in range(len(maps) - 1):
        lhs = xl.matmul(maps[k + 1], U.differential(k))
        rhs = xl.matmul(C.differentials[k], maps[k])
        diff = (lhs.to_sparse() - rhs.to_sparse())
        cols = sorted(c for (_r, c), _v in xl.items(diff))
        if cols:
            return k, U.basis_labels(k)[cols[0]]
    return None


# ===== Hodge decomposition =====

@dataclass
class HodgeDegree:
    degree: int
    dim: int
    harmonic: np.ndarray = field(repr=False)
    exact: np.ndarray = field(repr=False)
    coexact: np.ndarray = field(repr=False)
    cohomology_dim: int = 0
    laplacian_eigenvalues: np.ndarray = field(default=None, repr=False)
    orthogonality_residual: float = 0.0

    @property
    def harmonic_dim(self) -> int:
        return self.harmonic.shape[1]

    @property
    def exact_dim(self) -> int:
        return self.exact.shape[1]

    @property
    def coexact_dim(self) -> int:
        return self.coexact.shape[1]

    @property
    def additive(self) -> bool:
        return self.harmonic_dim + self.exact_dim + self.coexact_dim == self.dim


@dataclass
class HodgeReport:
    """Ω^k = ker ∇ ⊕ d(Ω^{k-1}) ⊕ d*(Ω^{k+1}) per degree; bases in the original coordinates."""
    name: str
    degrees: List[HodgeDegree]
    grams: List[np.ndarray] = field(repr=False)
    dirac_eigenvalues: np.ndarray = field(repr=False)
    laplacian_eigenvalues: np.ndarray = field(repr=False)
    codifferential: np.ndarray = field(repr=False)
    offsets: List[int] = field(repr=False)

    @property
    def orthogonal(self) -> bool:
        return all(h.orthogonality_residual < HODGE_ORTHOGONALITY_TOL for h in self.degrees)

    @property
    def additive(self) -> bool:
        return all(h.additive for h in self.degrees)

    @property
    def harmonic_dimensions(self) -> List[int]:
        return [h.harmonic_dim for h in self.degrees]

    @property
    def cohomology_dimensions(self) -> List[int]:
        return [h.cohomology_dim for h in self.degrees]

    def projector(self, k: int, kind: str) -> np.ndarray:
        """Gram-orthogonal projector onto one summand of degree k (kind: harmonic, exact, coexact)."""
        basis = getattr(self.degrees[k], kind)
        G = self.grams[k]
        if basis.shape[1] == 0:
            return np.zeros((self.degrees[k].dim,) * 2, dtype=complex)
        return basis @ basis.conj().T @ G


def _orthonormal_factor(gram: np.ndarray) -> np.ndarray:
    """L with G = L L^H."""
    try:
        return np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        raise DomainError("Gram matrix is not positive definite")


def _top_columns(matrix: np.ndarray, count: int) -> np.ndarray:
    if count == 0 or matrix.size == 0:
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    u, _s, _vh = np.linalg.svd(matrix)
    return u[:, :count]


def hodge(C: GradedCalculus, harmonic_rtol: float = HARMONIC_RTOL) -> HodgeReport:
    """
    d* as the Gram-adjoint of d, D = d + d*, ∇ = D², and the three summands of every degree.

    Computed in Gram-orthonormal coordinates x̃ = L^H x, where d* is the
    conjugate transpose; ranks of d come from the exact matrices.
    """
    N = C.N
    factors = [_orthonormal_factor(g) if g.size else np.zeros((0, 0)) for g in C.grams]

    def to_ortho(k: int) -> np.ndarray:
        # B_k: orthonormal matrix of d_{k-1}: Ω^{k-1} -> Ω^k
        dk = xl.to_numpy(C.differentials[k - 1])
        left = factors[k].conj().T @ dk
        return np.linalg.solve(factors[k - 1].conj(), left.T).T if C.dims[k - 1] else left

    B = {k: to_ortho(k) for k in range(1, N + 1)}
    ranks = {k: xl.rank(C.differentials[k - 1]) for k in range(1, N + 1)}

    def degree_report(k: int) -> HodgeDegree:
        dim = C.dims[k]
        lap = np.zeros((dim, dim), dtype=complex)
        if k >= 1:
            lap += B[k] @ B[k].conj().T
        if k < N:
            lap += B[k + 1].conj().T @ B[k + 1]
        evals, evecs = np.linalg.eigh(lap) if dim else (np.zeros(0), np.zeros((0, 0)))
        threshold = harmonic_rtol * max(1.0, float(np.max(np.abs(evals), initial=0.0)))
        harmonic = evecs[:, np.abs(evals) < threshold]
        exact = _top_columns(B[k], ranks[k]) if k >= 1 else np.zeros((dim, 0), dtype=complex)
        coexact = _top_columns(B[k + 1].conj().T, ranks[k + 1]) if k < N else np.zeros((dim, 0), dtype=complex)

        residual = 0.0
        for X, Y in ((harmonic, exact), (harmonic, coexact), (exact, coexact)):
            if X.shape[1] and Y.shape[1]:
                residual = max(residual, float(np.max(np.abs(X.conj().T @ Y))))
        kernel = dim - (ranks[k + 1] if k < N else 0)
        cohomology = kernel - (ranks[k] if k >= 1 else 0)

        back = (lambda V: np.linalg.solve(factors[k].conj().T, V)) if dim else (lambda V: V)
        report = HodgeDegree(k, dim, back(harmonic), back(exact), back(coexact), cohomology, evals, residual)
        if not report.additive:
            logger.warning(f"degree {k}: summand dimensions {report.harmonic_dim}+{report.exact_dim}"
                           f"+{report.coexact_dim} != {dim}")
        return report

    degrees = parallel_map(degree_report, range(N + 1))

    offsets = [0]
    for dim in C.dims:
        offsets.append(offsets[-1] + dim)
    total = offsets[-1]
    D = np.zeros((total, total), dtype=complex)
    for k in range(1, N + 1):
        rows = slice(offsets[k], offsets[k + 1])
        cols = slice(offsets[k - 1], offsets[k])
        D[rows, cols] = B[k]
        D[cols, rows] = B[k].conj().T
    dirac = np.linalg.eigvalsh(D) if total else np.zeros(0)

    codifferential = np.zeros((total, total), dtype=complex)
    for k in range(1, N + 1):
        # d*_k = G_{k-1}^{-1} d_{k-1}^H G_k in the original coordinates
        dk = xl.to_numpy(C.differentials[k - 1])
        block = np.linalg.solve(C.grams[k - 1], dk.conj().T @ C.grams[k]) if C.dims[k - 1] else \
            np.zeros((0, C.dims[k]))
        codifferential[offsets[k - 1]:offsets[k], offsets[k]:offsets[k + 1]] = block

    report = HodgeReport(C.name, degrees, C.grams, dirac, np.sort(dirac ** 2), codifferential, offsets)
    logger.info(f"{C.name}: harmonic dims {report.harmonic_dimensions}, "
                f"cohomology dims {report.cohomology_dimensions}")
    return report
