"""
Exact linear algebra over the Gaussian rationals Q(i).

Thin layer over sympy's DomainMatrix (sparse SDM format throughout, since
mixing dense and sparse formats is rejected by sympy arithmetic) plus the
shared scalar grammar used by every input file.
"""

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .logger import get_logger

logger = get_logger('exact_linalg')

Scalar = type(QQ_I.one)
Entries = Dict[Tuple[int, int], object]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)


# ===== Scalars =====

def qqi(value, imag=0):
    """Coerce ints, Fractions, QQ elements, scalar strings (or an existing Q(i) element) into Q(i)."""
    if isinstance(value, Scalar) and not imag:
        return value
    if isinstance(value, str) and not imag:
        return parse_scalar(value)
    return QQ_I(_qq(value), _qq(imag))


def _qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        value = Fraction(value)
        return QQ(value.numerator, value.denominator)
    return QQ.convert(value)


def conj(value):
    """Complex conjugate of a Q(i) element."""
    return value.new(value.x, -value.y)


def to_complex(value) -> complex:
    return complex(float(value.x), float(value.y))


def to_fraction_pair(value) -> Tuple[Fraction, Fraction]:
    x, y = value.x, value.y
    return (Fraction(int(x.numerator), int(x.denominator)),
            Fraction(int(y.numerator), int(y.denominator)))


_RATIONAL = re.compile(r'^[+-]?\d+(?:/\d+|\.\d*)?$')


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}")


def parse_scalar(text) -> object:
    """
    Parse the shared scalar grammar into an exact Q(i) element.

    Accepted forms: `3`, `-1/2`, `0.25`, `2i`, `-i`, `1/2+3/4i`, `1-i`.

    Raises:
        ValueError: On anything else
    """
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return qqi(text)
    raw = str(text).replace(' ', '')
    if not raw:
        raise ValueError("empty scalar")

    if not raw.endswith('i'):
        return qqi(_parse_rational(raw))

    body = raw[:-1]
    split = max(body.rfind('+'), body.rfind('-'))
    if split > 0:
        real_text, imag_text = body[:split], body[split:]
    else:
        real_text, imag_text = '0', body

    if imag_text in ('', '+'):
        imag = Fraction(1)
    elif imag_text == '-':
        imag = Fraction(-1)
    else:
        imag = _parse_rational(imag_text)
    return qqi(_parse_rational(real_text), imag)


def format_scalar(value) -> str:
    """Inverse of parse_scalar (canonical text)."""
    re_part, im_part = to_fraction_pair(value)
    if im_part == 0:
        return str(re_part)
    imag = '' if abs(im_part) == 1 else str(abs(im_part))
    if re_part == 0:
        return f"{'-' if im_part < 0 else ''}{imag}i"
    sign = '-' if im_part < 0 else '+'
    return f"{re_part}{sign}{imag}i"


# ===== Matrices =====

def sparse(entries: Entries, shape: Tuple[int, int]) -> DomainMatrix:
    """Sparse exact matrix from {(row, col): value}; zero entries are dropped."""
    rows: Dict[int, Dict[int, object]] = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = qqi(v)
    return DomainMatrix(rows, shape, QQ_I)


def zeros(nrows: int, ncols: int) -> DomainMatrix:
    return DomainMatrix({}, (nrows, ncols), QQ_I)


def identity(n: int) -> DomainMatrix:
    return DomainMatrix({i: {i: ONE} for i in range(n)}, (n, n), QQ_I)


def from_rows(rows: Sequence[Sequence[object]]) -> DomainMatrix:
    """Exact matrix from nested lists of scalars (ints, Fractions or Q(i))."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    return sparse({(r, c): qqi(v) for r, row in enumerate(rows) for c, v in enumerate(row)}, (nrows, ncols))


def items(matrix: DomainMatrix) -> Iterable[Tuple[Tuple[int, int], object]]:
    return matrix.to_sparse().to_dok().items()


def entry(matrix: DomainMatrix, row: int, col: int):
    return matrix.to_sparse().rep.get(row, {}).get(col, ZERO)


def column(matrix: DomainMatrix, col: int) -> Dict[int, object]:
    rep = matrix.to_sparse().rep
    return {r: row[col] for r, row in rep.items() if col in row}


def is_zero(matrix: DomainMatrix) -> bool:
    return not matrix.to_sparse().rep or matrix.is_zero_matrix


def equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    return a.shape == b.shape and is_zero(a.to_sparse() - b.to_sparse())


def rank(matrix: DomainMatrix) -> int:
    nrows, ncols = matrix.shape
    if nrows == 0 or ncols == 0 or not matrix.to_sparse().rep:
        return 0
    return matrix.to_sparse().rank()


def nullspace(matrix: DomainMatrix) -> DomainMatrix:
    """Kernel basis as the COLUMNS of the returned matrix (shape ncols × k)."""
    nrows, ncols = matrix.shape
    if ncols == 0:
        return zeros(0, 0)
    if nrows == 0 or not matrix.to_sparse().rep:
        return identity(ncols)
    basis = matrix.to_sparse().nullspace()
    if basis.shape[0] == 0:
        return zeros(ncols, 0)
    return basis.to_sparse().transpose()


def hstack(mats: Sequence[DomainMatrix]) -> DomainMatrix:
    """Concatenate column blocks (allows zero-width blocks)."""
    nrows = mats[0].shape[0]
    entries: Entries = {}
    offset = 0
    for m in mats:
        if m.shape[0] != nrows:
            raise ValueError("row counts differ in hstack")
        for (r, c), v in items(m):
            entries[(r, c + offset)] = v
        offset += m.shape[1]
    return sparse(entries, (nrows, offset))


def vstack(mats: Sequence[DomainMatrix]) -> DomainMatrix:
    """Concatenate row blocks (allows zero-height blocks)."""
    ncols = mats[0].shape[1]
    entries: Entries = {}
    offset = 0
    for m in mats:
        if m.shape[1] != ncols:
            raise ValueError("column counts differ in vstack")
        for (r, c), v in items(m):
            entries[(r + offset, c)] = v
        offset += m.shape[0]
    return sparse(entries, (offset, ncols))


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1])
    return a.to_sparse().matmul(b.to_sparse())


def transpose(matrix: DomainMatrix) -> DomainMatrix:
    return matrix.to_sparse().transpose()


def adjoint(matrix: DomainMatrix) -> DomainMatrix:
    nrows, ncols = matrix.shape
    return sparse({(c, r): conj(v) for (r, c), v in items(matrix)}, (ncols, nrows))


def power(matrix: DomainMatrix, k: int) -> DomainMatrix:
    result = identity(matrix.shape[0])
    for _ in range(k):
        result = matmul(result, matrix)
    return result


def to_numpy(matrix: DomainMatrix) -> np.ndarray:
    out = np.zeros(matrix.shape, dtype=complex)
    for (r, c), v in items(matrix):
        out[r, c] = to_complex(v)
    return out


def to_rows(matrix: DomainMatrix) -> List[List[object]]:
    nrows, ncols = matrix.shape
    rows = [[ZERO] * ncols for _ in range(nrows)]
    for (r, c), v in items(matrix):
        rows[r][c] = v
    return rows


def vector_to_column(values: Sequence[object]) -> DomainMatrix:
    return sparse({(i, 0): v for i, v in enumerate(values)}, (len(values), 1))


def column_to_vector(matrix: DomainMatrix) -> List[object]:
    values = [ZERO] * matrix.shape[0]
    for (r, _c), v in items(matrix):
        values[r] = v
    return values


def inverse(matrix: DomainMatrix) -> DomainMatrix:
    return matrix.to_dense().inv().to_sparse()


def kron(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    """Kronecker product a ⊗ b."""
    (ar, ac), (br, bc) = a.shape, b.shape
    b_items = list(items(b))
    entries: Entries = {}
    for (i, j), x in items(a):
        for (k, l), y in b_items:
            entries[(i * br + k, j * bc + l)] = x * y
    return sparse(entries, (ar * br, ac * bc))


def exact_matrix(values) -> DomainMatrix:
    """
    Exact copy of a DomainMatrix, numpy array or nested list.

    Floating entries are converted through Fraction, so binary fractions
    such as 0.5 stay exact.
    """
    if isinstance(values, DomainMatrix):
        return values.convert_to(QQ_I).to_sparse()
    arr = np.asarray(values)
    if arr.dtype == object:
        return from_rows([[qqi(v) for v in row] for row in arr])
    arr = arr.astype(complex)
    return from_rows([[qqi(Fraction(float(v.real)), Fraction(float(v.imag))) for v in row] for row in arr])
