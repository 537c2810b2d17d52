"""
Loaders for the structured input files: algebras and graded calculi (YAML),
and rewriting presentations (plain text).

Scalars are read from the YAML node graph as raw text and parsed with the
exact scalar grammar, so `1/3` or `0.1` never pass through a float. Every
error names the file, line and column of the offending node.
"""

from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np
import yaml
from sympy.polys.matrices import DomainMatrix

from . import exact_linalg as xl
from .calculus import GradedCalculus
from .errors import InputFormatError, ValidationError
from .hopf_rewrite import Presentation
from .homology import FiniteAlgebra
from .logger import get_logger

logger = get_logger('algebra_io')


# ===== YAML node helpers =====

class _Reader:
    """Typed access to a composed YAML node graph, raising positioned errors."""

    def __init__(self, text: str, source: str):
        self.source = source
        try:
            self.root = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            line = mark.line + 1 if mark else None
            column = mark.column + 1 if mark else None
            raise InputFormatError(f"YAML syntax error: {e.problem or e}", line, column, source)
        if self.root is None:
            raise InputFormatError("empty document", 1, 1, source)

    def error(self, node: yaml.Node, message: str) -> InputFormatError:
        return InputFormatError(message, node.start_mark.line + 1, node.start_mark.column + 1, self.source)

    def mapping(self, node: yaml.Node) -> Dict[str, yaml.Node]:
        if not isinstance(node, yaml.MappingNode):
            raise self.error(node, "expected a mapping")
        out: Dict[str, yaml.Node] = {}
        for key, value in node.value:
            name = self.text(key)
            if name in out:
                raise self.error(key, f"duplicate key {name!r}")
            out[name] = value
        return out

    def sequence(self, node: yaml.Node) -> List[yaml.Node]:
        if not isinstance(node, yaml.SequenceNode):
            raise self.error(node, "expected a list")
        return list(node.value)

    def text(self, node: yaml.Node) -> str:
        if not isinstance(node, yaml.ScalarNode):
            raise self.error(node, "expected a scalar")
        return node.value

    def integer(self, node: yaml.Node, low: Optional[int] = None, high: Optional[int] = None) -> int:
        raw = self.text(node)
        try:
            value = int(raw)
        except ValueError:
            raise self.error(node, f"expected an integer, got {raw!r}")
        if (low is not None and value < low) or (high is not None and value > high):
            bounds = f"[{low if low is not None else '-inf'}, {high if high is not None else 'inf'}]"
            raise self.error(node, f"{value} is outside {bounds}")
        return value

    def scalar(self, node: yaml.Node):
        raw = self.text(node)
        try:
            return xl.parse_scalar(raw)
        except ValueError as e:
            raise self.error(node, f"bad scalar {raw!r}: {e}")

    def vector(self, node: yaml.Node, length: int) -> List[object]:
        items = self.sequence(node)
        if len(items) != length:
            raise self.error(node, f"expected {length} entries, got {len(items)}")
        return [self.scalar(item) for item in items]

    def matrix(self, node: yaml.Node, rows: int, cols: int) -> DomainMatrix:
        row_nodes = self.sequence(node)
        if len(row_nodes) != rows:
            raise self.error(node, f"expected {rows} rows, got {len(row_nodes)}")
        return xl.from_rows([self.vector(row, cols) for row in row_nodes]) if rows else xl.zeros(0, cols)

    def required(self, fields: Dict[str, yaml.Node], key: str, parent: yaml.Node) -> yaml.Node:
        if key not in fields:
            raise self.error(parent, f"missing field {key!r}")
        return fields[key]

    def reject_unknown(self, fields: Dict[str, yaml.Node], allowed: Tuple[str, ...], parent: yaml.Node):
        for key in fields:
            if key not in allowed:
                raise self.error(parent, f"unknown field {key!r}; allowed: {', '.join(allowed)}")


def _read(path: str) -> str:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise InputFormatError(f"cannot read file: {e.strerror}", source=path)


# ===== Algebras =====

ALGEBRA_FIELDS = ('name', 'dimension', 'unit', 'structure', 'automorphism', 'involution')


def parse_algebra(text: str, source: str = '<algebra>', validate: bool = True) -> FiniteAlgebra:
    """
    Build a FiniteAlgebra from an algebra document.

    Raises:
        InputFormatError: On malformed input or when the algebra axioms fail
    """
    reader = _Reader(text, source)
    root = reader.root
    fields = reader.mapping(root)
    reader.reject_unknown(fields, ALGEBRA_FIELDS, root)

    d = reader.integer(reader.required(fields, 'dimension', root), low=1)
    name = reader.text(fields['name']) if 'name' in fields else source
    unit = reader.vector(reader.required(fields, 'unit', root), d)

    structure: Dict[Tuple[int, int, int], object] = {}
    for entry in reader.sequence(reader.required(fields, 'structure', root)):
        items = reader.sequence(entry)
        if len(items) != 5:
            raise reader.error(entry, "structure entries are [i, j, k, re, im]")
        i, j, k = (reader.integer(item, 0, d - 1) for item in items[:3])
        value = reader.scalar(items[3]) + reader.scalar(items[4]) * xl.I_UNIT
        if (i, j, k) in structure:
            raise reader.error(entry, f"duplicate structure constant ({i}, {j}, {k})")
        structure[(i, j, k)] = value

    automorphism = reader.matrix(fields['automorphism'], d, d) if 'automorphism' in fields else None
    involution = reader.matrix(fields['involution'], d, d) if 'involution' in fields else None

    try:
        algebra = FiniteAlgebra(d, structure, tuple(unit), automorphism, involution, name)
        if validate:
            algebra.validate()
    except ValidationError as e:
        raise reader.error(root, str(e))
    logger.info(f"Loaded algebra {name} (d={d}, {len(structure)} structure constants) from {source}")
    return algebra


def load_algebra(path: str, validate: bool = True) -> FiniteAlgebra:
    return parse_algebra(_read(path), source=path, validate=validate)


# ===== Graded calculi =====

CALCULUS_FIELDS = ('name', 'dimensions', 'differentials', 'products', 'grams', 'unit')


def parse_calculus(text: str, source: str = '<calculus>') -> GradedCalculus:
    """
    Build a GradedCalculus from a calculus document.

    Products are `[p, i, q, j, k, coefficient]`: ω^p_i ω^q_j has the given
    coefficient on ω^{p+q}_k. Gram matrices default to the identity.

    Raises:
        InputFormatError: On malformed input, d∘d ≠ 0 or a non positive definite Gram matrix
    """
    reader = _Reader(text, source)
    root = reader.root
    fields = reader.mapping(root)
    reader.reject_unknown(fields, CALCULUS_FIELDS, root)

    name = reader.text(fields['name']) if 'name' in fields else source
    dims_node = reader.required(fields, 'dimensions', root)
    dims = [reader.integer(item, low=0) for item in reader.sequence(dims_node)]
    if not dims:
        raise reader.error(dims_node, "at least degree 0 is required")
    N = len(dims) - 1

    diff_node = reader.required(fields, 'differentials', root)
    diff_nodes = reader.sequence(diff_node)
    if len(diff_nodes) != N:
        raise reader.error(diff_node, f"expected {N} differentials (degree k -> k+1), got {len(diff_nodes)}")
    differentials = [reader.matrix(node, dims[k + 1], dims[k]) for k, node in enumerate(diff_nodes)]

    products: Dict[Tuple[int, int], Dict[Tuple[int, int], List[Tuple[int, object]]]] = defaultdict(lambda: defaultdict(list))
    for entry in reader.sequence(fields['products']) if 'products' in fields else []:
        items = reader.sequence(entry)
        if len(items) != 6:
            raise reader.error(entry, "product entries are [p, i, q, j, k, coefficient]")
        p = reader.integer(items[0], 0, N)
        q = reader.integer(items[2], 0, N - p)
        i = reader.integer(items[1], 0, dims[p] - 1)
        j = reader.integer(items[3], 0, dims[q] - 1)
        k = reader.integer(items[4], 0, dims[p + q] - 1)
        products[(p, q)][(i, j)].append((k, reader.scalar(items[5])))
    products = {key: dict(table) for key, table in products.items()}

    grams = None
    if 'grams' in fields:
        gram_node = fields['grams']
        gram_nodes = reader.sequence(gram_node)
        if len(gram_nodes) != len(dims):
            raise reader.error(gram_node, f"expected {len(dims)} Gram matrices, got {len(gram_nodes)}")
        grams = [np.array([[xl.to_complex(v) for v in row] for row in xl.to_rows(reader.matrix(node, n, n))],
                          dtype=complex).reshape(n, n)
                 for node, n in zip(gram_nodes, dims)]

    unit = tuple(reader.vector(fields['unit'], dims[0])) if 'unit' in fields else None

    try:
        calculus = GradedCalculus(dims, differentials, products, grams, unit, name)
    except ValidationError as e:
        raise reader.error(root, str(e))
    logger.info(f"Loaded calculus {name} (dims {dims}) from {source}")
    return calculus


def load_calculus(path: str) -> GradedCalculus:
    return parse_calculus(_read(path), source=path)


# ===== Presentations =====

def load_presentation(path: str) -> Presentation:
    return Presentation.from_text(_read(path), source=path)
