"""
Exception hierarchy for ncg_workbench.

Two families map onto CLI exit codes: ValidationError (bad input, exit 2)
and PropertyCheckError (a mathematical check failed, exit 3).
"""

from typing import Optional, Tuple, Any


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""
    pass


# ===== Validation family (exit code 2) =====

class ValidationError(WorkbenchError):
    """Input rejected before any computation."""
    pass


class InvalidDimensionError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class DomainError(ValidationError):
    """Argument outside the domain of an operation (non-Hermitian, not PD, ...)."""
    pass


class SizeLimitError(ValidationError):
    pass


class MissingAutomorphismError(ValidationError):
    pass


class DegreeOverflowError(ValidationError):
    pass


class UnsupportedError(ValidationError):
    pass


class UnknownGeneratorError(ValidationError):
    pass


class InputFormatError(ValidationError):
    """Malformed input file; the message carries line and column."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.column = column
        self.source = source
        where = source or '<input>'
        if line is not None:
            where = f"{where}:{line}:{column if column is not None else 0}"
        super().__init__(f"{where}: {message}")


class ParseError(ValidationError):
    """Syntax error in a polynomial expression, with the 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ''):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ''
        super().__init__(f"{message} (position {position}){pointer}")


# ===== Property-check family (exit code 3) =====

class PropertyCheckError(WorkbenchError):
    """A verified identity did not hold."""
    pass


class PreconditionError(PropertyCheckError):
    """A checked precondition failed; `witness` names the violating element."""

    def __init__(self, message: str, witness: Optional[Tuple[Any, ...]] = None):
        self.witness = witness
        suffix = f" (witness: {witness})" if witness is not None else ''
        super().__init__(f"{message}{suffix}")


class CliffordRelationError(PropertyCheckError):
    """Generators fail c(e_i)c(e_j) + c(e_j)c(e_i) = -2 delta_ij."""

    def __init__(self, pair: Tuple[int, int]):
        self.pair = pair
        i, j = pair
        super().__init__(f"Clifford relation violated for generator pair ({i}, {j})")


class NonTerminationError(PropertyCheckError):
    pass


class InternalError(PropertyCheckError):
    pass
