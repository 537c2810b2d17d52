"""
NCG Workbench - finite and fuzzy noncommutative geometry, computed.

Example usage:
    from ncg_workbench import spin_rep, gamma, homology_dims, complex_numbers

    rep = spin_rep(2)
    print(gamma(rep))                                  # ≈ 3π/8

    print(homology_dims(complex_numbers(), 4))         # [1, 0, 0, 0, 0]
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .config import Config, ConfigError
from .errors import (
    WorkbenchError, ValidationError, PropertyCheckError, InputFormatError, ParseError,
)
from .logger import get_logger, setup_logger
from .su2_reps import SpinRep, spin_rep, sphere_quadrature
from .fuzzy_berezin import (
    FuzzySphere, SampledFunction, fuzzy_sphere, covariant_symbol, contravariant_symbol,
    berezin_transform,
)
from .qmetric import State, lip_norm, state_metric, gamma, berezin_defect, gh_upper_bound
from .homology import FiniteAlgebra, complex_numbers, diagonal_algebra, matrix_algebra, homology_dims
from .calculus import UniversalForms, GradedCalculus, universal_forms, graded_product, hodge, derivations
from .clifford import CliffordAlgebra, clifford, spin_representation, dirac_square
from .ncpoly import Alphabet, NCPoly, parse
from .hopf_rewrite import Presentation, preset, hopf_axiom_check, q1_commutativity_check
from .algebra_io import load_algebra, load_calculus, load_presentation

__all__ = [
    # Core
    'Config',
    'ConfigError',
    'WorkbenchError',
    'ValidationError',
    'PropertyCheckError',
    'InputFormatError',
    'ParseError',
    'get_logger',
    'setup_logger',
    # Fuzzy spheres and metrics
    'SpinRep',
    'spin_rep',
    'sphere_quadrature',
    'FuzzySphere',
    'SampledFunction',
    'fuzzy_sphere',
    'covariant_symbol',
    'contravariant_symbol',
    'berezin_transform',
    'State',
    'lip_norm',
    'state_metric',
    'gamma',
    'berezin_defect',
    'gh_upper_bound',
    # Homology and calculus
    'FiniteAlgebra',
    'complex_numbers',
    'diagonal_algebra',
    'matrix_algebra',
    'homology_dims',
    'UniversalForms',
    'GradedCalculus',
    'universal_forms',
    'graded_product',
    'hodge',
    'derivations',
    # Clifford and Hopf
    'CliffordAlgebra',
    'clifford',
    'spin_representation',
    'dirac_square',
    'Alphabet',
    'NCPoly',
    'parse',
    'Presentation',
    'preset',
    'hopf_axiom_check',
    'q1_commutativity_check',
    # Inputs
    'load_algebra',
    'load_calculus',
    'load_presentation',
]
