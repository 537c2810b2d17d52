"""
Fuzzy sphere algebras and the Berezin covariant/contravariant transforms.

Functions on S² are carried as SampledFunction values on quadrature nodes;
every transform is a weighted sum over the node measure.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .constants import DEFAULT_LEVEL_FLOOR
from .errors import DomainError, ShapeError
from .logger import get_logger
from .su2_reps import (
    SpinRep, SphereQuadrature, coherent_states, highest_weight, sphere_quadrature, spin_rep,
)
from .utils import weighted_sum

logger = get_logger('berezin')


@dataclass(frozen=True, eq=False)
class FuzzySphere:
    """x̂_i = J_i / sqrt(n² - 1); all zero for n = 1."""
    rep: SpinRep
    x1: np.ndarray = field(repr=False)
    x2: np.ndarray = field(repr=False)
    x3: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def coordinates(self):
        return (self.x1, self.x2, self.x3)

    def radius_error(self) -> float:
        """‖Σ x̂_i² - 1‖ (operator norm)."""
        total = sum(x @ x for x in self.coordinates)
        return float(np.linalg.norm(total - np.eye(self.n), 2))

    def commutator_error(self) -> float:
        """max over cyclic (i, j, k) of ‖[x̂_i, x̂_j] - (2i/sqrt(n²-1)) x̂_k‖."""
        if self.n == 1:
            return 0.0
        c = 2j / np.sqrt(self.n ** 2 - 1)
        x = self.coordinates
        worst = 0.0
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            residual = x[i] @ x[j] - x[j] @ x[i] - c * x[k]
            worst = max(worst, float(np.linalg.norm(residual, 2)))
        return worst


def fuzzy_sphere(n: int) -> FuzzySphere:
    rep = spin_rep(n)
    if n == 1:
        zero = np.zeros((1, 1), dtype=complex)
        return FuzzySphere(rep, zero, zero.copy(), zero.copy())
    scale = 1.0 / np.sqrt(n ** 2 - 1)
    return FuzzySphere(rep, rep.J1 * scale, rep.J2 * scale, rep.J3 * scale)


def default_level(n: int, floor: int = DEFAULT_LEVEL_FLOOR) -> int:
    """max(floor, n): Gauss-Legendre level n integrates the degree 2(n-1) integrands exactly."""
    return max(floor, n)


@dataclass(eq=False)
class SampledFunction:
    """Function on S² by its values at the nodes of a quadrature."""
    quadrature: SphereQuadrature
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.quadrature.size,):
            raise ShapeError(f"expected {self.quadrature.size} values, got shape {self.values.shape}")

    @classmethod
    def from_callable(cls, quad: SphereQuadrature, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> 'SampledFunction':
        """Sample f(θ, φ) (vectorized) on the nodes."""
        values = np.broadcast_to(np.asarray(f(quad.theta, quad.phi)), (quad.size,)).copy()
        return cls(quad, values)

    @classmethod
    def constant(cls, quad: SphereQuadrature, value: complex = 1.0) -> 'SampledFunction':
        return cls(quad, np.full(quad.size, value))

    def _check(self, other: 'SampledFunction'):
        if other.quadrature is not self.quadrature and other.quadrature.size != self.quadrature.size:
            raise ShapeError("sampled functions live on different quadratures")

    def __add__(self, other: 'SampledFunction') -> 'SampledFunction':
        self._check(other)
        return SampledFunction(self.quadrature, self.values + other.values)

    def __sub__(self, other: 'SampledFunction') -> 'SampledFunction':
        self._check(other)
        return SampledFunction(self.quadrature, self.values - other.values)

    def __mul__(self, scalar) -> 'SampledFunction':
        return SampledFunction(self.quadrature, self.values * scalar)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def integral(self) -> complex:
        return self.quadrature.integrate(self.values)

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(np.imag(self.values))) <= tol)


def sample_coordinate(quad: SphereQuadrature, i: int) -> SampledFunction:
    """The restriction of the coordinate function x_i (i = 1, 2, 3) to S²."""
    return SampledFunction(quad, quad.points()[:, i - 1])


def _states(rep: SpinRep, quad: SphereQuadrature, phi_offset: float = 0.0) -> np.ndarray:
    return coherent_states(rep, quad.theta, quad.phi + phi_offset)


def covariant_symbol(T: np.ndarray, quad: SphereQuadrature, rep: Optional[SpinRep] = None,
                     phi_offset: float = 0.0) -> SampledFunction:
    """
    σ_T(p) = trace(T U_s(p) P U_s(p)*) = <ψ_p, T ψ_p> at every node.

    phi_offset rotates the section (used to check section independence).
    """
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {T.shape}")
    rep = rep or spin_rep(T.shape[0])
    if T.shape[0] != rep.n:
        raise ShapeError(f"matrix is {T.shape[0]}x{T.shape[0]} but the representation has n={rep.n}")
    psi = _states(rep, quad, phi_offset)
    values = np.einsum('ka,ab,kb->k', psi.conj(), T, psi)
    return SampledFunction(quad, values)


def contravariant_symbol(f: SampledFunction, rep: SpinRep) -> np.ndarray:
    """
    σ̆_f = n Σ_k w_k f(p_k) |ψ_k><ψ_k|.

    Raises:
        DomainError: If the quadrature level is below n
    """
    quad = f.quadrature
    if quad.level < rep.n:
        raise DomainError(f"contravariant symbol on n={rep.n} needs quadrature level >= {rep.n}, got {quad.level}")
    psi = _states(rep, quad)
    weighted = (quad.weights * f.values)[:, None] * psi
    return rep.n * np.einsum('ka,kb->ab', weighted, psi.conj())


def berezin_kernel(rep: SpinRep, theta) -> np.ndarray:
    """k_P(θ) = n |<U_s(θ,0) ξ, ξ>|² (scalar or array)."""
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    xi, _ = highest_weight(rep)
    psi = coherent_states(rep, theta_arr, np.zeros_like(theta_arr))
    values = rep.n * np.abs(psi.conj() @ xi) ** 2
    return values if np.ndim(theta) else float(values[0])


def closed_form_kernel(n: int, theta) -> np.ndarray:
    """n cos^{2(n-1)}(θ/2)"""
    return n * np.cos(np.asarray(theta) / 2.0) ** (2 * (n - 1))


def berezin_transform(f: SampledFunction, rep: SpinRep) -> SampledFunction:
    """σ(σ̆_f) by composing the two transforms."""
    return covariant_symbol(contravariant_symbol(f, rep), f.quadrature, rep)


def kernel_convolution(f: SampledFunction, rep: SpinRep) -> SampledFunction:
    """
    ∫ f(p) k_P(angle(p, h)) dμ(p) at every node h, computed directly from the kernel.

    Independent of the matrix pipeline (apart from the kernel itself).
    """
    quad = f.quadrature
    points = quad.points()
    cosines = np.clip(points @ points.T, -1.0, 1.0)
    # n |<ψ_p, ψ_h>|² depends only on the angle between p and h
    kernel = rep.n * ((1.0 + cosines) / 2.0) ** (rep.n - 1)
    values = kernel @ (quad.weights * f.values)
    return SampledFunction(quad, values)


def hilbert_schmidt(T: np.ndarray, S: np.ndarray) -> complex:
    """<T, S>_HS = (1/n) trace(T S*)."""
    return complex(np.trace(T @ S.conj().T)) / T.shape[0]


def l2_inner(f: SampledFunction, g: SampledFunction) -> complex:
    """<f, g>_{L²} = ∫ f conj(g) dμ."""
    return complex(weighted_sum(f.quadrature.weights, f.values * np.conj(g.values)))


def berezin_quadrature(n: int, level: Optional[int] = None, rule: str = 'legendre') -> SphereQuadrature:
    return sphere_quadrature(level or default_level(n), rule)
