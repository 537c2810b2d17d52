"""
Irreducible SU(2) representations, group elements, highest-weight
projections, sphere quadrature and group averaging.

Basis convention: J_i = 2 L_i built from the ladder operators with the
basis ordered m = j, j-1, ..., -j, so J_3 = diag(n-1, n-3, ..., -(n-1)).
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.linalg import expm

from .constants import AXIS_NORM_TOL, QUADRATURE_RULES
from .errors import DomainError, InternalError, InvalidDimensionError, ShapeError
from .logger import get_logger
from .utils import chunked, parallel_map, weighted_sum, worker_count

logger = get_logger('su2')

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0


# ===== Representations =====

@dataclass(frozen=True, eq=False)
class SpinRep:
    """Irreducible n-dimensional representation with generators J_1, J_2, J_3."""
    n: int
    J1: np.ndarray = field(repr=False)
    J2: np.ndarray = field(repr=False)
    J3: np.ndarray = field(repr=False)

    @property
    def generators(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.J1, self.J2, self.J3)

    def hermiticity_error(self) -> float:
        return max(float(np.max(np.abs(J - J.conj().T))) for J in self.generators)

    def commutator_error(self) -> float:
        """max over (j, k) of |[J_j, J_k] - 2i eps_jkl J_l| entrywise."""
        J = self.generators
        worst = 0.0
        for a in range(3):
            for b in range(3):
                lhs = J[a] @ J[b] - J[b] @ J[a]
                rhs = 2j * sum(LEVI_CIVITA[a, b, c] * J[c] for c in range(3))
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def casimir_error(self) -> float:
        total = sum(J @ J for J in self.generators)
        return float(np.max(np.abs(total - (self.n ** 2 - 1) * np.eye(self.n))))


def ladder_operators(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(L_+, L_z) for spin j = (n-1)/2 in the basis m = j, ..., -j."""
    j = (n - 1) / 2.0
    m = np.arange(j, -j - 1, -1)
    raise_coeffs = np.sqrt(np.maximum(j * (j + 1) - (m[1:] + 1) * m[1:], 0.0))
    L_plus = np.diag(raise_coeffs, 1).astype(complex)
    return L_plus, np.diag(m).astype(complex)


def spin_rep(n: int) -> SpinRep:
    """
    Build the n-dimensional irreducible representation.

    Raises:
        InvalidDimensionError: If n < 1
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidDimensionError(f"Representation dimension must be a positive integer, got {n!r}")
    n = int(n)
    L_plus, L_z = ladder_operators(n)
    L_minus = L_plus.conj().T
    J1 = L_plus + L_minus
    J2 = -1j * (L_plus - L_minus)
    J3 = 2 * L_z
    for J in (J1, J2, J3):
        J.setflags(write=False)
    rep = SpinRep(n, J1, J2, J3)
    logger.debug(f"spin_rep(n={n}): casimir residual {rep.casimir_error():.2e}")
    return rep


# ===== Group elements =====

@dataclass(frozen=True)
class GroupPoint:
    """
    SU(2) element exp(-(i/2) angle axis.sigma), angle in [0, 2π].

    angle = 2π is -1 in SU(2); angles beyond π cover the second sheet of the
    double cover, so products are tracked exactly (not up to sign).
    """
    axis: Tuple[float, float, float]
    angle: float

    def __post_init__(self):
        axis = tuple(float(a) for a in self.axis)
        if len(axis) != 3:
            raise ShapeError("axis must have three components")
        if abs(np.linalg.norm(axis) - 1.0) > AXIS_NORM_TOL:
            raise DomainError(f"axis must be a unit vector, got norm {np.linalg.norm(axis)!r}")
        if not 0.0 <= self.angle <= 2 * np.pi + 1e-12:
            raise DomainError(f"angle must lie in [0, 2π], got {self.angle!r}")
        object.__setattr__(self, 'axis', axis)
        object.__setattr__(self, 'angle', float(self.angle))

    @classmethod
    def identity(cls) -> 'GroupPoint':
        return cls((0.0, 0.0, 1.0), 0.0)

    @classmethod
    def from_quaternion(cls, q) -> 'GroupPoint':
        q = np.asarray(q, dtype=float)
        q = q / np.linalg.norm(q)
        vec_norm = float(np.linalg.norm(q[1:]))
        angle = 2.0 * np.arctan2(vec_norm, q[0])
        if vec_norm < 1e-15:
            return cls((0.0, 0.0, 1.0), angle)
        return cls(tuple(q[1:] / vec_norm), angle)

    @property
    def quaternion(self) -> np.ndarray:
        half = self.angle / 2.0
        return np.concatenate(([np.cos(half)], np.sin(half) * np.asarray(self.axis)))

    def compose(self, other: 'GroupPoint') -> 'GroupPoint':
        """self · other (Hamilton product of unit quaternions)."""
        w1, v1 = self.quaternion[0], self.quaternion[1:]
        w2, v2 = other.quaternion[0], other.quaternion[1:]
        w = w1 * w2 - v1 @ v2
        v = w1 * v2 + w2 * v1 + np.cross(v1, v2)
        return GroupPoint.from_quaternion(np.concatenate(([w], v)))

    def inverse(self) -> 'GroupPoint':
        return GroupPoint(tuple(-a for a in self.axis), self.angle)

    def so3_angle(self) -> float:
        """Rotation angle of the image in SO(3), in [0, π]."""
        return self.angle if self.angle <= np.pi else 2 * np.pi - self.angle

    def rotation_matrix(self) -> np.ndarray:
        """The SO(3) image (acts on 3-vectors)."""
        x, y, z = self.axis
        K = np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]])
        return np.eye(3) + np.sin(self.angle) * K + (1 - np.cos(self.angle)) * (K @ K)


def axis_rotation(axis, angle: float) -> GroupPoint:
    """Rotation about an arbitrary (not necessarily unit) axis, angle reduced to [0, 2π]."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    angle = float(np.mod(angle, 4 * np.pi))
    if angle > 2 * np.pi:
        axis, angle = -axis, 4 * np.pi - angle
    return GroupPoint(tuple(axis), angle)


def random_group_point(rng: np.random.Generator) -> GroupPoint:
    """Haar-random element (uniform unit quaternion)."""
    return GroupPoint.from_quaternion(rng.normal(size=4))


def section(theta: float, phi: float) -> GroupPoint:
    """Coset section: rotation by theta about (-sin φ, cos φ, 0); north pole -> identity."""
    return GroupPoint((-np.sin(phi), np.cos(phi), 0.0), float(theta))


def lie_element(rep: SpinRep, axis) -> np.ndarray:
    """axis . J"""
    return sum(a * J for a, J in zip(axis, rep.generators))


def unitary(rep: SpinRep, g: GroupPoint) -> np.ndarray:
    """U_g = exp(-(i/2) angle axis.J)."""
    if g.angle == 0.0:
        return np.eye(rep.n, dtype=complex)
    return expm(-0.5j * g.angle * lie_element(rep, g.axis))


def highest_weight(rep: SpinRep) -> Tuple[np.ndarray, np.ndarray]:
    """
    Highest-weight unit vector ξ (J_3 ξ = (n-1) ξ) and P = |ξ><ξ|.

    Raises:
        InternalError: If the top eigenvalue of J_3 is degenerate
    """
    evals, evecs = np.linalg.eigh(rep.J3)
    if rep.n > 1 and evals[-1] - evals[-2] < 0.5:
        raise InternalError("top eigenvalue of J_3 is degenerate")
    xi = evecs[:, -1]
    pivot = int(np.argmax(np.abs(xi)))
    xi = xi * (abs(xi[pivot]) / xi[pivot])
    return xi, np.outer(xi, xi.conj())


# ===== Quadrature =====

@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """
    Product rule on S² with weights normalized to total mass 1.

    theta, phi, weights are flat arrays of equal length (θ-major order).
    degree is the spherical-harmonic degree integrated exactly.
    """
    level: int
    rule: str
    theta: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    degree: int = 0

    @property
    def nodes(self) -> List[Tuple[float, float]]:
        return list(zip(self.theta.tolist(), self.phi.tolist()))

    @property
    def size(self) -> int:
        return len(self.weights)

    def points(self) -> np.ndarray:
        """Unit vectors of the nodes, shape (K, 3)."""
        s = np.sin(self.theta)
        return np.stack([s * np.cos(self.phi), s * np.sin(self.phi), np.cos(self.theta)], axis=1)

    def integrate(self, values) -> complex:
        values = np.asarray(values)
        if values.shape[0] != self.size:
            raise ShapeError(f"expected {self.size} node values, got {values.shape[0]}")
        result = weighted_sum(self.weights, values)
        return result if np.ndim(result) else result.item()


def sphere_quadrature(level: int, rule: str = 'legendre') -> SphereQuadrature:
    """
    Product quadrature: `level` Gauss-Legendre nodes × 2·level uniform azimuths.

    rule='legendre' takes the Gauss-Legendre nodes in cos θ (exact for
    harmonics to degree 2·level-1). rule='polar' takes them in θ ∈ [0, π]
    with the sin θ density folded into the weights; it converges spectrally
    for integrands that are smooth in θ but not polynomial in cos θ (such as
    the geodesic distance θ itself).
    """
    if not isinstance(level, (int, np.integer)) or level < 1:
        raise InvalidDimensionError(f"quadrature level must be a positive integer, got {level!r}")
    if rule not in QUADRATURE_RULES:
        raise DomainError(f"unknown quadrature rule {rule!r}; expected one of {QUADRATURE_RULES}")
    level = int(level)
    nodes, gl_weights = np.polynomial.legendre.leggauss(level)
    n_phi = 2 * level
    phis = 2 * np.pi * np.arange(n_phi) / n_phi

    if rule == 'legendre':
        thetas = np.arccos(nodes)
        theta_weights = gl_weights / 2.0
        degree = 2 * level - 1
    else:
        thetas = np.pi * (nodes + 1.0) / 2.0
        theta_weights = gl_weights * (np.pi / 2.0) * np.sin(thetas) / 2.0
        theta_weights = theta_weights / np.sum(theta_weights)
        degree = 0

    theta_grid, phi_grid = np.meshgrid(thetas, phis, indexing='ij')
    weights = np.repeat(theta_weights / n_phi, n_phi)
    weights = weights / np.sum(weights)
    return SphereQuadrature(level, rule, theta_grid.ravel(), phi_grid.ravel(), weights, degree)


# ===== Coherent states and averaging =====

def _j2_eigensystem(rep: SpinRep):
    return np.linalg.eigh(rep.J2)


def coherent_states(rep: SpinRep, theta, phi) -> np.ndarray:
    """
    U_{s(θ,φ)} ξ for arrays of angles, shape (K, n).

    U_s = e^{-iφJ3/2} e^{-iθJ2/2} e^{iφJ3/2}, and ξ is a J_3 eigenvector, so
    only one diagonalization of J_2 is needed.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    xi, _ = highest_weight(rep)
    mu, V = _j2_eigensystem(rep)
    coeffs = V.conj().T @ xi
    rotated = (np.exp(-0.5j * np.outer(theta, mu)) * coeffs) @ V.T
    j3 = np.real(np.diag(rep.J3))
    phase = np.exp(-0.5j * np.outer(phi, j3)) * np.exp(0.5j * (rep.n - 1) * phi)[:, None]
    return rotated * phase


def coherent_state(rep: SpinRep, theta: float, phi: float) -> np.ndarray:
    return coherent_states(rep, [theta], [phi])[0]


def section_unitaries(rep: SpinRep, theta, phi) -> np.ndarray:
    """U_{s(θ_k, φ_k)} stacked, shape (K, n, n)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    mu, V = _j2_eigensystem(rep)
    E = np.einsum('ab,kb,cb->kac', V, np.exp(-0.5j * np.outer(theta, mu)), V.conj())
    j3 = np.real(np.diag(rep.J3))
    D = np.exp(-0.5j * np.outer(phi, j3))
    return D[:, :, None] * E * D.conj()[:, None, :]


def haar_average(rep: SpinRep, T: np.ndarray, quad: SphereQuadrature) -> np.ndarray:
    """
    ∫_G U_g T U_g* dg over the full group.

    Haar measure factors as (sphere measure) × (uniform circle of rotations
    about the z-axis); the circle uses 2·level equally spaced angles, exact
    for the weights |m - m'| ≤ n - 1 occurring in T.
    """
    T = np.asarray(T, dtype=complex)
    if T.shape != (rep.n, rep.n):
        raise ShapeError(f"expected a {rep.n}x{rep.n} matrix, got {T.shape}")

    j3 = np.real(np.diag(rep.J3))
    circle = 2 * np.pi * np.arange(2 * quad.level) / (2 * quad.level)
    # U_r T U_r* multiplies T_ab by exp(-iψ(J3_aa - J3_bb)/2)
    phases = np.exp(-0.5j * circle[:, None, None] * (j3[:, None] - j3[None, :])[None, :, :])
    T_circle = np.mean(phases, axis=0) * T

    index_chunks = chunked(np.arange(quad.size), worker_count())

    def partial(idx):
        U = section_unitaries(rep, quad.theta[idx], quad.phi[idx])
        conj = np.einsum('kab,bc,kdc->kad', U, T_circle, U.conj())
        return weighted_sum(quad.weights[idx], conj)

    return sum(parallel_map(partial, index_chunks))
