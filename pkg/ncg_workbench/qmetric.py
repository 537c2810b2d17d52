"""
Lip-norms from the SU(2) action, Kantorovich state distances and the
γ_n + ‖σ̆(σ_T) - T‖ distance-bound estimate for fuzzy spheres.

All sups over the group are finite relaxations: a LipConstraintSample fixes
the group points and infinitesimal directions that are evaluated, so every
Lip value here is a lower bound of the true seminorm.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .constants import (
    DEFAULT_DYKSTRA_ITERATIONS, DEFAULT_DYKSTRA_TOL, DEFAULT_MAX_ITERATIONS, DEFAULT_METRIC_SAMPLE,
    DEFAULT_METRIC_TOL, DEFAULT_STALL_WINDOW, DEFECT_DIRECTIONS, GAMMA_LEVEL_FLOOR, HERMITIAN_TOL,
    LIP_CHECK_DIRECTIONS, LIP_RELATIVE_SLACK, STATE_TOL,
)
from .errors import DomainError, InvalidDimensionError, ShapeError, ValidationError
from .fuzzy_berezin import (
    SampledFunction, berezin_quadrature, berezin_transform, contravariant_symbol, covariant_symbol,
    default_level, fuzzy_sphere,
)
from .logger import get_logger
from .su2_reps import (
    GroupPoint, SpinRep, SphereQuadrature, coherent_state, highest_weight, random_group_point,
    sphere_quadrature, unitary,
)
from .utils import chunked, parallel_map, worker_count

logger = get_logger('qmetric')


# ===== Length function =====

@dataclass(frozen=True)
class LengthFunction:
    """ℓ(g) = rotation angle of the SO(3) image of g, in [0, π]."""
    name: str = 'so3_angle'

    def __call__(self, g: GroupPoint) -> float:
        return g.so3_angle()

    def check_invariance(self, rng: np.random.Generator, trials: int = 200) -> Dict[str, float]:
        """
        Worst violation of each length-function axiom over random elements.

        Conjugation invariance is checked as ℓ(x g x⁻¹) = ℓ(g).

        Returns:
            Dict with keys identity, inverse, conjugation, subadditivity
        """
        worst = {'identity': abs(self(GroupPoint.identity())), 'inverse': 0.0,
                 'conjugation': 0.0, 'subadditivity': 0.0}
        for _ in range(trials):
            g, h, x = (random_group_point(rng) for _ in range(3))
            worst['inverse'] = max(worst['inverse'], abs(self(g.inverse()) - self(g)))
            conjugate = x.compose(g).compose(x.inverse())
            worst['conjugation'] = max(worst['conjugation'], abs(self(conjugate) - self(g)))
            excess = self(g.compose(h)) - self(g) - self(h)
            worst['subadditivity'] = max(worst['subadditivity'], excess)
        return worst


LENGTH = LengthFunction()


# ===== States =====

@dataclass(eq=False)
class State:
    """Density matrix: Hermitian, positive semidefinite, trace 1."""
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > STATE_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > STATE_TOL:
            raise DomainError(f"density matrix has trace {np.trace(rho).real!r}, expected 1")
        if np.linalg.eigvalsh(rho)[0] < -STATE_TOL:
            raise DomainError("density matrix has a negative eigenvalue")
        self.rho = rho

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def pure(cls, vector) -> 'State':
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, n: int) -> 'State':
        return cls(np.eye(n, dtype=complex) / n)

    @classmethod
    def coherent(cls, rep: SpinRep, theta: float, phi: float) -> 'State':
        return cls.pure(coherent_state(rep, theta, phi))

    @classmethod
    def north(cls, rep: SpinRep) -> 'State':
        """The highest-weight projection P."""
        return cls(highest_weight(rep)[1])

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> 'State':
        """Normalized Wishart sample (full rank almost surely)."""
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho = g @ g.conj().T
        rho = (rho + rho.conj().T) / 2.0
        return cls(rho / np.trace(rho).real)

    def expectation(self, a: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ a))


# ===== Constraint samples =====

def fibonacci_directions(count: int) -> np.ndarray:
    """count nearly uniform unit vectors (Fibonacci lattice), shape (count, 3)."""
    if count <= 0:
        return np.zeros((0, 3))
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = np.pi * (1.0 + np.sqrt(5.0)) * k
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


@dataclass(eq=False)
class LipConstraintSample:
    """
    Group points (identity excluded) sorted by length, plus infinitesimal directions.

    directions always starts with the three coordinate axes.
    """
    points: Tuple[GroupPoint, ...]
    lengths: np.ndarray = field(repr=False)
    directions: np.ndarray = field(repr=False)
    _unitaries: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValidationError("constraint sample needs at least one group point")
        self.lengths = np.asarray(self.lengths, dtype=float)
        if np.any(self.lengths <= 0.0):
            raise DomainError("constraint sample contains a point of zero length")

    @property
    def size(self) -> int:
        return len(self.points)

    def unitaries(self, rep: SpinRep) -> np.ndarray:
        """U_g for every sampled point, shape (m, n, n); cached per dimension."""
        if rep.n not in self._unitaries:
            self._unitaries[rep.n] = np.stack([unitary(rep, g) for g in self.points])
        return self._unitaries[rep.n]


def lip_constraint_sample(count: int = DEFAULT_METRIC_SAMPLE, seed: int = 0,
                          extra_directions: int = 0) -> LipConstraintSample:
    """
    Haar-random group points (deterministic in seed), sorted by ℓ.

    Args:
        count: Number of group points
        seed: Seed of the generator
        extra_directions: Fibonacci directions added after the three axes
    """
    if count < 1:
        raise ValidationError(f"sample size must be positive, got {count}")
    rng = np.random.default_rng(seed)
    points: List[GroupPoint] = []
    while len(points) < count:
        g = random_group_point(rng)
        if LENGTH(g) > 1e-9:
            points.append(g)
    lengths = np.array([LENGTH(g) for g in points])
    order = np.argsort(lengths, kind='stable')
    directions = np.vstack([np.eye(3), fibonacci_directions(extra_directions)])
    return LipConstraintSample(tuple(points[i] for i in order), lengths[order], directions)


_DEFAULT_SAMPLES: Dict[Tuple[int, int], LipConstraintSample] = {}


def default_sample(count: int = DEFAULT_METRIC_SAMPLE, seed: int = 0) -> LipConstraintSample:
    key = (count, seed)
    if key not in _DEFAULT_SAMPLES:
        _DEFAULT_SAMPLES[key] = lip_constraint_sample(count, seed)
    return _DEFAULT_SAMPLES[key]


# ===== Lip-norms =====

def _check_operator(rep: SpinRep, T) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.shape != (rep.n, rep.n):
        raise ShapeError(f"expected a {rep.n}x{rep.n} matrix, got shape {T.shape}")
    scale = max(1.0, float(np.max(np.abs(T), initial=0.0)))
    if np.max(np.abs(T - T.conj().T), initial=0.0) > HERMITIAN_TOL * 100 * scale:
        raise DomainError("Lip-norm is defined on Hermitian matrices only")
    return T


def _derivations(rep: SpinRep, T: np.ndarray) -> np.ndarray:
    """[-(i/2) J_k, T] for k = 1, 2, 3, shape (3, n, n)."""
    return np.stack([-0.5j * (J @ T - T @ J) for J in rep.generators])


def _spectral_norms(stack: np.ndarray) -> np.ndarray:
    if stack.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.norm(stack, ord=2, axis=(1, 2))


def lip_norm(rep: SpinRep, T, sample: Optional[LipConstraintSample] = None,
             extra_directions: int = 0) -> float:
    """
    Sampled L(T) = sup_g ‖U_g T U_g* - T‖ / ℓ(g), with the small-angle limits.

    ℓ(g) is the rotation angle of g in radians and the action is the spin
    representation itself, with no rescaling of the coordinates x̂_i. Under
    this normalisation L(x̂_3) = 1/√3 on n = 2.

    Args:
        rep: Spin representation the action runs through
        T: Hermitian n x n matrix
        sample: Group points and directions (default: 64 Haar points, seed 0)
        extra_directions: Additional Fibonacci directions for the small-angle limit

    Raises:
        DomainError: If T is not Hermitian
    """
    T = _check_operator(rep, T)
    sample = sample or default_sample()
    # shifting by a multiple of 1 changes no commutator and makes scalars vanish exactly
    T = T - T[0, 0].real * np.eye(rep.n)
    if not np.any(T):
        return 0.0
    U = sample.unitaries(rep)
    moved = np.einsum('gab,bc,gdc->gad', U, T, U.conj()) - T
    quotients = _spectral_norms(moved) / sample.lengths
    directions = np.vstack([sample.directions, fibonacci_directions(extra_directions)])
    infinitesimal = _spectral_norms(np.einsum('dk,kab->dab', directions, _derivations(rep, T)))
    return float(max(np.max(quotients), np.max(infinitesimal)))


def _geodesic_ratios(values: np.ndarray, points: np.ndarray, rows: np.ndarray) -> float:
    dots = points[rows] @ points.T
    cross = np.linalg.norm(np.cross(points[rows][:, None, :], points[None, :, :]), axis=-1)
    rho = np.arctan2(cross, dots)
    diffs = np.abs(values[rows][:, None] - values[None, :])
    mask = rho > 1e-12
    if not np.any(mask):
        return 0.0
    return float(np.max(diffs[mask] / rho[mask]))


def classical_lip_norm(f: SampledFunction) -> float:
    """
    max over node pairs of |f(p) - f(q)| / ρ(p, q), ρ the round geodesic distance.

    Raises:
        DomainError: If the quadrature level is below 4
    """
    quad = f.quadrature
    if quad.level < 4:
        raise DomainError(f"classical Lip-norm needs quadrature level >= 4, got {quad.level}")
    values = np.asarray(f.values)
    if np.all(values == values[0]):
        return 0.0
    points = quad.points()
    blocks = chunked(np.arange(quad.size), max(worker_count(), quad.size // 256))
    return max(parallel_map(lambda rows: _geodesic_ratios(values, points, rows), blocks))


# ===== Kantorovich problems =====

def traceless_hermitian_basis(n: int) -> np.ndarray:
    """
    Generalized Gell-Mann basis of the traceless Hermitian n x n matrices,
    orthonormal for trace(A B); shape (n² - 1, n, n).
    """
    basis = []
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            basis.append(sym / np.sqrt(2.0))
            anti = np.zeros((n, n), dtype=complex)
            anti[j, k], anti[k, j] = -1j, 1j
            basis.append(anti / np.sqrt(2.0))
    for l in range(1, n):
        diag = np.zeros(n, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        basis.append(np.diag(diag) / np.sqrt(l * (l + 1)))
    return np.array(basis).reshape(len(basis), n, n)


@dataclass
class StateMetricResult:
    value: float
    certificate: np.ndarray = field(repr=False)
    converged: bool
    iterations: int

    def __iter__(self) -> Iterator:
        yield self.value
        yield self.certificate


@dataclass(eq=False)
class KantorovichProblem:
    """
    maximize trace(Δ a) over a = Σ x_i B_i subject to ‖M_g(a)‖_op ≤ r_g.

    images[g, i] = M_g(B_i) (Hermitian p x p), radii[g] = r_g.

    Solved by projected ascent on the lifted set {(x, b): b_g = M_g x, ‖b_g‖ ≤ r_g};
    each projection runs Dykstra's algorithm between the graph subspace and
    the product of spectral-norm balls.
    """
    basis: np.ndarray = field(repr=False)
    images: np.ndarray = field(repr=False)
    radii: np.ndarray = field(repr=False)
    dykstra_iterations: int = DEFAULT_DYKSTRA_ITERATIONS
    dykstra_tol: float = DEFAULT_DYKSTRA_TOL

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=complex)
        self.images = np.asarray(self.images, dtype=complex)
        self.radii = np.asarray(self.radii, dtype=float)
        m = self.basis.shape[0]
        if self.images.ndim != 4 or self.images.shape[1] != m or self.images.shape[2] != self.images.shape[3]:
            raise ShapeError(f"constraint images must have shape (G, {m}, p, p), got {self.images.shape}")
        if self.radii.shape != (self.images.shape[0],):
            raise ShapeError("one radius per constraint is required")
        if np.any(self.radii <= 0.0):
            raise DomainError("constraint radii must be positive")
        gram = np.eye(m) + np.einsum('gikl,gjkl->ij', self.images.conj(), self.images).real
        self._factor = cho_factor(gram)

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def coefficients(self, delta: np.ndarray) -> np.ndarray:
        """c_i = Re trace(Δ B_i)."""
        return np.einsum('ab,iba->i', delta, self.basis).real

    def element(self, x: np.ndarray) -> np.ndarray:
        return np.einsum('i,iab->ab', x, self.basis)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.einsum('gikl,i->gkl', self.images, x)

    def adjoint(self, b: np.ndarray) -> np.ndarray:
        return np.einsum('gikl,gkl->i', self.images.conj(), b).real

    def lip(self, x: np.ndarray) -> float:
        """max_g ‖M_g x‖ / r_g"""
        return float(np.max(_spectral_norms(self.apply(x)) / self.radii))

    def _onto_graph(self, x: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        y = cho_solve(self._factor, x + self.adjoint(b))
        return y, self.apply(y)

    def _onto_balls(self, b: np.ndarray) -> np.ndarray:
        b = (b + np.conj(np.swapaxes(b, 1, 2))) / 2.0
        evals, evecs = np.linalg.eigh(b)
        clipped = np.clip(evals, -self.radii[:, None], self.radii[:, None])
        return np.einsum('gak,gk,gbk->gab', evecs, clipped, evecs.conj())

    def project(self, x: np.ndarray, b: np.ndarray) -> np.ndarray:
        """x-part of the projection of (x, b) onto the lifted feasible set."""
        px, pb = np.zeros_like(x), np.zeros_like(b)
        qb = np.zeros_like(b)
        for _ in range(self.dykstra_iterations):
            vx, vb = self._onto_graph(x + px, b + pb)
            px, pb = x + px - vx, b + pb - vb
            nb = self._onto_balls(vb + qb)
            qb = vb + qb - nb
            gap = np.linalg.norm(nb - vb)
            change = np.linalg.norm(vx - x) + np.linalg.norm(nb - b)
            x, b = vx, nb
            if gap < self.dykstra_tol and change < self.dykstra_tol:
                break
        return x

    def maximize(self, c: np.ndarray, tol: float = DEFAULT_METRIC_TOL,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS,
                 stall_window: int = DEFAULT_STALL_WINDOW) -> Tuple[np.ndarray, bool, int]:
        """
        Best feasible x found for max c·x.

        Projected gradient ascent in the lifted space: c·x does not depend on b,
        so a step moves (x, M x) to (x + step·c, M x) before the projection.
        Dykstra stops at a tolerance and the projection is only approximately
        feasible. Feasibility of the result comes from the rescale: every
        iterate is divided by its sampled Lip value, so the returned point
        satisfies every constraint and c·x is a lower bound of the optimum.

        Returns:
            (x, converged, iterations)
        """
        m = len(c)
        if not np.any(c):
            return np.zeros(m), True, 0
        unit_lips = [self.lip(e) for e in np.eye(m)]
        if min(unit_lips) <= 0.0:
            raise DomainError("constraints leave a basis direction unbounded")
        radius = max(1.0 / s for s in unit_lips)
        step = 2.0 * radius / np.linalg.norm(c)
        x = np.zeros(m)
        best_value, best_x = 0.0, np.zeros(m)
        history: List[float] = []
        for iteration in range(1, max_iterations + 1):
            x = self.project(x + step * c, self.apply(x))
            scale = self.lip(x)
            if scale > 0.0:
                value = float(c @ x) / scale
                if value > best_value:
                    best_value, best_x = value, x / scale
            history.append(best_value)
            if iteration > stall_window and history[-1] - history[-1 - stall_window] < tol:
                logger.debug(f"state metric settled at {best_value:.9g} after {iteration} steps")
                return best_x, True, iteration
        logger.warning(f"state metric did not settle in {max_iterations} steps; returning best so far")
        return best_x, False, max_iterations

    def solve(self, delta: np.ndarray, **kwargs) -> StateMetricResult:
        x, converged, iterations = self.maximize(self.coefficients(delta), **kwargs)
        a = self.element(x)
        value = float(np.trace(delta @ a).real)
        return StateMetricResult(value, a, converged, iterations)


def fuzzy_problem(rep: SpinRep, sample: LipConstraintSample) -> KantorovichProblem:
    """Lip constraints of the SU(2) action on M_n: infinitesimal ones first, then by ℓ."""
    basis = traceless_hermitian_basis(rep.n)
    U = sample.unitaries(rep)
    moved = np.einsum('gab,ibc,gdc->giad', U, basis, U.conj()) - basis[None]
    D = np.einsum('dk,kab->dab', sample.directions, -0.5j * np.stack(rep.generators))
    infinitesimal = np.einsum('dab,ibc->diac', D, basis) - np.einsum('iab,dbc->diac', basis, D)
    images = np.concatenate([infinitesimal, moved])
    radii = np.concatenate([np.ones(len(sample.directions)), sample.lengths])
    return KantorovichProblem(basis, images, radii)


def two_point_problem(r: float) -> KantorovichProblem:
    """Diagonal 2x2 algebra with |a_1 - a_2| ≤ r."""
    if r <= 0:
        raise DomainError(f"distance must be positive, got {r!r}")
    basis = np.array([np.diag([1.0, -1.0]) / np.sqrt(2.0)], dtype=complex)
    images = np.full((1, 1, 1, 1), np.sqrt(2.0), dtype=complex)
    return KantorovichProblem(basis, images, np.array([float(r)]))


def state_metric(mu: State, nu: State, rep: SpinRep, sample: Optional[LipConstraintSample] = None,
                 tol: float = DEFAULT_METRIC_TOL, problem: Optional[KantorovichProblem] = None,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS,
                 stall_window: int = DEFAULT_STALL_WINDOW) -> StateMetricResult:
    """
    Lower bound of sup{ |μ(a) - ν(a)| : L(a) ≤ 1 } over the sampled constraints.

    Raises:
        ShapeError: If the states do not match the representation
    """
    if mu.n != nu.n or mu.n != rep.n:
        raise ShapeError(f"states of dimension {mu.n} and {nu.n} on a representation with n={rep.n}")
    delta = mu.rho - nu.rho
    if not np.any(delta):
        return StateMetricResult(0.0, np.zeros((rep.n, rep.n), dtype=complex), True, 0)
    problem = problem or fuzzy_problem(rep, sample or default_sample())
    result = problem.solve(delta, tol=tol, max_iterations=max_iterations, stall_window=stall_window)
    if not result.converged:
        logger.warning(f"state metric unconverged: best value {result.value:.6g}")
    return result


def state_metric_refined(mu: State, nu: State, rep: SpinRep, count: int = 16, seed: int = 0,
                         tol: float = DEFAULT_METRIC_TOL, max_doublings: int = 5) -> StateMetricResult:
    """Double the group sample until the value moves by less than tol."""
    previous = state_metric(mu, nu, rep, lip_constraint_sample(count, seed), tol)
    for _ in range(max_doublings):
        count *= 2
        current = state_metric(mu, nu, rep, lip_constraint_sample(count, seed), tol)
        if abs(current.value - previous.value) < tol:
            return current
        previous = current
    logger.warning(f"sample refinement still moving after {max_doublings} doublings")
    return previous


# ===== γ_n and the distance bound =====

def gamma(rep: SpinRep, quad: Optional[SphereQuadrature] = None) -> float:
    """
    γ_n = n ∫ θ σ_P dμ, θ the geodesic angle from the north pole.

    θ is not polynomial in cos θ, so the integral always runs on the polar
    rule of the given level.

    Raises:
        InvalidDimensionError: If n < 2
    """
    if rep.n < 2:
        raise InvalidDimensionError("γ is defined for n >= 2")
    if quad is None:
        quad = sphere_quadrature(max(GAMMA_LEVEL_FLOOR, rep.n), 'polar')
    elif quad.rule != 'polar':
        quad = sphere_quadrature(quad.level, 'polar')
    if quad.level < rep.n:
        logger.warning(f"quadrature level {quad.level} < n={rep.n}: γ is under-resolved")
    sigma_p = covariant_symbol(highest_weight(rep)[1], quad, rep).values.real
    return float(rep.n * quad.integrate(quad.theta * sigma_p).real)


def closed_form_gamma(n: int, level: int = GAMMA_LEVEL_FLOOR) -> float:
    """γ_n from the kernel n cos^{2(n-1)}(θ/2), independent of the matrix pipeline."""
    quad = sphere_quadrature(max(level, n), 'polar')
    kernel = n * np.cos(quad.theta / 2.0) ** (2 * (n - 1))
    return float(quad.integrate(quad.theta * kernel).real)


@dataclass
class DefectResult:
    value: float
    lip: float
    normalized: bool


def berezin_defect(rep: SpinRep, T, quad: Optional[SphereQuadrature] = None,
                   sample: Optional[LipConstraintSample] = None,
                   extra_directions: int = DEFECT_DIRECTIONS) -> DefectResult:
    """
    ‖σ̆(σ_T) - T‖ after rescaling T to unit Lip-norm.

    Scalar matrices have Lip-norm 0 and are reported unnormalized.
    """
    T = _check_operator(rep, T)
    quad = quad or berezin_quadrature(rep.n)
    L = lip_norm(rep, T, sample, extra_directions)
    normalized = L > 1e-12 * max(1.0, float(np.max(np.abs(T))))
    S = T / L if normalized else T
    reconstructed = contravariant_symbol(covariant_symbol(S, quad, rep), rep)
    value = float(np.linalg.norm(reconstructed - S, 2))
    if not normalized:
        logger.info("zero Lip-norm candidate: defect reported unnormalized")
    return DefectResult(value, L, normalized)


@dataclass
class DistanceBound:
    """γ_n + max candidate defect; an estimate over the candidate set, not a certified bound."""
    n: int
    gamma: float
    defect: float
    candidate_defects: List[DefectResult] = field(repr=False)

    @property
    def bound(self) -> float:
        return self.gamma + self.defect

    @property
    def estimate(self) -> bool:
        return True


def gh_upper_bound(rep: SpinRep, quad: SphereQuadrature, candidates: Sequence[np.ndarray],
                   sample: Optional[LipConstraintSample] = None) -> DistanceBound:
    """
    γ_n plus the largest normalized Berezin defect over the candidates.

    γ runs on the polar rule of quad.level, the defects on the
    Gauss-Legendre rule of the same level.
    """
    if not candidates:
        raise ValidationError("at least one candidate matrix is required")
    g = gamma(rep, quad)
    berezin = berezin_quadrature(rep.n, max(quad.level, rep.n))
    sample = sample or default_sample()
    sample.unitaries(rep)
    defects = parallel_map(lambda T: berezin_defect(rep, T, berezin, sample), candidates)
    worst = max(d.value for d in defects)
    logger.debug(f"n={rep.n}: gamma={g:.6g} defect={worst:.6g}")
    return DistanceBound(rep.n, g, worst, defects)


def coordinate_candidates(rep: SpinRep) -> List[np.ndarray]:
    """x̂_1, x̂_2, x̂_3 and x̂_1 x̂_2 + x̂_2 x̂_1."""
    sphere = fuzzy_sphere(rep.n)
    x1, x2, x3 = sphere.coordinates
    return [x1, x2, x3, x1 @ x2 + x2 @ x1]


# ===== Contraction checks =====

def lip_contraction_check(rep: SpinRep, T, f: SampledFunction,
                          sample: Optional[LipConstraintSample] = None,
                          eps_quad: float = 1e-8) -> Tuple[bool, bool]:
    """
    (L(σ_T) ≤ L(T), L(σ̆_f) ≤ L(f)) with relative slack 1e-6.

    The quantum sides use LIP_CHECK_DIRECTIONS infinitesimal directions.
    """
    T = _check_operator(rep, T)
    quad = f.quadrature
    sample = sample or default_sample()
    quantum_T = lip_norm(rep, T, sample, LIP_CHECK_DIRECTIONS)
    classical_sigma = classical_lip_norm(SampledFunction(quad, covariant_symbol(T, quad, rep).values.real))
    first = classical_sigma <= quantum_T * (1 + LIP_RELATIVE_SLACK) + eps_quad

    breve = contravariant_symbol(f, rep)
    breve = (breve + breve.conj().T) / 2.0
    quantum_breve = lip_norm(rep, breve, sample, LIP_CHECK_DIRECTIONS)
    second = quantum_breve <= classical_lip_norm(f) * (1 + LIP_RELATIVE_SLACK) + eps_quad
    return first, second


def berezin_function_defect(f: SampledFunction, rep: SpinRep) -> float:
    """max over nodes of |f - σ(σ̆_f)|"""
    return (f - berezin_transform(f, rep)).max_abs()


def gamma_dominance(f: SampledFunction, rep: SpinRep, eps_quad: float = 1e-8) -> Tuple[float, float, bool]:
    """
    (‖f - B f‖_∞, γ_n L(f), holds): the transform moves f by at most γ_n L(f).
    """
    lhs = berezin_function_defect(f, rep)
    rhs = gamma(rep, sphere_quadrature(max(GAMMA_LEVEL_FLOOR, default_level(rep.n)), 'polar')) * classical_lip_norm(f)
    return lhs, rhs, lhs <= rhs * (1 + LIP_RELATIVE_SLACK) + eps_quad
