"""
CLI command handlers.
Each handler computes one table, writes it (CSV, JSON or SVG) and raises a
PropertyCheckError after writing when a verified identity failed.
"""

import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, List

import numpy as np

from . import exact_linalg as xl
from .algebra_io import load_algebra, load_calculus, load_presentation
from .calculus import derivations, hodge, is_derivation, to_graded_calculus, universal_forms
from .clifford import (
    clifford, dirac_relations_hold, grading, monomial_span_rank, relation_witness,
    spin_representation, squares_to_laplacian, two_dimensional_examples,
)
from .config import Config
from .constants import GAMMA_LEVEL_FLOOR, IDENTITY_TOL, OUTPUT_FORMATS
from .errors import (
    CliffordRelationError, InternalError, PropertyCheckError, SizeLimitError, ValidationError,
)
from .fuzzy_berezin import berezin_kernel, berezin_quadrature, default_level, fuzzy_sphere
from .homology import homology_dims
from .hopf_rewrite import (
    confluence_samples, hopf_axiom_check, hopf_structure, is_confluent_on, preset,
    q1_commutativity_check, star_compatibility_check,
)
from .logger import get_logger
from .ncpoly import NCPoly
from .qmetric import (
    State, berezin_defect, coordinate_candidates, gamma, gh_upper_bound, lip_constraint_sample,
    state_metric, state_metric_refined,
)
from .su2_reps import sphere_quadrature, spin_rep
from .svg_plot import line_chart, write_line_chart

logger = get_logger('cli')


# ===== Tables =====

@dataclass
class Table:
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise InternalError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return ','.join(_cell(v) for v in value)
    if value is None:
        return ''
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def render_table(table: Table, fmt: str) -> str:
    if fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
        return buffer.getvalue()
    if fmt == 'json':
        records = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
        return json.dumps(records, indent=2, ensure_ascii=False) + '\n'
    raise ValidationError(f"format {fmt!r} is not available for this command; use csv or json")


def output_format(args, config: Config) -> str:
    fmt = getattr(args, 'output_format', None) or config.output['format']
    if fmt not in OUTPUT_FORMATS:
        raise ValidationError(f"unknown output format {fmt!r}; expected one of {OUTPUT_FORMATS}")
    return fmt


def _output_path(path: str, config: Config) -> str:
    if os.path.isabs(path):
        return path
    return os.path.join(config.output.get('directory') or '.', path)


def emit(text: str, args, config: Config) -> None:
    """Write to --output (relative to output.directory) or stdout."""
    target = getattr(args, 'output', None)
    if not target:
        sys.stdout.write(text)
        return
    path = _output_path(target, config)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    print(f"💾 Résultats écrits dans {path}", file=sys.stderr)


def emit_table(table: Table, args, config: Config) -> None:
    emit(render_table(table, output_format(args, config)), args, config)


def _fail(failures: List[str], what: str) -> None:
    if failures:
        for line in failures:
            print(f"❌ {line}", file=sys.stderr)
        raise PropertyCheckError(f"{what}: {len(failures)} check(s) failed")
    print(f"✅ {what} : toutes les vérifications passent", file=sys.stderr)


def _level(args, config: Config, n: int) -> int:
    return args.level or default_level(n, config.fuzzy['level_floor'])


# ===== fuzzy =====

def cmd_fuzzy_table(args, config: Config):
    """
    Handle `fuzzy table`: identity residuals, kernel mass and the x̂_3 defect per n.

    Args:
        args: Parsed command-line arguments (n, level)
        config: Loaded configuration
    """
    table = Table(['n', 'level', 'casimir_error', 'commutator_error', 'radius_error',
                   'kernel_mass', 'x3_defect', 'x3_lip'])
    failures = []
    for n in args.n:
        rep = spin_rep(n)
        sphere = fuzzy_sphere(n)
        level = _level(args, config, n)
        quad = berezin_quadrature(n, level)
        mass = float(quad.integrate(berezin_kernel(rep, quad.theta)).real)
        if n >= 2:
            defect = berezin_defect(rep, sphere.x3, quad)
            x3_defect, x3_lip = defect.value, defect.lip
        else:
            x3_defect, x3_lip = 0.0, 0.0
        row = [n, level, rep.casimir_error(), sphere.commutator_error(), sphere.radius_error(),
               mass, x3_defect, x3_lip]
        table.add(*row)
        scale = max(1, n * n)
        if rep.casimir_error() > IDENTITY_TOL * scale or rep.commutator_error() > IDENTITY_TOL * scale:
            failures.append(f"n={n}: SU(2) relations off by more than {IDENTITY_TOL * scale:g}")
        if n >= 2 and sphere.radius_error() > IDENTITY_TOL * scale:
            failures.append(f"n={n}: Σ x̂_i² ≠ 1 (residual {sphere.radius_error():.3g})")
        if abs(mass - 1.0) > 1e-9:
            failures.append(f"n={n}: kernel mass {mass:.12g} ≠ 1")
        logger.info(f"fuzzy table n={n}: defect {x3_defect:.6g}")

    if output_format(args, config) == 'svg':
        xs = [float(n) for n in table.column('n') if n >= 2]
        ys = [d for n, d in zip(table.column('n'), table.column('x3_defect')) if n >= 2]
        emit(line_chart({'x3 defect': (xs, ys)}, title='Berezin defect of x3', ylabel='defect',
                        log_y=args.log), args, config)
    else:
        emit_table(table, args, config)
    _fail(failures, "fuzzy table")


def cmd_fuzzy_gamma(args, config: Config):
    """
    Handle `fuzzy gamma`: γ_n, the largest candidate defect and their sum per n.

    Args:
        args: Parsed command-line arguments (n, level, plot, log)
        config: Loaded configuration
    """
    metric = config.metric
    sample = lip_constraint_sample(metric['sample_size'], args.seed if args.seed is not None else metric['seed'])
    table = Table(['n', 'level', 'gamma', 'defect_max', 'gh_bound'])
    for n in args.n:
        rep = spin_rep(n)
        level = args.level or max(GAMMA_LEVEL_FLOOR, default_level(n, config.fuzzy['level_floor']))
        quad = sphere_quadrature(level, config.fuzzy['gamma_rule'])
        if args.gamma_only:
            table.add(n, level, gamma(rep, quad), None, None)
            continue
        bound = gh_upper_bound(rep, quad, coordinate_candidates(rep), sample)
        table.add(n, level, bound.gamma, bound.defect, bound.bound)
        print(f"   n={n:>3}  γ={bound.gamma:.9f}  défaut={bound.defect:.3e}", file=sys.stderr)

    series = {'gamma': ([float(n) for n in table.column('n')], table.column('gamma'))}
    if not args.gamma_only:
        series['gh bound'] = ([float(n) for n in table.column('n')], table.column('gh_bound'))
    chart = dict(title='Distance estimate for fuzzy spheres', ylabel='value', log_y=args.log)

    if args.plot:
        path = _output_path(args.plot, config)
        write_line_chart(path, series, **chart)
        print(f"📈 Graphique écrit dans {path}", file=sys.stderr)
    if output_format(args, config) == 'svg':
        emit(line_chart(series, **chart), args, config)
    else:
        emit_table(table, args, config)


# ===== metric =====

def parse_state(spec: str, rep, rng: np.random.Generator) -> State:
    """north | south | mixed | random | coherent:THETA,PHI"""
    name, _, params = spec.partition(':')
    if name == 'north':
        return State.north(rep)
    if name == 'south':
        return State.coherent(rep, math.pi, 0.0)
    if name == 'mixed':
        return State.maximally_mixed(rep.n)
    if name == 'random':
        return State.random(rep.n, rng)
    if name == 'coherent':
        try:
            theta, phi = (float(v) for v in params.split(','))
        except ValueError:
            raise ValidationError(f"coherent state needs THETA,PHI, got {params!r}")
        return State.coherent(rep, theta, phi)
    raise ValidationError(f"unknown state {spec!r}; expected north, south, mixed, random or coherent:THETA,PHI")


def cmd_metric_states(args, config: Config):
    """
    Handle `metric states`: the quantum distance between two states on each n.

    Args:
        args: Parsed command-line arguments (n, states, sample, tol, refine)
        config: Loaded configuration
    """
    metric = config.metric
    seed = args.seed if args.seed is not None else metric['seed']
    count = args.sample or metric['sample_size']
    tol = args.tol or metric['tol']
    table = Table(['n', 'state_a', 'state_b', 'distance', 'converged', 'iterations', 'sample_size'])
    for n in args.n:
        rep = spin_rep(n)
        rng = np.random.default_rng(seed)
        mu = parse_state(args.states[0], rep, rng)
        nu = parse_state(args.states[1], rep, rng)
        if args.refine:
            result = state_metric_refined(mu, nu, rep, count=count, seed=seed, tol=tol)
        else:
            result = state_metric(mu, nu, rep, lip_constraint_sample(count, seed), tol,
                                  max_iterations=metric['max_iterations'], stall_window=metric['stall_window'])
        table.add(n, args.states[0], args.states[1], result.value, result.converged, result.iterations, count)
        if not result.converged:
            print(f"⚠️  n={n} : optimisation non convergée (valeur {result.value:.6g})", file=sys.stderr)
    emit_table(table, args, config)


# ===== homology =====

def cmd_homology_compute(args, config: Config):
    """
    Handle `homology compute`: (co)homology dimensions up to --max-degree.

    Args:
        args: Parsed command-line arguments (algebra, max_degree, variant, side)
        config: Loaded configuration
    """
    algebra = load_algebra(config.input_path('algebras', args.algebra))
    variant = args.variant or config.homology['variant']
    dims = homology_dims(algebra, args.max_degree, variant, args.side, config.homology['size_limit'])
    table = Table(['algebra', 'variant', 'side', 'max_degree', 'dims'])
    table.add(algebra.name, variant, args.side, args.max_degree, dims)
    emit_table(table, args, config)


# ===== calculus =====

def _calculus_input(args, config: Config):
    if args.calculus:
        return load_calculus(config.input_path('calculi', args.calculus))
    if args.algebra:
        algebra = load_algebra(config.input_path('algebras', args.algebra))
        return to_graded_calculus(universal_forms(algebra, args.max_degree))
    raise ValidationError("give --calculus FILE or --algebra FILE")


def cmd_calculus_hodge(args, config: Config):
    """
    Handle `calculus hodge`: per-degree dimensions of the three Hodge summands.

    Args:
        args: Parsed command-line arguments (calculus or algebra + max_degree)
        config: Loaded configuration
    """
    C = _calculus_input(args, config)
    report = hodge(C, config.calculus['harmonic_rtol'])
    tol = config.calculus['hodge_tol']
    table = Table(['degree', 'dim', 'harmonic', 'exact', 'coexact', 'cohomology', 'orthogonality_residual'])
    failures = []
    for h in report.degrees:
        table.add(h.degree, h.dim, h.harmonic_dim, h.exact_dim, h.coexact_dim, h.cohomology_dim,
                  h.orthogonality_residual)
        if not h.additive:
            failures.append(f"degree {h.degree}: {h.harmonic_dim} + {h.exact_dim} + {h.coexact_dim} ≠ {h.dim}")
        if h.orthogonality_residual >= tol:
            failures.append(f"degree {h.degree}: summands not orthogonal ({h.orthogonality_residual:.3g})")
        if h.harmonic_dim != h.cohomology_dim:
            failures.append(f"degree {h.degree}: harmonic dimension {h.harmonic_dim} ≠ cohomology {h.cohomology_dim}")
    emit_table(table, args, config)
    _fail(failures, f"décomposition de Hodge ({C.name})")


def cmd_calculus_derivations(args, config: Config):
    """
    Handle `calculus derivations`: a basis of Der(A) as sparse matrix entries.

    Args:
        args: Parsed command-line arguments (algebra)
        config: Loaded configuration
    """
    algebra = load_algebra(config.input_path('algebras', args.algebra))
    basis = derivations(algebra)
    table = Table(['derivation', 'row', 'col', 'value'])
    for index, X in enumerate(basis):
        if not is_derivation(algebra, X):
            raise InternalError(f"basis element {index} is not a derivation")
        for (r, c), v in sorted(xl.items(X)):
            table.add(index, r, c, xl.format_scalar(v))
    print(f"📐 dim Der({algebra.name}) = {len(basis)}", file=sys.stderr)
    emit_table(table, args, config)


# ===== clifford =====

def _anticommutator_residual(mats) -> float:
    dense = [xl.to_numpy(m) for m in mats]
    size = dense[0].shape[0]
    worst = 0.0
    for i in range(len(dense)):
        for j in range(i, len(dense)):
            anti = dense[i] @ dense[j] + dense[j] @ dense[i] + (2.0 * np.eye(size) if i == j else 0.0)
            worst = max(worst, float(np.max(np.abs(anti))))
    return worst


def cmd_clifford_check(args, config: Config):
    """
    Handle `clifford check`: relations, monomial span and D² for the spin representation.

    Args:
        args: Parsed command-line arguments (k, examples)
        config: Loaded configuration
    """
    k = args.k
    if k > config.clifford['max_spin_k']:
        raise SizeLimitError(f"k={k} exceeds clifford.max_spin_k={config.clifford['max_spin_k']}")
    if 2 * k > config.clifford['max_generators']:
        raise SizeLimitError(f"2k={2 * k} generators exceed clifford.max_generators={config.clifford['max_generators']}")
    gens = spin_representation(k)
    table = Table(['check', 'result', 'residual', 'detail'])
    failures = []

    def record(check: str, ok: bool, residual, detail: str = ''):
        table.add(check, 'PASS' if ok else 'FAIL', residual, detail)
        if not ok:
            failures.append(f"{check}: {detail}")

    pair = relation_witness(gens)
    record('anticommutator', pair is None, _anticommutator_residual(gens),
           '' if pair is None else f"pair {pair}")
    if k <= 3:
        rank = monomial_span_rank(gens)
        record('monomial_span', rank == 4 ** k, 0, f"rank {rank} of {4 ** k}")
    if k <= 4:
        record('dirac_square', squares_to_laplacian(gens), 0, f"{2 * k} symbols")
        g = grading(clifford(2 * k))
        plus, minus = g.eigenspace_dimensions()
        record('grading', g.is_involution() and plus == minus, 0, f"eigenspaces {plus}+{minus}")
    if args.examples:
        record('dirac_4x4', dirac_relations_hold(), 0, 'A0..A3')
        first, second = two_dimensional_examples()
        record('dirac_2d_first', squares_to_laplacian(first), 0, '')
        record('dirac_2d_second', squares_to_laplacian(second), 0, '')

    emit_table(table, args, config)
    if pair is not None:
        raise CliffordRelationError(pair)
    _fail(failures, f"Clifford k={k}")


# ===== hopf =====

def cmd_hopf_verify(args, config: Config):
    """
    Handle `hopf verify`: rewriting checks for a presentation and, for su_q2,
    the Hopf axioms up to --degree.

    Args:
        args: Parsed command-line arguments (preset, presentation, degree, samples)
        config: Loaded configuration
    """
    if args.degree > config.hopf['max_degree']:
        raise SizeLimitError(f"degree {args.degree} exceeds hopf.max_degree={config.hopf['max_degree']}")
    P = load_presentation(config.input_path('presentations', args.presentation)) if args.presentation \
        else preset(args.preset)
    P.step_limit = config.hopf['step_limit']
    seed = args.seed if args.seed is not None else 0
    table = Table(['check', 'result', 'detail'])
    failures = []

    def record(check: str, ok: bool, detail: str = ''):
        table.add(check, 'PASS' if ok else 'FAIL', detail)
        if not ok:
            failures.append(f"{check}: {detail}")

    def guarded(check: str, compute):
        """Run one check; anything but an input error becomes a FAIL row."""
        try:
            return compute()
        except ValidationError:
            raise
        except Exception as e:
            logger.exception(f"{check} raised")
            record(check, False, f"{type(e).__name__}: {e}")
            return None

    def critical_pairs():
        pairs = P.critical_pairs()
        unresolved = [p for p in pairs if not p.resolved]
        record('critical_pairs', not unresolved,
               f"{len(pairs)} pairs" if not unresolved
               else f"{unresolved[0].word}: {unresolved[0].left} vs {unresolved[0].right}")

    def confluence():
        disagreements = is_confluent_on(P, samples)
        record('confluence', not disagreements,
               f"{len(samples)} samples" if not disagreements else f"first: {disagreements[0]}")

    def star_compatibility():
        bad = star_compatibility_check(P, samples)
        record('star_compatibility', not bad, f"{len(samples)} samples" if not bad else f"first: {bad[0]}")

    def q1_commutativity():
        witness = q1_commutativity_check(P, args.commutativity_degree, 1)
        record('q1_commutativity', witness is None,
               f"degree {args.commutativity_degree}" if witness is None
               else f"[{witness[0]}, {witness[1]}] = {witness[2]}")

    def q_half():
        deformed = q1_commutativity_check(P, 1, Fraction(1, 2))
        record('q_half_noncommutative', deformed is not None,
               f"[{deformed[0]}, {deformed[1]}] = {deformed[2]}" if deformed else 'all generators commute')

    def hopf_axioms():
        hopf = hopf_structure(P)
        report = hopf_axiom_check(args.degree, hopf, seed)
        first = report.first_counterexample
        record('hopf_axioms', not report.failures,
               f"{report.monomials} monomials up to degree {args.degree}" if first is None
               else f"{first.identity} on {first.word}: {first.residual}")
        record('relations_preserved', not report.relation_failures,
               f"{len(P.rules)} relations" if not report.relation_failures
               else '; '.join(f"{r} under {m}" for r, m, _ in report.relation_failures))
        record('counit_multiplicative', not report.counit_failures,
               'random pairs' if not report.counit_failures else f"first: {report.counit_failures[0]}")
        _, steps, result = hopf.antipode_evidence((P.alphabet.index('a'),))
        record('antipode_trace_a', result == NCPoly.constant(P.alphabet), f"{len(steps)} rewrite steps")

    guarded('critical_pairs', critical_pairs)
    samples = guarded('confluence', lambda: confluence_samples(P, seed, args.samples))
    if samples is not None:
        guarded('confluence', confluence)
        if P.alphabet.star is not None:
            guarded('star_compatibility', star_compatibility)
    guarded('q1_commutativity', q1_commutativity)
    guarded('q_half_noncommutative', q_half)

    if P.name == 'su_q2':
        guarded('hopf_axioms', hopf_axioms)
    else:
        logger.info(f"{P.name}: no Hopf structure, algebra-level checks only")

    emit_table(table, args, config)
    _fail(failures, f"présentation {P.name}")
