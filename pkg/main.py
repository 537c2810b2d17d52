"""
Main entry point for the ncg_workbench CLI.
Parses arguments, loads configuration and routes to the command handlers.

Exit codes:
- 0 success
- 2 invalid input (arguments, configuration, input files, size guards)
- 3 a verified property failed
"""

import argparse
import logging
import os
import sys

from ncg_workbench import __version__
from ncg_workbench.config import Config, ConfigError
from ncg_workbench.constants import (
    CONFLUENCE_SAMPLES, DEFAULT_COMMUTATIVITY_DEGREE, DEFAULT_CONFIG_PATH, DEFAULT_HOPF_DEGREE,
    EXIT_OK, EXIT_PROPERTY, EXIT_VALIDATION, HOMOLOGY_SIDES, HOMOLOGY_VARIANTS, OUTPUT_FORMATS,
)
from ncg_workbench.errors import PropertyCheckError, ValidationError, WorkbenchError
from ncg_workbench.banner import display_banner, display_help, display_short_help
from ncg_workbench.logger import set_level
from ncg_workbench.utils import configure_threads, parse_int_list, worker_count
from ncg_workbench import cli_commands


def create_parser():
    """Create argument parser with nested subcommands."""
    parser = argparse.ArgumentParser(
        prog='ncg-workbench',
        description=f'NCG Workbench v{__version__} - Noncommutative geometry batch computations',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        add_help=False
    )

    parser.add_argument(
        '--config',
        default=DEFAULT_CONFIG_PATH,
        help=f'Path to configuration file (default: {DEFAULT_CONFIG_PATH})'
    )
    parser.add_argument(
        '--output-format',
        choices=OUTPUT_FORMATS,
        help='Output format (default: output.format from the configuration)'
    )
    parser.add_argument(
        '--output', '-o',
        help='Write the result to this file instead of stdout'
    )
    parser.add_argument(
        '--seed',
        type=int,
        help='Seed for randomized checks (default: metric.seed)'
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Enable verbose logging'
    )
    parser.add_argument(
        '--log-file',
        help='Also write the log to this file'
    )
    parser.add_argument(
        '--help', '-h',
        action='store_true',
        help='Show this help message'
    )
    parser.add_argument(
        '--version',
        action='store_true',
        help='Show version information'
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')
    subparsers.add_parser('help', help='Show the detailed help')

    # ===== FUZZY COMMANDS =====
    fuzzy_parser = subparsers.add_parser('fuzzy', help='Fuzzy spheres and Berezin quantization')
    fuzzy_sub = fuzzy_parser.add_subparsers(dest='action')

    table_parser = fuzzy_sub.add_parser(
        'table',
        help='Identity residuals, kernel mass and x3 defect per n',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py fuzzy table --n 1,2,3,4
  python main.py --output-format json fuzzy table --n 8 --level 16
        """
    )
    table_parser.add_argument('--n', required=True, help='Comma-separated dimensions, e.g. 2,4,8')
    table_parser.add_argument('--level', type=int, help='Quadrature level (default: max(level_floor, n))')
    table_parser.add_argument('--log', action='store_true', help='Log scale for SVG output')

    gamma_parser = fuzzy_sub.add_parser(
        'gamma',
        help='gamma_n, candidate defects and the distance bound per n',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py fuzzy gamma --n 2,4,8,16,32,64
  python main.py fuzzy gamma --n 2 --level 16
  python main.py fuzzy gamma --n 2,4,8 --plot gamma.svg --log
        """
    )
    gamma_parser.add_argument('--n', required=True, help='Comma-separated dimensions (n >= 2)')
    gamma_parser.add_argument('--level', type=int, help='Quadrature level (default: max(16, n))')
    gamma_parser.add_argument('--plot', help='Also write an SVG line chart to this file')
    gamma_parser.add_argument('--log', action='store_true', help='Log scale for the chart')
    gamma_parser.add_argument('--gamma-only', action='store_true', help='Skip the candidate defects')

    # ===== METRIC COMMAND =====
    metric_parser = subparsers.add_parser('metric', help='Quantum metrics on state spaces')
    metric_sub = metric_parser.add_subparsers(dest='action')
    states_parser = metric_sub.add_parser(
        'states',
        help='Distance between two states',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py metric states --n 2 --states north south
  python main.py metric states --n 2,3 --states north mixed --refine
  python main.py metric states --n 3 --states coherent:1.0,0.0 random --seed 7
        """
    )
    states_parser.add_argument('--n', required=True, help='Comma-separated dimensions')
    states_parser.add_argument('--states', nargs=2, default=['north', 'south'], metavar=('A', 'B'),
                               help='north, south, mixed, random or coherent:THETA,PHI')
    states_parser.add_argument('--sample', type=int, help='Group sample size (default: metric.sample_size)')
    states_parser.add_argument('--tol', type=float, help='Solver tolerance (default: metric.tol)')
    states_parser.add_argument('--refine', action='store_true', help='Double the sample until the value settles')

    # ===== HOMOLOGY COMMAND =====
    homology_parser = subparsers.add_parser('homology', help='Hochschild and cyclic (co)homology')
    homology_sub = homology_parser.add_subparsers(dest='action')
    compute_parser = homology_sub.add_parser(
        'compute',
        help='(Co)homology dimensions of a finite algebra',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py homology compute --algebra complex --max-degree 4
  python main.py homology compute --algebra m2 --max-degree 2 --variant cyclic
  python main.py homology compute --algebra c2_swap --max-degree 2 --variant twisted-hochschild
        """
    )
    compute_parser.add_argument('--algebra', required=True, help='Algebra file or bundled name')
    compute_parser.add_argument('--max-degree', type=int, required=True, help='Highest degree N')
    compute_parser.add_argument('--variant', choices=HOMOLOGY_VARIANTS, help='Default: homology.variant')
    compute_parser.add_argument('--side', choices=HOMOLOGY_SIDES, default='homology')

    # ===== CALCULUS COMMANDS =====
    calculus_parser = subparsers.add_parser('calculus', help='Differential calculi')
    calculus_sub = calculus_parser.add_subparsers(dest='action')
    hodge_parser = calculus_sub.add_parser(
        'hodge',
        help='Hodge decomposition of a finite calculus',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py calculus hodge --calculus two_point
  python main.py calculus hodge --algebra c2 --max-degree 2
        """
    )
    hodge_parser.add_argument('--calculus', help='Graded calculus file or bundled name')
    hodge_parser.add_argument('--algebra', help='Use the universal calculus of this algebra')
    hodge_parser.add_argument('--max-degree', type=int, default=2, help='Truncation degree (default: 2)')

    derivations_parser = calculus_sub.add_parser(
        'derivations',
        help='Basis of the derivations of an algebra',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py calculus derivations --algebra m2
        """
    )
    derivations_parser.add_argument('--algebra', required=True, help='Algebra file or bundled name')

    # ===== CLIFFORD COMMAND =====
    clifford_parser = subparsers.add_parser('clifford', help='Clifford algebras and Dirac operators')
    clifford_sub = clifford_parser.add_subparsers(dest='action')
    check_parser = clifford_sub.add_parser(
        'check',
        help='Check the spin representation of Cl(C^2k)',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py clifford check --k 2
  python main.py clifford check --k 1 --examples
        """
    )
    check_parser.add_argument('--k', type=int, default=2, help='Spin representation on C^(2^k)')
    check_parser.add_argument('--examples', action='store_true', help="Also check Dirac's matrices and the 2x2 operators")

    # ===== HOPF COMMAND =====
    hopf_parser = subparsers.add_parser('hopf', help='Rewriting and Hopf axioms')
    hopf_sub = hopf_parser.add_subparsers(dest='action')
    verify_parser = hopf_sub.add_parser(
        'verify',
        help='Rewriting checks and Hopf axioms',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py hopf verify --preset su_q2 --degree 3
  python main.py hopf verify --preset sl_q2
  python main.py hopf verify --presentation config/presentations/su_q2.txt
        """
    )
    verify_parser.add_argument('--preset', choices=('su_q2', 'sl_q2'), default='su_q2')
    verify_parser.add_argument('--presentation', help='Presentation file (overrides --preset)')
    verify_parser.add_argument('--degree', type=int, default=DEFAULT_HOPF_DEGREE,
                               help=f'Monomial degree for the Hopf axioms (default: {DEFAULT_HOPF_DEGREE})')
    verify_parser.add_argument('--commutativity-degree', type=int, default=DEFAULT_COMMUTATIVITY_DEGREE,
                               help=f'Degree for the q=1 commutativity check (default: {DEFAULT_COMMUTATIVITY_DEGREE})')
    verify_parser.add_argument('--samples', type=int, default=CONFLUENCE_SAMPLES,
                               help=f'Random polynomials for the confluence test (default: {CONFLUENCE_SAMPLES})')

    return parser


def load_config(path: str) -> Config:
    """The settings file; built-in defaults when the default path is absent."""
    if path == DEFAULT_CONFIG_PATH and not os.path.exists(path):
        return Config.default()
    return Config.load(path)


def _n_list(text: str):
    values = parse_int_list(text)
    if any(n < 1 for n in values):
        raise ValidationError(f"dimensions must be positive, got {text!r}")
    return values


def run(argv=None) -> int:
    """Run the CLI on argv and return the exit code."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.version:
        print(f"NCG Workbench v{__version__}")
        print("Fuzzy spheres, quantum metrics, cyclic homology, calculi, Clifford and Hopf checks")
        return EXIT_OK

    if args.help or args.command in (None, 'help') or not getattr(args, 'action', 'help'):
        if args.command == 'help':
            display_help()
        elif args.help or args.command is not None:
            display_short_help()
        else:
            display_banner()
        return EXIT_OK

    if args.verbose or args.log_file:
        set_level(logging.DEBUG if args.verbose else logging.INFO, args.log_file)

    try:
        config = load_config(args.config)
        configure_threads(config.parallel.get('threads'))
        worker_count()
    except ConfigError as e:
        print(f"❌ Erreur de configuration : {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_VALIDATION

    # Route to appropriate command handler
    try:
        if hasattr(args, 'n'):
            args.n = _n_list(args.n)
        route = (args.command, args.action)

        if route == ('fuzzy', 'table'):
            cli_commands.cmd_fuzzy_table(args, config)

        elif route == ('fuzzy', 'gamma'):
            cli_commands.cmd_fuzzy_gamma(args, config)

        elif route == ('metric', 'states'):
            cli_commands.cmd_metric_states(args, config)

        elif route == ('homology', 'compute'):
            cli_commands.cmd_homology_compute(args, config)

        elif route == ('calculus', 'hodge'):
            cli_commands.cmd_calculus_hodge(args, config)

        elif route == ('calculus', 'derivations'):
            cli_commands.cmd_calculus_derivations(args, config)

        elif route == ('clifford', 'check'):
            cli_commands.cmd_clifford_check(args, config)

        elif route == ('hopf', 'verify'):
            cli_commands.cmd_hopf_verify(args, config)

        else:
            print(f"❌ Commande inconnue : {' '.join(route)}", file=sys.stderr)
            display_short_help()
            return EXIT_VALIDATION

    except (ValidationError, ConfigError) as e:
        print(f"❌ Entrée invalide : {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except PropertyCheckError as e:
        print(f"❌ Vérification échouée : {e}", file=sys.stderr)
        return EXIT_PROPERTY
    except KeyboardInterrupt:
        print("\n\n⚠️ Interrompu par l'utilisateur", file=sys.stderr)
        return 1
    except WorkbenchError as e:
        print(f"❌ Erreur : {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"❌ Erreur fatale : {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return 1

    return EXIT_OK


def main():
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
