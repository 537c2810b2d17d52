"""End-to-end tests for the command line (main.run)."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
from test_bootstrap import SETTINGS_PATH
import csv
import io
import json
import math

import pytest

from main import create_parser, run
from ncg_workbench import __version__


def cli(*argv) -> int:
    return run(['--config', SETTINGS_PATH, *argv])


def json_rows(capsys, *argv):
    code = cli('--output-format', 'json', *argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# ===========================================================================
# Parser and help
# ===========================================================================

class TestParser:

    def test_nested_subcommands(self):
        args = create_parser().parse_args(['homology', 'compute', '--algebra', 'm2', '--max-degree', '2'])
        assert (args.command, args.action) == ('homology', 'compute')
        assert args.side == 'homology'
        assert args.variant is None

    def test_version(self, capsys):
        assert cli('--version') == 0
        assert __version__ in capsys.readouterr().out

    def test_banner_without_command(self, capsys):
        assert cli() == 0
        assert 'NCG Workbench' in capsys.readouterr().out

    def test_help_command(self, capsys):
        assert cli('help') == 0
        assert 'hopf verify' in capsys.readouterr().out

    def test_group_without_action_shows_help(self, capsys):
        assert cli('fuzzy') == 0
        assert 'fuzzy table' in capsys.readouterr().out

    def test_argparse_rejects_unknown_choice(self):
        with pytest.raises(SystemExit) as info:
            cli('homology', 'compute', '--algebra', 'm2', '--max-degree', '2', '--variant', 'de-rham')
        assert info.value.code == 2


# ===========================================================================
# Fuzzy spheres
# ===========================================================================

class TestFuzzyCommands:

    def test_gamma_two(self, capsys):
        code, rows = json_rows(capsys, 'fuzzy', 'gamma', '--n', '2', '--level', '16', '--gamma-only')
        assert code == 0
        assert rows[0]['n'] == 2
        assert rows[0]['gamma'] == pytest.approx(3 * math.pi / 8, abs=1e-6)
        assert rows[0]['gh_bound'] is None

    def test_gamma_with_bound(self, capsys):
        code, rows = json_rows(capsys, 'fuzzy', 'gamma', '--n', '2,4')
        assert code == 0
        assert [r['n'] for r in rows] == [2, 4]
        for r in rows:
            assert r['gh_bound'] >= r['gamma']
        assert rows[1]['gamma'] < rows[0]['gamma']

    def test_gamma_csv_header(self, capsys):
        assert cli('fuzzy', 'gamma', '--n', '2', '--gamma-only') == 0
        reader = csv.reader(io.StringIO(capsys.readouterr().out))
        assert next(reader) == ['n', 'level', 'gamma', 'defect_max', 'gh_bound']

    def test_gamma_svg(self, capsys):
        assert cli('--output-format', 'svg', 'fuzzy', 'gamma', '--n', '2,3', '--gamma-only') == 0
        out = capsys.readouterr().out
        assert out.startswith('<svg')
        assert out.rstrip().endswith('</svg>')

    def test_plot_file(self, capsys, tmp_path):
        plot = tmp_path / 'gamma.svg'
        assert cli('fuzzy', 'gamma', '--n', '2,3', '--gamma-only', '--plot', str(plot), '--log') == 0
        assert plot.read_text(encoding='utf-8').startswith('<svg')

    def test_table(self, capsys):
        code, rows = json_rows(capsys, 'fuzzy', 'table', '--n', '1,2,3')
        assert code == 0
        assert len(rows) == 3
        for r in rows:
            assert r['kernel_mass'] == pytest.approx(1.0, abs=1e-9)
        assert rows[0]['x3_defect'] == 0.0
        assert all(r['radius_error'] < 1e-12 for r in rows[1:])

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / 'table.csv'
        assert cli('--output', str(target), 'fuzzy', 'table', '--n', '2') == 0
        assert capsys.readouterr().out == ''
        assert target.read_text(encoding='utf-8').startswith('n,level,')

    @pytest.mark.parametrize("n", ['2,x', '0', '', '1'])
    def test_invalid_dimensions(self, capsys, n):
        assert cli('fuzzy', 'gamma', '--n', n) == 2
        assert capsys.readouterr().err


# ===========================================================================
# Metric
# ===========================================================================

class TestMetricCommand:

    def test_equal_states(self, capsys):
        code, rows = json_rows(capsys, 'metric', 'states', '--n', '2', '--states', 'north', 'north',
                               '--sample', '8')
        assert code == 0
        assert rows[0]['distance'] == pytest.approx(0.0, abs=1e-9)

    def test_unknown_state(self, capsys):
        assert cli('metric', 'states', '--n', '2', '--states', 'north', 'east') == 2

    def test_bad_coherent_parameters(self, capsys):
        assert cli('metric', 'states', '--n', '2', '--states', 'coherent:1', 'north') == 2


# ===========================================================================
# Homology and calculus
# ===========================================================================

class TestAlgebraCommands:

    def test_homology_of_complex_numbers(self, capsys):
        code, rows = json_rows(capsys, 'homology', 'compute', '--algebra', 'complex', '--max-degree', '4')
        assert code == 0
        assert rows[0]['dims'] == [1, 0, 0, 0, 0]
        assert rows[0]['variant'] == 'hochschild'

    def test_cyclic_homology(self, capsys):
        code, rows = json_rows(capsys, 'homology', 'compute', '--algebra', 'complex', '--max-degree', '3',
                               '--variant', 'cyclic')
        assert code == 0
        assert rows[0]['dims'] == [1, 0, 1, 0]

    def test_twisted_without_automorphism(self, capsys):
        assert cli('homology', 'compute', '--algebra', 'm2', '--max-degree', '1',
                   '--variant', 'twisted-hochschild') == 2

    def test_missing_algebra(self, capsys):
        assert cli('homology', 'compute', '--algebra', 'octonions', '--max-degree', '1') == 2

    def test_hodge_two_point(self, capsys):
        code, rows = json_rows(capsys, 'calculus', 'hodge', '--calculus', 'two_point')
        assert code == 0
        assert [r['harmonic'] for r in rows] == [1, 0, 1]
        assert [r['cohomology'] for r in rows] == [1, 0, 1]
        for r in rows:
            assert r['harmonic'] + r['exact'] + r['coexact'] == r['dim']

    def test_hodge_needs_input(self, capsys):
        assert cli('calculus', 'hodge') == 2

    def test_derivations_of_m2(self, capsys):
        assert cli('calculus', 'derivations', '--algebra', 'm2') == 0
        captured = capsys.readouterr()
        assert 'dim Der(m2) = 3' in captured.err
        rows = list(csv.DictReader(io.StringIO(captured.out)))
        assert {r['derivation'] for r in rows} == {'0', '1', '2'}


# ===========================================================================
# Clifford and Hopf
# ===========================================================================

class TestCheckCommands:

    def test_clifford_k2(self, capsys):
        code, rows = json_rows(capsys, 'clifford', 'check', '--k', '2', '--examples')
        assert code == 0
        results = {r['check']: r for r in rows}
        assert results['anticommutator']['result'] == 'PASS'
        assert results['anticommutator']['residual'] == 0
        assert results['monomial_span']['detail'] == 'rank 16 of 16'
        assert all(r['result'] == 'PASS' for r in rows)

    def test_clifford_size_guard(self, capsys):
        assert cli('clifford', 'check', '--k', '7') == 2

    @pytest.mark.parametrize("name", ['su_q2', 'sl_q2'])
    def test_hopf_presets(self, capsys, name):
        code, rows = json_rows(capsys, 'hopf', 'verify', '--preset', name, '--degree', '2', '--samples', '10')
        assert code == 0
        checks = {r['check'] for r in rows}
        assert 'critical_pairs' in checks
        assert ('hopf_axioms' in checks) == (name == 'su_q2')

    def test_hopf_degree_guard(self, capsys):
        assert cli('hopf', 'verify', '--degree', '6') == 2

    def test_non_confluent_presentation(self, capsys, tmp_path):
        path = tmp_path / 'broken.txt'
        path.write_text("name: broken\nalphabet: x y\ny x -> x\ny y -> x x\n", encoding='utf-8')
        code = cli('hopf', 'verify', '--presentation', str(path), '--samples', '5')
        assert code == 3
        captured = capsys.readouterr()
        assert 'critical_pairs,FAIL' in captured.out
        assert captured.err

    def test_malformed_presentation(self, capsys, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text("alphabet: x y\ny x -> x +\n", encoding='utf-8')
        assert cli('hopf', 'verify', '--presentation', str(path)) == 2
        assert 'bad.txt:2' in capsys.readouterr().err


# ===========================================================================
# Environment and configuration
# ===========================================================================

class TestEnvironment:

    def test_bad_thread_count(self, capsys, monkeypatch):
        monkeypatch.setenv('NCG_THREADS', 'zero')
        assert cli('clifford', 'check', '--k', '1') == 2

    def test_single_thread(self, capsys, monkeypatch):
        monkeypatch.setenv('NCG_THREADS', '1')
        code, rows = json_rows(capsys, 'homology', 'compute', '--algebra', 'c2', '--max-degree', '2')
        assert code == 0
        assert rows[0]['dims'] == [2, 0, 0]

    def test_missing_config(self, capsys, tmp_path):
        assert run(['--config', str(tmp_path / 'none.json'), 'clifford', 'check', '--k', '1']) == 2


# ===========================================================================
# Unexpected failures
# ===========================================================================

class TestUnexpectedFailures:

    def test_crashing_check_becomes_fail_row(self, capsys, monkeypatch):
        def explode(*args, **kwargs):
            raise RuntimeError("boom")

        monkeypatch.setattr('ncg_workbench.cli_commands.q1_commutativity_check', explode)
        code = cli('hopf', 'verify', '--preset', 'sl_q2', '--degree', '1', '--samples', '5')
        assert code == 3
        out = capsys.readouterr().out
        assert 'q1_commutativity,FAIL,RuntimeError: boom' in out
        assert 'critical_pairs,PASS' in out

    def test_unexpected_error_is_not_a_traceback(self, capsys, monkeypatch):
        def explode(*args, **kwargs):
            raise RuntimeError("boom")

        monkeypatch.setattr('ncg_workbench.cli_commands.cmd_clifford_check', explode)
        assert cli('clifford', 'check', '--k', '1') == 1
        assert 'boom' in capsys.readouterr().err
