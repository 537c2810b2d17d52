"""Tests for config and utils modules."""

import test_bootstrap  # noqa: F401 (puts the project root on sys.path)
from test_bootstrap import CONFIG_DIR, SETTINGS_PATH
import json
import os
import unittest

import numpy as np
import pytest

from ncg_workbench.config import Config, ConfigError
from ncg_workbench.errors import ValidationError
from ncg_workbench.utils import (
    chunked, configure_threads, parallel_map, parse_int_list, weighted_sum, worker_count,
)


def write_settings(tmp_path, data) -> str:
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


# ===========================================================================
# Config loading
# ===========================================================================

class TestConfigLoad(unittest.TestCase):
    """Bundled settings and built-in defaults"""

    def test_bundled_settings(self):
        config = Config.load(SETTINGS_PATH)
        self.assertEqual(config.fuzzy['level_floor'], 8)
        self.assertEqual(config.fuzzy['gamma_rule'], 'polar')
        self.assertEqual(config.metric['sample_size'], 64)
        self.assertEqual(config.output['format'], 'csv')
        self.assertIsNone(config.parallel['threads'])
        self.assertEqual(config.config_dir, CONFIG_DIR)

    def test_defaults_match_bundled(self):
        bundled = Config.load(SETTINGS_PATH)
        default = Config.default()
        for section in ('fuzzy', 'metric', 'homology', 'calculus', 'clifford', 'hopf'):
            self.assertEqual(getattr(bundled, section), getattr(default, section))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            Config.load(os.path.join(CONFIG_DIR, 'nope.json'))

    def test_input_path_resolution(self):
        config = Config.default()
        path = config.input_path('algebras', 'm2')
        self.assertTrue(path.endswith(os.path.join('algebras', 'm2.yaml')))
        self.assertTrue(config.input_path('presentations', 'su_q2').endswith('su_q2.txt'))
        self.assertEqual(config.input_path('algebras', SETTINGS_PATH), SETTINGS_PATH)
        with self.assertRaises(ConfigError):
            config.input_path('algebras', 'quaternions')


class TestConfigFiles:
    """Partial files, environment substitution and validation"""

    def test_partial_file_merges_defaults(self, tmp_path):
        config = Config.load(write_settings(tmp_path, {'metric': {'tol': 1e-4}}))
        assert config.metric['tol'] == 1e-4
        assert config.metric['max_iterations'] == 2000
        assert config.config_dir == str(tmp_path)

    def test_env_substitution(self, tmp_path, monkeypatch):
        monkeypatch.setenv('NCG_TEST_SAMPLE', '12')
        config = Config.load(write_settings(tmp_path, {'metric': {'sample_size': '${NCG_TEST_SAMPLE}'}}))
        assert config.metric['sample_size'] == 12

    def test_unset_env_variable(self, tmp_path, monkeypatch):
        monkeypatch.delenv('NCG_TEST_UNSET', raising=False)
        path = write_settings(tmp_path, {'parallel': {'threads': '${NCG_TEST_UNSET}'}})
        with pytest.raises(ConfigError, match='NCG_TEST_UNSET'):
            Config.load(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'settings.json'
        path.write_text('{"fuzzy": ', encoding='utf-8')
        with pytest.raises(ConfigError):
            Config.load(str(path))

    def test_top_level_must_be_object(self, tmp_path):
        with pytest.raises(ConfigError):
            Config.load(write_settings(tmp_path, [1, 2]))

    @pytest.mark.parametrize("section,values", [
        ('fuzzy', {'level_floor': 0}),
        ('fuzzy', {'gamma_rule': 'simpson'}),
        ('metric', {'tol': 2}),
        ('metric', {'sample_size': 'many'}),
        ('metric', {'max_iterations': True}),
        ('homology', {'variant': 'de-rham'}),
        ('calculus', {'hodge_tol': 0}),
        ('parallel', {'threads': 0}),
        ('output', {'format': 'xml'}),
    ])
    def test_invalid_values(self, tmp_path, section, values):
        with pytest.raises(ConfigError):
            Config.load(write_settings(tmp_path, {section: values}))


# ===========================================================================
# Worker pool
# ===========================================================================

class TestWorkers:
    """NCG_THREADS, parallel.threads and the thread pool"""

    def teardown_method(self):
        configure_threads(None)

    def test_env_wins(self, monkeypatch):
        monkeypatch.setenv('NCG_THREADS', '3')
        configure_threads(5)
        assert worker_count() == 3

    def test_configured_cap(self, monkeypatch):
        monkeypatch.delenv('NCG_THREADS', raising=False)
        configure_threads(2)
        assert worker_count() == 2

    def test_default_is_bounded(self, monkeypatch):
        monkeypatch.delenv('NCG_THREADS', raising=False)
        assert 1 <= worker_count() <= 8

    @pytest.mark.parametrize("raw", ['0', '-2', 'four'])
    def test_bad_env_value(self, monkeypatch, raw):
        monkeypatch.setenv('NCG_THREADS', raw)
        with pytest.raises(ValidationError):
            worker_count()

    @pytest.mark.parametrize("threads", ['1', '4'])
    def test_parallel_map_keeps_order(self, monkeypatch, threads):
        monkeypatch.setenv('NCG_THREADS', threads)
        assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


# ===========================================================================
# Helpers
# ===========================================================================

class TestHelpers(unittest.TestCase):

    def test_parse_int_list(self):
        self.assertEqual(parse_int_list('2,4, 8'), [2, 4, 8])
        self.assertEqual(parse_int_list('16'), [16])
        for bad in ('', '2,,4', '2,x', None):
            with self.assertRaises(ValidationError):
                parse_int_list(bad)

    def test_chunked(self):
        parts = chunked(list(range(10)), 3)
        self.assertEqual([len(p) for p in parts], [4, 3, 3])
        self.assertEqual(sum(parts, []), list(range(10)))
        self.assertEqual(chunked([1, 2], 5), [[1], [2]])

    def test_weighted_sum(self):
        w = np.array([0.25, 0.75])
        v = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_allclose(weighted_sum(w, v), [2.5, 3.5])

    def test_weighted_sum_chunks_agree_up_to_rounding(self):
        rng = np.random.default_rng(3)
        w = rng.random(101)
        v = rng.normal(size=(101, 2, 2))
        whole = weighted_sum(w, v)
        parts = sum(weighted_sum(w[idx], v[idx]) for idx in chunked(np.arange(101), 4))
        np.testing.assert_allclose(parts, whole, rtol=0, atol=1e-12)
