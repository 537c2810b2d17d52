"""
Configuration management module for ncg_workbench.
Handles loading and validation of JSON configuration, including environment variable substitution.
"""

import os
import re
import json
import copy
from typing import Dict, Any, Optional
from .constants import (
    DEFAULT_CONFIG_PATH, DEFAULT_OUTPUT_FORMAT, OUTPUT_FORMATS, HOMOLOGY_VARIANTS, QUADRATURE_RULES,
    DEFAULT_LEVEL_FLOOR, DEFAULT_METRIC_TOL, DEFAULT_METRIC_SAMPLE,
    DEFAULT_MAX_ITERATIONS, DEFAULT_STALL_WINDOW, CHAIN_SIZE_LIMIT,
    HARMONIC_RTOL, HODGE_ORTHOGONALITY_TOL, MAX_CLIFFORD_GENERATORS, MAX_SPIN_K,
    MAX_HOPF_DEGREE, REWRITE_STEP_LIMIT,
)
from .logger import get_logger

logger = get_logger('config')


class ConfigError(Exception):
    """Exception raised for configuration errors."""
    pass


DEFAULTS: Dict[str, Dict[str, Any]] = {
    'fuzzy': {
        'level_floor': DEFAULT_LEVEL_FLOOR,
        'gamma_rule': 'polar',
    },
    'metric': {
        'sample_size': DEFAULT_METRIC_SAMPLE,
        'tol': DEFAULT_METRIC_TOL,
        'max_iterations': DEFAULT_MAX_ITERATIONS,
        'stall_window': DEFAULT_STALL_WINDOW,
        'seed': 0,
    },
    'homology': {
        'size_limit': CHAIN_SIZE_LIMIT,
        'variant': 'hochschild',
    },
    'calculus': {
        'harmonic_rtol': HARMONIC_RTOL,
        'hodge_tol': HODGE_ORTHOGONALITY_TOL,
    },
    'clifford': {
        'max_generators': MAX_CLIFFORD_GENERATORS,
        'max_spin_k': MAX_SPIN_K,
    },
    'hopf': {
        'max_degree': MAX_HOPF_DEGREE,
        'step_limit': REWRITE_STEP_LIMIT,
    },
    'parallel': {
        'threads': None,
    },
    'output': {
        'format': DEFAULT_OUTPUT_FORMAT,
        'directory': '.',
    },
}


class Config:
    """Main configuration class for ncg_workbench."""

    def __init__(self, config_data: Dict[str, Any], config_dir: str):
        """
        Initialize configuration from parsed JSON data.

        Args:
            config_data: Dictionary containing configuration
            config_dir: Directory containing config files (bundled inputs live here)
        """
        self.config_dir = config_dir
        merged = copy.deepcopy(DEFAULTS)
        for section, values in config_data.items():
            if isinstance(values, dict) and section in merged:
                merged[section].update(values)
            else:
                merged[section] = values

        self.fuzzy = merged['fuzzy']
        self.metric = merged['metric']
        self.homology = merged['homology']
        self.calculus = merged['calculus']
        self.clifford = merged['clifford']
        self.hopf = merged['hopf']
        self.parallel = merged['parallel']
        self.output = merged['output']

    @classmethod
    def load(cls, config_path: str = DEFAULT_CONFIG_PATH) -> 'Config':
        """
        Load configuration from JSON file.

        Args:
            config_path: Path to configuration file

        Returns:
            Config object

        Raises:
            ConfigError: If configuration loading fails
        """
        if not os.path.exists(config_path):
            raise ConfigError(f"Configuration file not found: {config_path}")

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Failed to parse JSON: {e}")
        except Exception as e:
            raise ConfigError(f"Failed to load configuration: {e}")

        if not isinstance(config_data, dict):
            raise ConfigError("Top-level JSON value must be an object")

        config_data = cls._substitute_env_vars(config_data)
        config_dir = os.path.dirname(os.path.abspath(config_path))

        config = cls(config_data, config_dir)
        config._validate()
        logger.debug(f"Configuration loaded from {config_path}")
        return config

    @classmethod
    def default(cls, config_dir: Optional[str] = None) -> 'Config':
        """Built-in defaults, used when no settings file is available."""
        if config_dir is None:
            config_dir = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'config')
        config = cls({}, config_dir)
        config._validate()
        return config

    @staticmethod
    def _substitute_env_vars(data: Any) -> Any:
        """
        Recursively substitute environment variables in configuration.
        Replaces ${VAR_NAME} with environment variable value.

        Args:
            data: Configuration data (dict, list, or string)

        Returns:
            Data with environment variables substituted
        """
        if isinstance(data, dict):
            return {k: Config._substitute_env_vars(v) for k, v in data.items()}
        elif isinstance(data, list):
            return [Config._substitute_env_vars(item) for item in data]
        elif isinstance(data, str):
            pattern = r'\$\{([^}]+)\}'
            matches = re.findall(pattern, data)

            for var_name in matches:
                env_value = os.environ.get(var_name)
                if env_value:
                    data = data.replace(f'${{{var_name}}}', env_value)
                # Unset variables stay as placeholders and fail validation

            return data
        else:
            return data

    @staticmethod
    def _as_number(section: str, key: str, value: Any, kind=float) -> Any:
        if isinstance(value, str):
            if value.startswith('${'):
                raise ConfigError(f"{section}.{key}: environment variable not set ({value})")
            try:
                value = kind(value)
            except ValueError:
                raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
        return kind(value)

    def _validate(self):
        """Validate configuration values (and coerce substituted strings)."""
        self.fuzzy['level_floor'] = self._as_number('fuzzy', 'level_floor', self.fuzzy['level_floor'], int)
        if self.fuzzy['level_floor'] < 1:
            raise ConfigError("fuzzy.level_floor must be >= 1")
        if self.fuzzy['gamma_rule'] not in QUADRATURE_RULES:
            raise ConfigError(f"fuzzy.gamma_rule must be one of {QUADRATURE_RULES}")

        for key in ('sample_size', 'max_iterations', 'stall_window', 'seed'):
            self.metric[key] = self._as_number('metric', key, self.metric[key], int)
        if self.metric['sample_size'] < 1 or self.metric['max_iterations'] < 1:
            raise ConfigError("metric.sample_size and metric.max_iterations must be >= 1")
        self.metric['tol'] = self._as_number('metric', 'tol', self.metric['tol'])
        if not 0 < self.metric['tol'] < 1:
            raise ConfigError("metric.tol must lie in (0, 1)")

        self.homology['size_limit'] = self._as_number('homology', 'size_limit', self.homology['size_limit'], int)
        if self.homology['variant'] not in HOMOLOGY_VARIANTS:
            raise ConfigError(f"homology.variant must be one of {HOMOLOGY_VARIANTS}")

        for key in ('harmonic_rtol', 'hodge_tol'):
            self.calculus[key] = self._as_number('calculus', key, self.calculus[key])
            if not 0 < self.calculus[key] < 1:
                raise ConfigError(f"calculus.{key} must lie in (0, 1)")

        for key in ('max_generators', 'max_spin_k'):
            self.clifford[key] = self._as_number('clifford', key, self.clifford[key], int)
        for key in ('max_degree', 'step_limit'):
            self.hopf[key] = self._as_number('hopf', key, self.hopf[key], int)

        threads = self.parallel.get('threads')
        if threads is not None:
            self.parallel['threads'] = self._as_number('parallel', 'threads', threads, int)
            if self.parallel['threads'] < 1:
                raise ConfigError("parallel.threads must be >= 1")

        if self.output.get('format') not in OUTPUT_FORMATS:
            raise ConfigError(f"output.format must be one of {OUTPUT_FORMATS}")

    def input_path(self, kind: str, name: str) -> str:
        """
        Resolve a bundled input (e.g. kind='algebras', name='m2') under the config directory.

        Plain paths that exist are returned unchanged.
        """
        if os.path.exists(name):
            return name
        base = os.path.join(self.config_dir, kind)
        for ext in ('', '.yaml', '.yml', '.txt'):
            candidate = os.path.join(base, name + ext)
            if os.path.isfile(candidate):
                return candidate
        raise ConfigError(f"Input not found: {name} (looked in {base})")

