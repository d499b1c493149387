# src/utils/config_loader.py
import copy
import logging
import os
from typing import Any, Dict, Optional

import yaml

from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "..", "..", "config", "config.yaml")


def load_config(config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Load configuration: built-in defaults < config/config.yaml < ``config_path`` < ``overrides``.

    JSON files are accepted too, since they parse as YAML.
    """
    config = get_default_config()

    if os.path.exists(DEFAULT_CONFIG_PATH):
        config = merge_config(config, _read_file(DEFAULT_CONFIG_PATH))

    if config_path is not None:
        if not os.path.exists(config_path):
            logger.warning(f"Config file not found at {config_path}, using default configuration")
        else:
            config = merge_config(config, _read_file(config_path))
            logger.info(f"Configuration loaded from {config_path}")

    if overrides:
        config = merge_config(config, overrides)

    _validate(config)
    return config


def _read_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r") as file:
            loaded = yaml.safe_load(file)
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}")
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError(f"{path} must hold a mapping at top level")
    return loaded


def merge_config(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge; ``None`` values in ``update`` leave ``base`` untouched"""
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def _validate(config: Dict[str, Any]):
    workers = config["runtime"]["workers"]
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"runtime.workers must be an integer >= 1, got {workers!r}")
    bits = config["precision"]["bits"]
    if not isinstance(bits, int) or bits < 64:
        raise ConfigError(f"precision.bits must be an integer >= 64, got {bits!r}")


def get_default_config() -> Dict[str, Any]:
    """Return default configuration if config file is missing"""
    return {
        'project': {
            'name': 'Zeta Fractional Parts',
            'version': '1.0.0'
        },
        'defaults_version': 1,
        'data': {
            'zeros_path': None,
            'cache_suffix': '.zfpz',
            'output_dir': 'outputs'
        },
        'precision': {
            'bits': 160
        },
        'relations': {
            'max_norm': 20,
            'max_prime': 20,
            'max_q': 8,
            'max_a': 4,
            'tolerance': 1e-30
        },
        'density': {
            'resolution': 100,
            'series_terms': 1000,
            'truncation_threshold_log2': -70,
            'quadrature_resolution': 512
        },
        'landau': {
            'chunk_size': 2 ** 16,
            'degenerate_log_ratio_log2': -40,
            'extended_phase': False,
            'extended_phase_bits': 96
        },
        'diophantine': {
            'max_terms': 60,
            'min_remaining_bits': 16,
            'C': 1e-6,
            'epsilon': 0.1,
            'B': 5.0,
            'J': 15,
            'mu': 3.0,
            'exp_cutoff': 700.0
        },
        'empirical': {
            'resolution': 100,
            'use_asymptotic_count': False,
            'tail_noise_allowance': 1.2,
            'consistency_tolerance': None
        },
        'output': {
            'format': ['csv', 'json', 'pgm'],
            'diverging': False
        },
        'runtime': {
            'workers': 1
        },
        'logging': {
            'level': 'INFO',
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            'dir': 'logs',
            'file_enabled': True
        }
    }


def save_config(config: Dict[str, Any], config_path: str = "config/config.yaml"):
    """Save configuration to YAML file"""
    directory = os.path.dirname(config_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(config_path, 'w') as file:
        yaml.dump(config, file, default_flow_style=False)
    logger.info(f"Configuration saved to {config_path}")
