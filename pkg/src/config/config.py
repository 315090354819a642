"""Configuration management for the hypergraph store."""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from ..models.errors import ConfigError

DEFAULTS: Dict[str, Any] = {
    "app": {"name": "ATCH hypergraph store", "version": "1.0.0"},
    "store": {
        "path": "atch_store.log",
        "confidence_policy": "latest",
        "snapshot_cache_size": 16,
    },
    "causal": {"default_depth": 3, "combination_mode": "noisy_or"},
    "conflict": {"theta": 0.9, "kappa_floor": 0.3, "max_partition_depth": 3},
    "query": {"force_bruteforce": False},
    "output": {"format": "table"},
    "logging": {"level": "WARNING", "format": "console"},
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """Configuration manager: built-in defaults, then config.yaml, then environment."""

    def __init__(self, config_file: Optional[str] = None, env_file: str = ".env"):
        """Initialize configuration from files."""
        self.config_file = config_file or os.getenv("ATCH_CONFIG", "config.yaml")
        self.env_file = env_file

        # Load environment variables
        load_dotenv(env_file)

        self._config = _merge(DEFAULTS, self._load_yaml_config())

    def _load_yaml_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file; a missing file means defaults only."""
        config_path = Path(self.config_file)
        if not config_path.exists():
            return {}

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid configuration file {config_path}: {e}") from e

        if not isinstance(loaded, dict):
            raise ConfigError(f"Configuration file {config_path} must contain a mapping")
        return loaded

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (supports dot notation)."""
        keys = key.split('.')
        value = self._config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def get_env(self, key: str, default: Any = None) -> Any:
        """Get environment variable."""
        return os.getenv(key, default)

    def get_store_path(self) -> str:
        """Get default store path (ATCH_STORE wins over config)."""
        return self.get_env('ATCH_STORE', self.get('store.path'))

    def get_confidence_policy(self) -> str:
        policy = self.get('store.confidence_policy', 'latest')
        if policy not in ('latest', 'noisy_or'):
            raise ConfigError(f"store.confidence_policy must be 'latest' or 'noisy_or', got {policy!r}")
        return policy

    def get_snapshot_cache_size(self) -> int:
        return int(self.get('store.snapshot_cache_size', 16))

    def get_output_format(self) -> str:
        """Get output format: table or canonical."""
        fmt = self.get_env('ATCH_OUTPUT_FORMAT', self.get('output.format', 'table'))
        if fmt not in ('table', 'canonical'):
            raise ConfigError(f"output format must be 'table' or 'canonical', got {fmt!r}")
        return fmt

    def get_log_level(self) -> str:
        """Get log level from configuration."""
        return self.get_env('LOG_LEVEL', self.get('logging.level', 'WARNING'))

    def get_log_format(self) -> str:
        return self.get('logging.format', 'console')

    def get_causal_config(self) -> Dict[str, Any]:
        """Get causal traversal defaults."""
        return self.get('causal', {})

    def get_conflict_config(self) -> Dict[str, Any]:
        """Get contradiction and resolution defaults."""
        return self.get('conflict', {})

    def get_force_bruteforce(self) -> bool:
        return bool(self.get('query.force_bruteforce', False))


# Global configuration instance
config = Config()
