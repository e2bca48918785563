"""Configuration helpers.

Settings come from ``~/.config/omega-nil/omega-nil.yml`` merged with an
``omega-nil.yml`` in the working directory (later files win). Every getter
falls back to a documented default when its key is absent.
"""

import os
from pathlib import Path
from typing import Any

import yaml

from omega_nil.errors import ConfigError

RAY_LIMIT_ENV = "OMEGA_NIL_RAY_LIMIT"

DEFAULT_RAY_SYMBOL_LIMIT = 50_000_000
DEFAULT_MAX_CONNECTION_LENGTH = 1
DEFAULT_EXHAUSTIVE_THRESHOLD = 2**24
DEFAULT_SEARCH_BUDGET = 100_000
DEFAULT_CLOSURE_LIMIT = 1_000_000


def config_paths() -> list[Path]:
    """Return the config files consulted, lowest precedence first."""
    return [
        Path.home() / ".config" / "omega-nil" / "omega-nil.yml",
        Path.cwd() / "omega-nil.yml",
    ]


def load_merged_config() -> dict[str, Any]:
    """Read and merge every existing config file.

    Raises:
        ConfigError: If a file is not valid YAML or its top level is not a
            mapping.
    """
    merged: dict[str, Any] = {}
    for path in config_paths():
        if not path.is_file():
            continue
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {path}: {e}") from e
        if data is None:
            continue
        if not isinstance(data, dict):
            raise ConfigError(f"Top level of {path} must be a mapping")
        merged.update(data)
    return merged


def _positive_int(config: dict[str, Any], key: str, default: int) -> int:
    value = config.get(key)
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise ConfigError(f"'{key}' must be a positive integer, got {value!r}")
    return value


def get_ray_symbol_limit() -> int:
    """Largest number of symbols a single word expansion may materialize.

    The ``OMEGA_NIL_RAY_LIMIT`` environment variable takes precedence over the
    ``ray_symbol_limit`` key.
    """
    env_value = os.environ.get(RAY_LIMIT_ENV)
    if env_value:
        try:
            limit = int(env_value)
        except ValueError as e:
            raise ConfigError(
                f"{RAY_LIMIT_ENV} must be an integer, got '{env_value}'"
            ) from e
        if limit <= 0:
            raise ConfigError(f"{RAY_LIMIT_ENV} must be positive, got {limit}")
        return limit
    return _positive_int(
        load_merged_config(), "ray_symbol_limit", DEFAULT_RAY_SYMBOL_LIMIT
    )


def get_max_connection_length() -> int:
    return _positive_int(
        load_merged_config(), "max_connection_length", DEFAULT_MAX_CONNECTION_LENGTH
    )


def get_periodicity_bound() -> int | None:
    """Return the configured factor-complexity scan bound, if any."""
    config = load_merged_config()
    if config.get("periodicity_bound") is None:
        return None
    return _positive_int(config, "periodicity_bound", 1)


def get_exhaustive_threshold() -> int:
    return _positive_int(
        load_merged_config(), "exhaustive_threshold", DEFAULT_EXHAUSTIVE_THRESHOLD
    )


def get_search_budget() -> int:
    return _positive_int(load_merged_config(), "search_budget", DEFAULT_SEARCH_BUDGET)


def get_closure_limit() -> int:
    return _positive_int(load_merged_config(), "closure_limit", DEFAULT_CLOSURE_LIMIT)
