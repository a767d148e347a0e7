"""Configuration loader for PCQA.

Loads configuration from TOML files or plain key=value files.
Environment variables can override any configuration value, and
command-line flags override both (applied by the CLI through ``overrides``).
"""

import logging
import os
import tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from pcqa.config.schema import PcqaConfig
from pcqa.exceptions import UsageError

logger = logging.getLogger(__name__)

ENV_PREFIX = "PCQA"


def get_config_search_paths() -> list[Path]:
    """Get the list of paths to search for configuration files.

    Returns paths in priority order (first found wins):
    1. ./pcqa.toml (project root)
    2. ~/.config/pcqa/pcqa.toml (user config)
    3. /etc/pcqa/pcqa.toml (system config)
    """
    return [
        Path.cwd() / "pcqa.toml",
        Path.home() / ".config" / "pcqa" / "pcqa.toml",
        Path("/etc/pcqa/pcqa.toml"),
    ]


def find_config_file() -> Path | None:
    """Find the first existing config file from search paths."""
    for path in get_config_search_paths():
        if path.exists() and path.is_file():
            logger.debug("Found config file: %s", path)
            return path
    return None


def load_toml_file(path: Path) -> dict[str, Any]:
    """Load a TOML file and return its contents as a dictionary."""
    with open(path, "rb") as f:
        return tomllib.load(f)


def _coerce_value(value: str) -> Any:
    """Turn comma-separated text into a list; leave scalars for pydantic."""
    if "," in value:
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


def _set_dotted(config_dict: dict[str, Any], key: str, value: Any) -> None:
    """Assign ``section.key`` into a nested dictionary."""
    if "." in key:
        section, field = key.split(".", 1)
        config_dict.setdefault(section, {})[field] = value
    else:
        config_dict[key] = value


def parse_kv_file(path: Path) -> dict[str, Any]:
    """Parse a plain-text key=value config file into a nested dictionary.

    Supports:
    - section.key=value
    - key="quoted value"
    - comma-separated lists (a,b,c)
    - # comments and empty lines
    """
    config_dict: dict[str, Any] = {}

    with open(path) as f:
        for line in f:
            line = line.strip()

            if not line or line.startswith("#"):
                continue

            if "=" not in line:
                logger.warning("Ignoring config line without '=': %s", line)
                continue

            key, value = line.split("=", 1)
            key = key.strip()
            value = value.strip()

            if (value.startswith('"') and value.endswith('"')) or (
                value.startswith("'") and value.endswith("'")
            ):
                value = value[1:-1]

            _set_dotted(config_dict, key, _coerce_value(value))

    return config_dict


def load_config_file(path: Path) -> dict[str, Any]:
    """Load a config file, choosing the parser by extension."""
    if path.suffix == ".toml":
        return load_toml_file(path)
    return parse_kv_file(path)


def apply_env_overrides(config_dict: dict[str, Any], prefix: str = ENV_PREFIX) -> None:
    """Apply environment variable overrides to the configuration dictionary.

    Every field of every section is addressable:
    - PCQA_POOLING_GAMMA -> config_dict["pooling"]["gamma"]
    - PCQA_RUNTIME_WORKERS -> config_dict["runtime"]["workers"]

    Note: This modifies config_dict in place.
    """
    for section, section_field in PcqaConfig.model_fields.items():
        section_model = section_field.annotation
        for key in section_model.model_fields:  # type: ignore[union-attr]
            env_var = f"{prefix}_{section.upper()}_{key.upper()}"
            value = os.environ.get(env_var)
            if value is not None:
                config_dict.setdefault(section, {})[key] = _coerce_value(value)


def merge_overrides(config_dict: dict[str, Any], overrides: dict[str, Any]) -> None:
    """Merge dotted ``section.key`` overrides (from CLI flags); None is skipped."""
    for key, value in overrides.items():
        if value is not None:
            _set_dotted(config_dict, key, value)


def load_config(
    config_file: Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> PcqaConfig:
    """Load configuration from file, environment and flag overrides.

    Args:
        config_file: Optional path to a config file. If not provided,
                     searches default locations.
        overrides: Dotted ``section.key`` values taking precedence over everything.

    Returns:
        PcqaConfig instance with all settings loaded.

    Raises:
        UsageError: If the file is missing or values fail validation.
    """
    config_dict: dict[str, Any] = {}

    if config_file is not None and not config_file.exists():
        raise UsageError(f"Config file not found: {config_file}")

    if config_file is None:
        config_file = find_config_file()

    if config_file:
        logger.info("Loading config from: %s", config_file)
        config_dict = load_config_file(config_file)
    else:
        logger.debug("No config file found, using defaults with env overrides")

    apply_env_overrides(config_dict)
    merge_overrides(config_dict, overrides or {})

    try:
        return PcqaConfig(**config_dict)
    except ValidationError as e:
        raise UsageError(f"Invalid configuration: {e}") from e
