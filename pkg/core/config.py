"""
Toolkit Configuration

Loads config/config.json and merges it over built-in defaults.

Author: Mohammed Ismail AbdElmageid
"""
import json
import logging
from dataclasses import dataclass, asdict, fields, replace
from pathlib import Path
from typing import Optional, Union

from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).parent.parent / "config" / "config.json"


@dataclass(frozen=True)
class ToolkitConfig:
    """Run-wide settings shared by the enumerators, densities and the CLI"""
    workers: int = 4
    chunk_size: int = 256
    euler_chunk_size: int = 4096
    precision_dps: int = 40
    generic_budget: int = 2_000_000
    checkpoints: int = 12
    min_checkpoints_log_power: int = 8
    fit_min_bound: float = 1000.0
    fit_correction: bool = True
    condition_limit: float = 1e12
    primes_cutoff: int = 100_000
    density_target: float = 1e-8
    tail_theta: float = 0.5
    audit_fraction: float = 0.01
    audit_max: int = 2000
    seed: int = 20240611
    completeness_probes: int = 100
    near_cutoff_tolerance: float = 1e-9

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1 or self.euler_chunk_size < 1:
            raise ConfigurationError("chunk sizes must be positive")
        if self.checkpoints < 1:
            raise ConfigurationError("checkpoint grid is empty")
        if not 0.0 < self.tail_theta < 1.0:
            raise ConfigurationError(f"tail_theta must lie in (0,1), got {self.tail_theta}")
        if not 0.0 <= self.audit_fraction <= 1.0:
            raise ConfigurationError(f"audit_fraction must lie in [0,1], got {self.audit_fraction}")

    def with_overrides(self, **overrides) -> "ToolkitConfig":
        """Return a copy with the non-None overrides applied (CLI flags)"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


def load_config(path: Optional[Union[str, Path]] = None) -> ToolkitConfig:
    """Load config.json, falling back to defaults for missing keys"""
    config_path = Path(path) if path is not None else CONFIG_PATH
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError:
        logger.warning("config.json not found at %s. Using defaults.", config_path)
        return ToolkitConfig()
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Error loading {config_path}: {e}") from e

    known = {f.name for f in fields(ToolkitConfig)}
    values = {}
    for key, value in raw.items():
        if key not in known:
            logger.warning("Ignoring unknown config key '%s'", key)
            continue
        values[key] = value
    try:
        config = ToolkitConfig(**values)
    except TypeError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e
    logger.debug("Loaded configuration from %s", config_path)
    return config
