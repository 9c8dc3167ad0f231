"""
Configuration management for the triple-well toolkit.
Environment-backed settings with validation; run parameters live in RunConfig.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values

from .errors import ConfigError


class Settings:
    """Process-wide settings loaded from environment variables."""

    def __init__(self):
        # Logging Configuration
        self.log_level: str = os.getenv("TRIWELL_LOG_LEVEL", "INFO").upper()
        self.log_dir: str = os.getenv("TRIWELL_LOG_DIR", "./logs")

        # Run-config file (flat key=value)
        self.config_path: Optional[str] = os.getenv("TRIWELL_CONFIG") or None

        # Execution
        self.sweep_workers: int = int(os.getenv("TRIWELL_SWEEP_WORKERS", "1"))

        # Numerical defaults
        self.n_points: int = int(os.getenv("TRIWELL_N_POINTS", "2001"))
        self.series_terms: int = int(os.getenv("TRIWELL_SERIES_TERMS", "30"))
        self.quad_limit: int = int(os.getenv("TRIWELL_QUAD_LIMIT", "400"))

        self._validate()

    def _validate(self):
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if self.log_level not in valid_levels:
            raise ValueError(f"Invalid log level: {self.log_level}")

        if self.sweep_workers < 1:
            raise ValueError("TRIWELL_SWEEP_WORKERS must be at least 1")

        if self.n_points < 201 or self.n_points % 2 == 0:
            raise ValueError("TRIWELL_N_POINTS must be odd and at least 201")

        if self.series_terms < 0:
            raise ValueError("TRIWELL_SERIES_TERMS must be non-negative")

        if self.quad_limit < 50:
            raise ValueError("TRIWELL_QUAD_LIMIT must be at least 50")

        if self.config_path is not None:
            p = Path(self.config_path)
            if not p.is_file():
                raise ValueError(f"Config file not found: {self.config_path}")


def load_config_file(path: Optional[str]) -> Dict[str, str]:
    """Read a flat key=value run-config file; keys are normalised to snake_case."""
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"Config file not found: {path}", field="config")
    raw = dotenv_values(p)
    values: Dict[str, str] = {}
    for key, value in raw.items():
        if value is None:
            raise ConfigError(f"Config key '{key}' has no value", field=key)
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


@lru_cache
def get_settings() -> Settings:
    """Create and cache the Settings instance."""
    return Settings()
