"""
Run-config resolution: command-line flags > config file > defaults.
"""

import logging
from typing import Any, Dict, Optional

from ..config import get_settings, load_config_file
from ..errors import ConfigError
from ..models.report_models import RunConfig

logger = logging.getLogger(__name__)

FILE_KEYS = {
    "alpha",
    "beta",
    "alpha_range",
    "beta_range",
    "t",
    "x_max",
    "n_points",
    "format",
    "out",
    "quick",
    "workers",
}

# verify runs at this point unless one is configured
VERIFY_DEFAULTS = {"alpha": 1.0, "beta": 2.0}


def _parse_range(key: str, value: str) -> Dict[str, Any]:
    parts = [p for p in value.replace(",", " ").split() if p]
    if len(parts) != 3:
        raise ConfigError(f"{key} must be 'START STOP COUNT'", field=key)
    start, stop, count = parts
    try:
        return {"start": float(start), "stop": float(stop), "count": int(count)}
    except ValueError as e:
        raise ConfigError(f"{key}: {e}", field=key) from e


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} must be a boolean", field=key)


def file_values(path: Optional[str]) -> Dict[str, Any]:
    """Typed values from a flat key=value run-config file."""
    raw = load_config_file(path)
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in FILE_KEYS:
            raise ConfigError(f"Unknown config key '{key}'", field=key)
        if key in ("alpha_range", "beta_range"):
            values[key] = _parse_range(key, value)
        elif key == "quick":
            values[key] = _parse_bool(key, value)
        elif key == "t":
            values["T"] = value
        else:
            values[key] = value
    if raw:
        logger.debug(f"Loaded {len(raw)} keys from {path}")
    return values


def flag_values(args) -> Dict[str, Any]:
    """Values explicitly given on the command line."""
    values: Dict[str, Any] = {}
    for name in ("alpha", "beta", "T", "x_max", "n_points", "format", "out", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    for name in ("alpha_range", "beta_range"):
        value = getattr(args, name, None)
        if value is not None:
            start, stop, count = value
            values[name] = {"start": start, "stop": stop, "count": count}
    if getattr(args, "quick", False):
        values["quick"] = True
    kappa_scale = getattr(args, "inject_kappa_scale", None)
    if kappa_scale is not None:
        values["kappa_scale"] = kappa_scale
    return values


def _overlay(base: Dict[str, Any], layer: Dict[str, Any]) -> Dict[str, Any]:
    """Apply a higher-precedence layer; fixing a parameter drops a lower sweep of it and vice versa."""
    merged = dict(base)
    for name in ("alpha", "beta"):
        if name in layer:
            merged.pop(f"{name}_range", None)
        if f"{name}_range" in layer:
            merged.pop(name, None)
    merged.update(layer)
    return merged


def resolve_config(args, command: str) -> RunConfig:
    """Merge defaults, the TRIWELL_CONFIG file and flags; pydantic errors propagate."""
    defaults = dict(VERIFY_DEFAULTS) if command == "verify" else {}
    merged = _overlay(defaults, file_values(get_settings().config_path))
    merged = _overlay(merged, flag_values(args))
    return RunConfig(**merged)
