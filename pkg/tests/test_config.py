"""
Basic tests for triwell configuration.
"""

import pytest

from src.config import Settings, get_settings, load_config_file
from src.errors import ConfigError


ENV_KEYS = (
    "TRIWELL_LOG_LEVEL",
    "TRIWELL_LOG_DIR",
    "TRIWELL_CONFIG",
    "TRIWELL_SWEEP_WORKERS",
    "TRIWELL_N_POINTS",
    "TRIWELL_SERIES_TERMS",
    "TRIWELL_QUAD_LIMIT",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_settings_defaults():
    """Test that settings have proper defaults."""
    settings = Settings()

    assert settings.log_level == "INFO"
    assert settings.log_dir == "./logs"
    assert settings.config_path is None
    assert settings.sweep_workers == 1
    assert settings.n_points == 2001
    assert settings.series_terms == 30
    assert settings.quad_limit == 400


def test_settings_from_environment(monkeypatch):
    """Test that environment variables override the defaults."""
    monkeypatch.setenv("TRIWELL_LOG_LEVEL", "debug")
    monkeypatch.setenv("TRIWELL_N_POINTS", "4001")
    monkeypatch.setenv("TRIWELL_SWEEP_WORKERS", "4")

    settings = get_settings()

    assert settings.log_level == "DEBUG"
    assert settings.n_points == 4001
    assert settings.sweep_workers == 4
    assert get_settings() is settings


@pytest.mark.parametrize("key, value, message", [
    ("TRIWELL_LOG_LEVEL", "LOUD", "Invalid log level"),
    ("TRIWELL_N_POINTS", "2000", "TRIWELL_N_POINTS must be odd"),
    ("TRIWELL_N_POINTS", "101", "TRIWELL_N_POINTS must be odd"),
    ("TRIWELL_SWEEP_WORKERS", "0", "TRIWELL_SWEEP_WORKERS must be at least 1"),
    ("TRIWELL_QUAD_LIMIT", "10", "TRIWELL_QUAD_LIMIT must be at least 50"),
    ("TRIWELL_CONFIG", "/nonexistent/run.env", "Config file not found"),
])
def test_settings_validation(monkeypatch, key, value, message):
    """Test settings validation."""
    monkeypatch.setenv(key, value)

    with pytest.raises(ValueError, match=message):
        Settings()


def test_load_config_file(tmp_path):
    """Keys are lower-cased and dashes become underscores."""
    path = tmp_path / "run.env"
    path.write_text("ALPHA=1.0\nbeta-range = 1.6 2.4 5\n# comment\nformat=csv\n")

    assert load_config_file(str(path)) == {"alpha": "1.0", "beta_range": "1.6 2.4 5", "format": "csv"}


def test_load_config_file_without_path():
    assert load_config_file(None) == {}


def test_load_config_file_missing(tmp_path):
    with pytest.raises(ConfigError, match="Config file not found"):
        load_config_file(str(tmp_path / "missing.env"))


def test_load_config_file_key_without_value(tmp_path):
    path = tmp_path / "run.env"
    path.write_text("alpha=1.0\nquick\n")

    with pytest.raises(ConfigError, match="has no value"):
        load_config_file(str(path))


if __name__ == "__main__":
    pytest.main([__file__])
