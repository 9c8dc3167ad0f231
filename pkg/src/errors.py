"""
Exception hierarchy for the triple-well toolkit.

Every error carries the exit code the command line reports for it.
"""

from typing import Any, Optional


EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_REGIME = 4


class TriwellError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = EXIT_NUMERICAL

    def __init__(self, message: str, field: Optional[str] = None, **details: Any):
        super().__init__(message)
        self.message = message
        self.field = field
        self.details = details


class ConfigError(TriwellError):
    """Invalid input: parameters, grids, intervals or run configuration."""

    exit_code = EXIT_CONFIG


class NumericalFailure(TriwellError):
    """A numerical routine could not deliver its contract."""

    exit_code = EXIT_NUMERICAL


class InvalidParameters(ConfigError):
    pass


class TooShortInterval(ConfigError):
    pass


class GridInvariantViolation(ConfigError):
    pass


class InsufficientPoints(ConfigError):
    pass


class DegenerateCoupling(ConfigError):
    pass


class OverflowRisk(ConfigError):
    pass


class QuadratureNonConvergence(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass


class EigensolverFailure(NumericalFailure):
    pass


class ParityAmbiguous(NumericalFailure):
    pass


class LocalizationFailure(NumericalFailure):
    pass


class GridTooCoarse(NumericalFailure):
    pass


class RegimeError(TriwellError):
    """Parameters fall outside the semiclassical regime (S_E < 3)."""

    exit_code = EXIT_REGIME
