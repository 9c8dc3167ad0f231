"""
Run configuration and report models for the command line.
"""

import math
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .data_models import BlockPrediction, FluctuationReport, Parity, PotentialParams

MAX_SWEEP_COUNT = 10_000


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class SweepRange(BaseModel):
    """Linearly spaced values of one swept parameter."""
    start: float = Field(..., allow_inf_nan=False)
    stop: float = Field(..., allow_inf_nan=False)
    count: int = Field(..., description="Number of points, endpoints included")

    @field_validator("start", "stop")
    @classmethod
    def _positive(cls, value: float, info) -> float:
        if value <= 0.0:
            raise ValueError(f"{info.field_name} must be positive")
        return value

    @field_validator("count")
    @classmethod
    def _count(cls, value: int) -> int:
        if not 2 <= value <= MAX_SWEEP_COUNT:
            raise ValueError(f"count must be between 2 and {MAX_SWEEP_COUNT}")
        return value

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


class RunConfig(BaseModel):
    """Resolved run parameters (flags > config file > defaults)."""

    model_config = ConfigDict(extra="forbid")

    alpha: Optional[float] = Field(default=None, allow_inf_nan=False)
    beta: Optional[float] = Field(default=None, allow_inf_nan=False)
    alpha_range: Optional[SweepRange] = None
    beta_range: Optional[SweepRange] = None
    T: Optional[float] = Field(default=None, allow_inf_nan=False, description="Half-interval")
    x_max: Optional[float] = Field(default=None, allow_inf_nan=False)
    n_points: Optional[int] = None
    format: OutputFormat = OutputFormat.JSON
    out: Optional[str] = None
    quick: bool = False
    workers: Optional[int] = Field(default=None, ge=1)
    kappa_scale: float = Field(default=1.0, gt=0, allow_inf_nan=False)

    @field_validator("alpha", "beta", "T", "x_max")
    @classmethod
    def _positive(cls, value: Optional[float], info) -> Optional[float]:
        if value is not None and value <= 0.0:
            raise ValueError(f"{info.field_name} must be positive")
        return value

    @field_validator("n_points")
    @classmethod
    def _odd_points(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and (value < 201 or value % 2 == 0):
            raise ValueError("n_points must be odd and at least 201")
        return value

    @model_validator(mode="after")
    def _one_mode(self) -> "RunConfig":
        if self.alpha_range is not None and self.beta_range is not None:
            raise ValueError("at most one parameter may be swept")
        if self.alpha_range is not None and self.alpha is not None:
            raise ValueError("alpha cannot be both fixed and swept")
        if self.beta_range is not None and self.beta is not None:
            raise ValueError("beta cannot be both fixed and swept")
        if self.alpha is None and self.alpha_range is None:
            raise ValueError("alpha is required")
        if self.beta is None and self.beta_range is None:
            raise ValueError("beta is required")
        return self

    @property
    def is_sweep(self) -> bool:
        return self.alpha_range is not None or self.beta_range is not None

    def point_params(self) -> PotentialParams:
        if self.is_sweep:
            raise ValueError("point parameters requested from a sweep configuration")
        return PotentialParams(alpha=self.alpha, beta=self.beta)

    def sweep_params(self) -> List[PotentialParams]:
        if self.alpha_range is not None:
            return [PotentialParams(alpha=a, beta=self.beta) for a in self.alpha_range.values()]
        if self.beta_range is not None:
            return [PotentialParams(alpha=self.alpha, beta=b) for b in self.beta_range.values()]
        return [self.point_params()]

    def half_interval(self, params: PotentialParams) -> float:
        """Configured T, or 12/(β²√(2α))."""
        return self.T if self.T is not None else 12.0 / params.kink_rate


class GeometrySection(BaseModel):
    omega1: float
    omega2: float
    omega_avg: float
    barrier_height: float


class ActionSection(BaseModel):
    analytic: float
    quadrature: float
    quadrature_abserr: float
    quadrature_T: float = Field(..., description="Half-interval used for the quadrature")


class OracleSection(BaseModel):
    energies: List[float]
    parities: List[Parity]
    block_center: float
    block_half_width: float
    gap_to_next_block: float
    block_resolved: bool
    central_weight: float
    x_max: float
    n_points: int


class ComparisonSection(BaseModel):
    center_ratio: float
    splitting_ratio: float
    H_LL: float
    H_CC: float
    H_LC: float
    overlap_LC: float
    a_plus: float
    a_minus: float
    kernel_weight: float
    variational_amplitude_product: float
    instanton_amplitude_product: float
    prefactor_ratio: float


class AnalysisReport(BaseModel):
    """Everything computed at one parameter point."""
    alpha: float
    beta: float
    T: float
    geometry: GeometrySection
    action: ActionSection
    fluctuation: FluctuationReport
    prediction: BlockPrediction
    oracle: OracleSection
    comparison: ComparisonSection


SWEEP_COLUMNS = (
    "alpha",
    "beta",
    "S_E",
    "E_instanton",
    "dE_instanton",
    "E_oracle",
    "dE_oracle",
    "ratio_dE",
    "gap_ratio",
)


class SweepRow(BaseModel):
    """One sweep point; oracle columns stay empty when the regime guard trips."""
    alpha: float
    beta: float
    S_E: float
    E_instanton: float
    dE_instanton: float
    E_oracle: Optional[float] = None
    dE_oracle: Optional[float] = None
    ratio_dE: Optional[float] = None
    gap_ratio: Optional[float] = Field(default=None, description="gap to next block / block width")


class CheckResult(BaseModel):
    name: str
    passed: bool
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""

    @field_validator("measured")
    @classmethod
    def _finite_or_none(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not math.isfinite(value):
            return None
        return value


class VerificationSummary(BaseModel):
    quick: bool
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def n_failed(self) -> int:
        return sum(1 for check in self.checks if not check.passed)


class ErrorReport(BaseModel):
    """Machine-readable failure written to stderr."""
    exit_code: int
    error: str
    message: str
    field: Optional[str] = None
    details: Dict[str, Any] = Field(default_factory=dict)
