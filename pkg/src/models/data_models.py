"""
Domain models for the triple-well toolkit.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class PotentialParams(BaseModel):
    """Parameters of V(x) = alpha x^2 (x - beta)^2 (x + beta)^2, with hbar = m = 1."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., allow_inf_nan=False, description="Energy scale")
    beta: float = Field(..., allow_inf_nan=False, description="Half-separation of the outer vacua")

    @field_validator("alpha", "beta")
    @classmethod
    def _positive(cls, value: float, info) -> float:
        if value <= 0.0:
            raise ValueError(f"{info.field_name} must be positive")
        return value

    @property
    def kink_rate(self) -> float:
        """beta^2 sqrt(2 alpha): the inverse kink width, and ω₂."""
        return self.beta ** 2 * math.sqrt(2.0 * self.alpha)


class WellGeometry(BaseModel):
    """Curvatures of the three wells and the barrier between them."""

    model_config = ConfigDict(frozen=True)

    omega1: float = Field(..., gt=0, description="Outer-well frequency, ω₁² = V''(±β)")
    omega2: float = Field(..., gt=0, description="Central-well frequency, ω₂² = V''(0)")
    omega_avg: float = Field(..., gt=0, description="(ω₁ + ω₂)/2")
    barrier_height: float = Field(..., gt=0, description="max V between adjacent minima")
    barrier_positions: Tuple[float, float] = Field(..., description="(-β/√3, β/√3)")


class Orientation(str, Enum):
    INSTANTON = "instanton"
    ANTI_INSTANTON = "anti_instanton"


class InstantonSolution(BaseModel):
    """Kink between the left vacuum (-β) and the central vacuum (0)."""

    model_config = ConfigDict(frozen=True)

    params: PotentialParams
    tau0: float = Field(default=0.0, allow_inf_nan=False, description="Kink center in Euclidean time")
    orientation: Orientation = Field(default=Orientation.INSTANTON)


class ActionValue(BaseModel):
    """Euclidean action of a path (dimensionless, hbar = 1)."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0)
    abserr: Optional[float] = Field(default=None, description="Quadrature error estimate, if integrated")


class BvpSolution(BaseModel):
    """Numerically relaxed kink sampled on the solver mesh."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: np.ndarray
    phi: np.ndarray
    velocity: np.ndarray
    tau0: float = Field(..., description="Center estimated from the crossing of -β/√2")
    max_deviation: float = Field(..., description="max |phi - phi_cl| after centering, in units of β")
    n_nodes: int
    niter: int


class FluctuationReport(BaseModel):
    """Gaussian fluctuation factors around one instanton at half-interval T."""

    model_config = ConfigDict(frozen=True)

    T: float = Field(..., gt=0)
    I_T: float = Field(..., gt=0, description="Collective-coordinate factor 2T√S_E·I₀")
    I0: float = Field(..., gt=0, description="Zero-mode-stripped factor")
    gaussian_factor: float = Field(..., gt=0, description="Change-of-variables factor (zero mode at ε₀)")
    epsilon0: float = Field(..., gt=0, description="Lowest fluctuation eigenvalue at finite T")
    kappa: float = Field(..., gt=0, description="Instanton density prefactor")
    omega_avg: float = Field(..., gt=0)
    S_E: float = Field(..., gt=0)


class BlockPrediction(BaseModel):
    """Instanton-method prediction for the lowest three-level block."""

    model_config = ConfigDict(frozen=True)

    center_E: float = Field(..., gt=0)
    half_splitting: float = Field(..., gt=0)
    amplitude_product: float = Field(..., gt=0)
    action: float = Field(..., gt=0)


class PropagatorValue(BaseModel):
    """<0|exp(-2HT)|-β> at half-interval T."""

    model_config = ConfigDict(frozen=True)

    T: float = Field(..., gt=0)
    value: float
    log_value: float


class GridSpec(BaseModel):
    """Symmetric uniform grid on [-x_max, x_max]."""

    model_config = ConfigDict(frozen=True)

    x_max: float = Field(..., gt=0, allow_inf_nan=False)
    n_points: int = Field(..., ge=201)

    @field_validator("n_points")
    @classmethod
    def _odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("n_points must be odd so that x=0 is a grid point")
        return value

    @property
    def spacing(self) -> float:
        return 2.0 * self.x_max / (self.n_points - 1)

    def points(self) -> np.ndarray:
        # symmetric by construction so that x[::-1] == -x exactly
        half = self.spacing * np.arange(1, (self.n_points - 1) // 2 + 1)
        return np.concatenate([-half[::-1], [0.0], half])

    def refined(self) -> "GridSpec":
        """Same domain, half the spacing."""
        return GridSpec(x_max=self.x_max, n_points=2 * self.n_points - 1)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Level(BaseModel):
    """One eigenpair of the grid Hamiltonian."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    energy: float
    parity: Parity
    purity: float = Field(..., description="Fraction of probability with the assigned parity")
    wavefunction: np.ndarray = Field(..., description="Samples normalised so that sum(psi^2) h = 1")


class SpectrumResult(BaseModel):
    """Lowest levels of the triple well and the block they form."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    levels: List[Level]
    block_center: float
    block_half_width: float
    gap_to_next_block: float
    central_weight: float = Field(..., description="Probability of level 1 inside the central basin")

    @property
    def block_width(self) -> float:
        return 2.0 * self.block_half_width

    @property
    def block_resolved(self) -> bool:
        return self.gap_to_next_block > 5.0 * self.block_width

    @property
    def energies(self) -> List[float]:
        return [level.energy for level in self.levels]

    @property
    def parities(self) -> List[Parity]:
        return [level.parity for level in self.levels]


class ThreeStateModel(BaseModel):
    """Variational model of the lowest block built from isolated-well ground states."""

    model_config = ConfigDict(frozen=True)

    H_LL: float
    H_CC: float
    H_LC: float
    a_plus: float = Field(..., gt=0)
    a_minus: float = Field(..., gt=0)
    E0p: float
    E1p: float
    E2p: float

    @property
    def detuning(self) -> float:
        """(H_LL - H_CC)/|H_LC|."""
        return (self.H_LL - self.H_CC) / abs(self.H_LC)

    @property
    def kernel_coefficient(self) -> float:
        """2/sqrt(d^2 + 8), shared by the j=0 and j=2 terms of the kernel."""
        return 2.0 / math.sqrt(self.detuning ** 2 + 8.0)


class MatrixElements(BaseModel):
    """Isolated-well matrix elements against the full Hamiltonian."""

    model_config = ConfigDict(frozen=True)

    H_LL: float
    H_CC: float
    H_LC: float
    H_RR: float
    overlap_LC: float
    center_amplitude: float = Field(..., description="<0|C0>, central state at x=0")
    left_amplitude: float = Field(..., description="<L0|-β>, left state at x=-β")


class ComparisonReport(BaseModel):
    """Oracle versus instanton-method numbers at one parameter point."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    S_E: float
    oracle_block_center: float
    oracle_block_half_width: float
    oracle_gap_to_next_block: float
    block_resolved: bool
    parities: List[Parity]
    central_weight: float
    instanton_center_E: float
    instanton_half_splitting: float
    center_ratio: float = Field(..., description="instanton / oracle block center")
    splitting_ratio: float = Field(..., description="instanton / oracle half-splitting")
    elements: MatrixElements
    model: ThreeStateModel
    kernel_weight: float = Field(..., description="2/sqrt(d^2+8) <0|C0><L0|-β>")
    variational_amplitude_product: float = Field(..., description="<0|E'0><E'0|-β> from the variational states")
    instanton_amplitude_product: float
    prefactor_ratio: float = Field(..., description="variational / instanton amplitude product")
    oracle_scaling_slope: Optional[float] = Field(default=None)
    instanton_scaling_slope: Optional[float] = Field(default=None)
