"""
Grid diagonalisation of H = -½ d²/dx² + V(x) and the three-state model.

Eigenpairs come from LAPACK's tridiagonal bisection (stebz) with inverse
iteration (stein), so values and vectors are deterministic for a given grid.
"""

import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from ..config import get_settings
from ..errors import (
    DegenerateCoupling,
    EigensolverFailure,
    GridInvariantViolation,
    InvalidParameters,
    LocalizationFailure,
    ParityAmbiguous,
    RegimeError,
)
from ..models.data_models import (
    ComparisonReport,
    GridSpec,
    Level,
    MatrixElements,
    Parity,
    PotentialParams,
    SpectrumResult,
    ThreeStateModel,
)
from . import dilute_gas, instanton, potential

logger = logging.getLogger(__name__)

TAIL_WIDTHS = 6.0
SPACING_FACTOR = 0.05
PARITY_PURITY = 0.99
MAX_LEAK = 0.01
WALL_FACTOR = 1e3
MIN_ACTION = 3.0
# base grid of the refinement study; coarser bases leave h² changes above 1e-6·ω₂
REFINEMENT_POINTS = 6001

WELLS = ("left", "center", "right")


def default_grid(params: PotentialParams) -> GridSpec:
    """x_max = β + 6/√ω₂ with the configured point count, refined if the spacing bound needs it."""
    geo = potential.geometry(params)
    x_max = params.beta + TAIL_WIDTHS / math.sqrt(geo.omega2)
    h_max = SPACING_FACTOR / math.sqrt(geo.omega1)
    needed = int(math.ceil(2.0 * x_max / h_max)) + 1
    n_points = max(get_settings().n_points, needed | 1)
    return GridSpec(x_max=x_max, n_points=n_points)


def check_grid(params: PotentialParams, grid: GridSpec):
    geo = potential.geometry(params)
    min_extent = params.beta + TAIL_WIDTHS / math.sqrt(geo.omega2)
    if grid.x_max < min_extent - 1e-12:
        raise GridInvariantViolation(
            f"x_max={grid.x_max:.6g} is below β + 6/√ω₂ = {min_extent:.6g}",
            field="x_max",
            invariant="extent",
        )
    max_spacing = SPACING_FACTOR / math.sqrt(geo.omega1)
    if grid.spacing > max_spacing:
        raise GridInvariantViolation(
            f"spacing {grid.spacing:.6g} exceeds 0.05/√ω₁ = {max_spacing:.6g}",
            field="n_points",
            invariant="spacing",
        )


def tridiagonal_hamiltonian(x, values) -> Tuple[np.ndarray, np.ndarray]:
    """(diagonal, off-diagonal) of -½ d²/dx² + values on a uniform grid, Dirichlet beyond the ends."""
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    h = x[1] - x[0]
    diagonal = 1.0 / (h * h) + values
    off_diagonal = np.full(x.size - 1, -0.5 / (h * h))
    return diagonal, off_diagonal


def build_hamiltonian(params: PotentialParams, grid: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    check_grid(params, grid)
    x = grid.points()
    return tridiagonal_hamiltonian(x, potential.evaluate(params, x))


def apply_hamiltonian(diagonal: np.ndarray, off_diagonal: np.ndarray, psi: np.ndarray) -> np.ndarray:
    out = diagonal * psi
    out[:-1] += off_diagonal * psi[1:]
    out[1:] += off_diagonal * psi[:-1]
    return out


def solve_tridiagonal(diagonal, off_diagonal, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Lowest k eigenpairs by bisection and inverse iteration."""
    try:
        values, vectors = eigh_tridiagonal(
            diagonal,
            off_diagonal,
            select="i",
            select_range=(0, k - 1),
            lapack_driver="stebz",
        )
    except (LinAlgError, ValueError) as e:
        raise EigensolverFailure(f"tridiagonal eigensolver failed: {e}") from e
    if values.size != k or np.any(np.diff(values) <= 0.0):
        raise EigensolverFailure(f"expected {k} strictly increasing eigenvalues, got {values.tolist()}")
    return values, vectors


def _normalise(psi: np.ndarray, h: float) -> np.ndarray:
    psi = psi / math.sqrt(float(np.sum(psi * psi)) * h)
    if psi[np.argmax(np.abs(psi))] < 0.0:
        psi = -psi
    return psi


def parity_of(psi) -> Tuple[Parity, float]:
    """Parity on a mirror-symmetric grid and the fraction of probability carrying it."""
    psi = np.asarray(psi, dtype=float)
    overlap = float(np.dot(psi, psi[::-1]) / np.dot(psi, psi))
    purity = 0.5 * (1.0 + abs(overlap))
    if purity < PARITY_PURITY:
        raise ParityAmbiguous(
            f"state has parity purity {purity:.6f} < {PARITY_PURITY}",
            purity=purity,
        )
    return (Parity.EVEN if overlap >= 0.0 else Parity.ODD), purity


def _central_mask(params: PotentialParams, x: np.ndarray) -> np.ndarray:
    return np.abs(x) < params.beta / math.sqrt(3.0)


def lowest_levels(params: PotentialParams, grid: Optional[GridSpec] = None, k: int = 4) -> SpectrumResult:
    """Lowest k levels; levels 0-2 are treated as the block and level 3 sets the gap."""
    if k < 4:
        raise InvalidParameters("k must be at least 4 to measure the gap to the next block", field="k")
    grid = default_grid(params) if grid is None else grid
    diagonal, off_diagonal = build_hamiltonian(params, grid)
    x = grid.points()
    h = grid.spacing

    logger.debug(f"Diagonalising n={grid.n_points}, x_max={grid.x_max:.6g} for the lowest {k} levels")
    values, vectors = solve_tridiagonal(diagonal, off_diagonal, k)

    levels: List[Level] = []
    for energy, column in zip(values, vectors.T):
        psi = _normalise(column, h)
        parity, purity = parity_of(psi)
        levels.append(Level(energy=float(energy), parity=parity, purity=purity, wavefunction=psi))

    psi1 = levels[1].wavefunction
    central_weight = float(np.sum(psi1[_central_mask(params, x)] ** 2) * h)

    return SpectrumResult(
        x=x,
        levels=levels,
        block_center=0.5 * (levels[0].energy + levels[2].energy),
        block_half_width=0.5 * (levels[2].energy - levels[0].energy),
        gap_to_next_block=levels[3].energy - levels[2].energy,
        central_weight=central_weight,
    )


def refinement_study(params: PotentialParams, grid: Optional[GridSpec] = None, n_levels: int = 3):
    """Changes of the lowest levels under two successive halvings of h.

    Returns (changes from the first halving, observed convergence orders).
    """
    grid = default_grid(params) if grid is None else grid
    if grid.n_points < REFINEMENT_POINTS:
        grid = GridSpec(x_max=grid.x_max, n_points=REFINEMENT_POINTS)
    grids = [grid, grid.refined(), grid.refined().refined()]
    energies = []
    for g in grids:
        diagonal, off_diagonal = build_hamiltonian(params, g)
        values, _ = solve_tridiagonal(diagonal, off_diagonal, n_levels)
        energies.append(values)
    first = np.abs(energies[0] - energies[1])
    second = np.abs(energies[1] - energies[2])
    return first, np.log2(first / second)


def three_state_model(H_LL: float, H_CC: float, H_LC: float) -> ThreeStateModel:
    """Variational block from isolated-well matrix elements."""
    if H_LC == 0.0:
        raise DegenerateCoupling("H_LC vanishes; the wells are uncoupled", field="H_LC")
    coupling = abs(H_LC)
    d = (H_LL - H_CC) / coupling
    root = math.sqrt(d * d + 8.0)
    # a₊a₋ = 2; take the larger root directly and divide for the other
    if d >= 0.0:
        a_plus = 0.5 * (d + root)
        a_minus = 2.0 / a_plus
    else:
        a_minus = 0.5 * (-d + root)
        a_plus = 2.0 / a_minus

    e0 = (2.0 * H_LL + a_plus ** 2 * H_CC - 4.0 * a_plus * coupling) / (2.0 + a_plus ** 2)
    e1 = H_LL
    e2 = (2.0 * H_LL + a_minus ** 2 * H_CC + 4.0 * a_minus * coupling) / (2.0 + a_minus ** 2)
    slack = 1e-12 * max(abs(e0), abs(e2), coupling)
    if not (e0 <= e1 + slack and e1 <= e2 + slack):
        raise EigensolverFailure(f"model levels out of order: {e0!r}, {e1!r}, {e2!r}")

    return ThreeStateModel(
        H_LL=H_LL,
        H_CC=H_CC,
        H_LC=H_LC,
        a_plus=a_plus,
        a_minus=a_minus,
        E0p=e0,
        E1p=e1,
        E2p=e2,
    )


def _basin(params: PotentialParams, x: np.ndarray, well: str) -> np.ndarray:
    edge = params.beta / math.sqrt(3.0)
    if well == "left":
        return x < -edge
    if well == "center":
        return np.abs(x) < edge
    if well == "right":
        return x > edge
    raise ValueError(f"Unknown well: {well}")


def truncated_well_state(params: PotentialParams, grid: GridSpec, well: str) -> Tuple[float, np.ndarray]:
    """Ground state of one well with walls of 10³ barrier heights outside its basin."""
    if well == "right":
        energy, psi = truncated_well_state(params, grid, "left")
        return energy, psi[::-1].copy()

    check_grid(params, grid)
    x = grid.points()
    h = grid.spacing
    basin = _basin(params, x, well)
    wall = WALL_FACTOR * potential.geometry(params).barrier_height
    values = np.where(basin, potential.evaluate(params, x), wall)

    diagonal, off_diagonal = tridiagonal_hamiltonian(x, values)
    energies, vectors = solve_tridiagonal(diagonal, off_diagonal, 1)
    psi = _normalise(vectors[:, 0], h)

    leak = 1.0 - float(np.sum(psi[basin] ** 2) * h)
    if leak > MAX_LEAK:
        raise LocalizationFailure(
            f"{well} well state leaks {leak:.3%} outside its basin",
            field=well,
            leak=leak,
        )
    logger.debug(f"{well} well ground state at {energies[0]!r}, leak {leak:.2e}")
    return float(energies[0]), psi


def estimate_matrix_elements(params: PotentialParams, grid: Optional[GridSpec] = None) -> MatrixElements:
    """<L₀|H|L₀>, <C₀|H|C₀>, <L₀|H|C₀> against the full grid Hamiltonian."""
    grid = default_grid(params) if grid is None else grid
    diagonal, off_diagonal = build_hamiltonian(params, grid)
    x = grid.points()
    h = grid.spacing

    states = {well: truncated_well_state(params, grid, well)[1] for well in WELLS}
    left, center, right = states["left"], states["center"], states["right"]

    h_center = apply_hamiltonian(diagonal, off_diagonal, center)
    H_LL = float(np.dot(left, apply_hamiltonian(diagonal, off_diagonal, left)) * h)
    H_RR = float(np.dot(right, apply_hamiltonian(diagonal, off_diagonal, right)) * h)
    H_CC = float(np.dot(center, h_center) * h)
    H_LC = float(np.dot(left, h_center) * h)

    if abs(H_RR - H_LL) > 1e-8 * max(1.0, abs(H_LL)):
        raise GridInvariantViolation(
            f"H_RR={H_RR!r} differs from H_LL={H_LL!r}; grid is not mirror symmetric",
            field="grid",
            invariant="symmetry",
        )

    return MatrixElements(
        H_LL=H_LL,
        H_CC=H_CC,
        H_LC=H_LC,
        H_RR=H_RR,
        overlap_LC=float(np.dot(left, center) * h),
        center_amplitude=float(center[grid.n_points // 2]),
        left_amplitude=float(np.interp(-params.beta, x, left)),
    )


def kernel_weight(model: ThreeStateModel, elements: MatrixElements) -> float:
    """2/√(d²+8)·<0|C₀><L₀|-β>, the coefficient of e^{-2ET} sinh(2ΔE·T)."""
    return model.kernel_coefficient * elements.center_amplitude * elements.left_amplitude


def oracle_scaling_exponent(alpha: float, betas: Iterable[float]) -> float:
    """Slope of log(oracle half-width) - 4 log β against β⁴ on default grids."""
    params_list = [PotentialParams(alpha=alpha, beta=beta) for beta in betas]
    widths = [lowest_levels(p).block_half_width for p in params_list]
    return dilute_gas.splitting_scaling_exponent(params_list, splittings=widths)


def compare_with_instanton(
    params: PotentialParams,
    grid: Optional[GridSpec] = None,
    sweep_betas: Optional[Iterable[float]] = None,
    require_block: bool = False,
    spectrum: Optional[SpectrumResult] = None,
) -> ComparisonReport:
    """Oracle block against the dilute-gas prediction at one parameter point.

    The report is produced whenever S_E ≥ 3. ``block_resolved`` says whether
    the lowest three levels are separated from the next by more than five
    block widths; ``require_block=True`` turns an unresolved block into a
    RegimeError. Pass ``spectrum`` to reuse levels already computed on ``grid``.
    """
    action = instanton.classical_action_analytic(params).value
    if action < MIN_ACTION:
        raise RegimeError(
            f"S_E={action:.6g} is below {MIN_ACTION:g}; outside the semiclassical regime",
            field="beta",
            S_E=action,
        )

    if spectrum is None:
        spectrum = lowest_levels(params, grid)
    if require_block and not spectrum.block_resolved:
        raise RegimeError(
            f"gap {spectrum.gap_to_next_block:.6g} is not more than 5x the block width {spectrum.block_width:.6g}",
            field="beta",
            S_E=action,
        )

    block = dilute_gas.block_prediction(params)
    elements = estimate_matrix_elements(params, grid)
    model = three_state_model(elements.H_LL, elements.H_CC, elements.H_LC)
    weight = kernel_weight(model, elements)
    variational = 0.5 * weight

    oracle_slope = None
    instanton_slope = None
    if sweep_betas is not None:
        betas = list(sweep_betas)
        oracle_slope = oracle_scaling_exponent(params.alpha, betas)
        instanton_slope = dilute_gas.splitting_scaling_exponent(
            [PotentialParams(alpha=params.alpha, beta=beta) for beta in betas]
        )

    logger.info(
        f"Compared alpha={params.alpha}, beta={params.beta}: "
        f"oracle half-width {spectrum.block_half_width:.6g}, instanton {block.half_splitting:.6g}"
    )

    return ComparisonReport(
        alpha=params.alpha,
        beta=params.beta,
        S_E=action,
        oracle_block_center=spectrum.block_center,
        oracle_block_half_width=spectrum.block_half_width,
        oracle_gap_to_next_block=spectrum.gap_to_next_block,
        block_resolved=spectrum.block_resolved,
        parities=spectrum.parities[:3],
        central_weight=spectrum.central_weight,
        instanton_center_E=block.center_E,
        instanton_half_splitting=block.half_splitting,
        center_ratio=block.center_E / spectrum.block_center,
        splitting_ratio=block.half_splitting / spectrum.block_half_width,
        elements=elements,
        model=model,
        kernel_weight=weight,
        variational_amplitude_product=variational,
        instanton_amplitude_product=block.amplitude_product,
        prefactor_ratio=variational / block.amplitude_product,
        oracle_scaling_slope=oracle_slope,
        instanton_scaling_slope=instanton_slope,
    )
