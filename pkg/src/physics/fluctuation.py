"""
Gaussian fluctuations around one instanton.

The fluctuation operator is M = -½ d²/dτ² + αY(τ) with Dirichlet ends
η(±T) = 0. Its determinant is evaluated by the change-of-variables formula
built from the zero mode N = φ̇_cl; exponentials are kept in log space and
only final values are exponentiated.
"""

import logging
import math

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.special import expit, log_expit

from ..config import get_settings
from ..errors import (
    EigensolverFailure,
    GridTooCoarse,
    InvalidParameters,
    OverflowRisk,
    QuadratureNonConvergence,
)
from ..models.data_models import FluctuationReport, InstantonSolution, PotentialParams
from . import instanton, potential

logger = logging.getLogger(__name__)

# largest a*T for which the determinant is evaluated
SAFE_WINDOW = 300.0


def curvature_profile(params: PotentialParams, tau):
    """Y(τ) = 15φ_cl⁴ - 12β²φ_cl² + β⁴ along the kink centered at 0."""
    u = expit(-2.0 * params.kink_rate * np.asarray(tau, dtype=float))
    y = params.beta ** 4 * (15.0 * u * u - 12.0 * u + 1.0)
    return float(y) if np.ndim(y) == 0 else y


def _uniform_spacing(grid: np.ndarray) -> float:
    steps = np.diff(grid)
    h = float(steps.mean())
    if grid.ndim != 1 or grid.size < 3 or not np.allclose(steps, h, rtol=1e-9, atol=0.0):
        raise InvalidParameters("fluctuation grid must be uniform with at least 3 points", field="grid")
    return h


def _stencil(params: PotentialParams, f: np.ndarray, grid: np.ndarray, h: float) -> np.ndarray:
    padded = np.concatenate(([0.0], f, [0.0]))
    laplacian = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / (h * h)
    return -0.5 * laplacian + params.alpha * curvature_profile(params, grid) * f


def zero_mode_residual(params: PotentialParams, grid) -> float:
    """Interior max-norm of the discrete M applied to the sampled zero mode."""
    grid = np.asarray(grid, dtype=float)
    h = _uniform_spacing(grid)
    n = instanton.zero_mode(InstantonSolution(params=params), grid)
    return float(np.max(np.abs(_stencil(params, n, grid, h)[1:-1])))


def apply_fluctuation_operator(params: PotentialParams, f, grid, tolerance=1e-6) -> np.ndarray:
    """Second-order central stencil for M with zero ghost values beyond the ends.

    The grid is first qualified on the known zero mode: if the discrete
    residual relative to max|αY·N| exceeds ``tolerance`` the grid is rejected.
    Pass ``tolerance=None`` to skip the check.
    """
    grid = np.asarray(grid, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != grid.shape:
        raise InvalidParameters("sampled function and grid differ in shape", field="f")
    h = _uniform_spacing(grid)

    if tolerance is not None:
        n = instanton.zero_mode(InstantonSolution(params=params), grid)
        scale = np.max(np.abs(params.alpha * curvature_profile(params, grid) * n)[1:-1])
        relative = zero_mode_residual(params, grid) / scale
        if relative > tolerance:
            raise GridTooCoarse(
                f"zero-mode residual {relative:.3e} exceeds {tolerance:.1e}; refine the grid",
                field="grid",
                spacing=h,
                residual=relative,
            )

    return _stencil(params, f, grid, h)


def check_window(params: PotentialParams, T: float):
    if not T > 0.0:
        raise InvalidParameters("T must be positive", field="T")
    if params.kink_rate * T > SAFE_WINDOW:
        raise OverflowRisk(
            f"β²√(2α)T = {params.kink_rate * T:.6g} exceeds the safe window {SAFE_WINDOW:g}",
            field="T",
        )


def _log_zero_mode(params: PotentialParams, tau):
    z = 2.0 * params.kink_rate * tau
    return math.log(params.kink_rate * params.beta) + log_expit(z) + 0.5 * log_expit(-z)


def _log_half_integral(params: PotentialParams, lo: float, hi: float, limit: int) -> float:
    """log ∫_{lo}^{hi} dτ/N², shifted by the larger endpoint value of -2 log N."""
    def log_integrand(tau):
        return -2.0 * _log_zero_mode(params, tau)

    ref = max(log_integrand(lo), log_integrand(hi))
    result = quad(
        lambda tau: math.exp(log_integrand(tau) - ref),
        lo,
        hi,
        epsabs=0.0,
        epsrel=1e-10,
        limit=limit,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3 or not value > 0.0:
        raise QuadratureNonConvergence(
            f"∫dτ/N² on [{lo:g}, {hi:g}] did not converge: {result[3] if len(result) > 3 else value}",
            abserr=abserr,
        )
    return ref + math.log(value)


def _log_inverse_norm_integral_tanh_sinh(params: PotentialParams, T: float) -> float:
    a = mpmath.mpf(params.kink_rate)
    log_ab = mpmath.log(a * params.beta)

    def log_integrand(tau):
        z = 2 * a * tau
        return -2 * (log_ab + z - 1.5 * mpmath.log1p(mpmath.exp(z)))

    with mpmath.workdps(30):
        ref = max(log_integrand(-T), log_integrand(T))
        value, err = mpmath.quad(
            lambda tau: mpmath.exp(log_integrand(tau) - ref),
            [-T, 0, T],
            method="tanh-sinh",
            error=True,
        )
        if err > 1e-12 * value:
            raise QuadratureNonConvergence(f"tanh-sinh estimate {value} has error {err}")
        return float(ref + mpmath.log(value))


def log_gaussian_factor(params: PotentialParams, T: float, method: str = "adaptive") -> float:
    """log I(T) with I(T) = (2π N(T) N(-T) ∫dτ/N²)^(-1/2)."""
    check_window(params, T)
    if method == "adaptive":
        limit = get_settings().quad_limit
        log_integral = np.logaddexp(
            _log_half_integral(params, -T, 0.0, limit),
            _log_half_integral(params, 0.0, T, limit),
        )
    elif method == "tanh-sinh":
        log_integral = _log_inverse_norm_integral_tanh_sinh(params, T)
    else:
        raise ValueError(f"Unknown quadrature method: {method}")

    log_ends = _log_zero_mode(params, T) + _log_zero_mode(params, -T)
    log_i = -0.5 * (math.log(2.0 * math.pi) + log_ends + float(log_integral))
    logger.debug(f"log I({T}) = {log_i!r} via {method}")
    return log_i


def gaussian_factor(params: PotentialParams, T: float, method: str = "adaptive") -> float:
    """Change-of-variables Gaussian factor I(T); the zero mode enters at its finite-T eigenvalue."""
    return math.exp(log_gaussian_factor(params, T, method))


def gaussian_factor_asymptotic(params: PotentialParams, T: float) -> float:
    """Large-T form β(2√(2α)/π)^½ e^{-β²√(2α)T/2}."""
    a = params.kink_rate
    return math.exp(0.5 * math.log(2.0 * a / math.pi) - 0.5 * a * T)


def log_boundary_eigenvalue(params: PotentialParams, T: float) -> float:
    if T < 0.0:
        raise InvalidParameters("T must be non-negative", field="T")
    return math.log(8.0 * params.alpha * params.beta ** 4) - 2.0 * params.kink_rate * T


def boundary_eigenvalue(params: PotentialParams, T: float) -> float:
    """ε₀ = 8αβ⁴ e^{-2β²√(2α)T}, the WKB lowest eigenvalue of M on [-T, T]."""
    return math.exp(log_boundary_eigenvalue(params, T))


def log_stripped_factor(params: PotentialParams, T: float) -> float:
    if not T > 0.0:
        raise InvalidParameters("T must be positive", field="T")
    alpha, beta = params.alpha, params.beta
    return (
        math.log(4.0 * beta ** 3 / math.pi)
        + 0.5 * math.log(alpha * math.sqrt(2.0 * alpha))
        - 1.5 * params.kink_rate * T
    )


def stripped_factor(params: PotentialParams, T: float) -> float:
    """I₀ = (4β³/π)(α√(2α))^½ e^{-(3/2)β²√(2α)T}."""
    return math.exp(log_stripped_factor(params, T))


def stripped_factor_via_eigenvalue(params: PotentialParams, T: float) -> float:
    """I₀ = (1/π)(2β²√(2α)ε₀)^½ e^{-β²√(2α)T/2}, i.e. √(ε₀/π) times the large-T I(T)."""
    a = params.kink_rate
    log_value = -math.log(math.pi) + 0.5 * (math.log(2.0 * a) + log_boundary_eigenvalue(params, T)) - 0.5 * a * T
    return math.exp(log_value)


def instanton_density(params: PotentialParams) -> float:
    """κ = 4β²√(2α/(3π)); see DESIGN.md for the power of β."""
    return 4.0 * params.beta ** 2 * math.sqrt(2.0 * params.alpha / (3.0 * math.pi))


def collective_factor(params: PotentialParams, T: float) -> float:
    """I(T) = 2T√S_E·I₀ once the zero mode is traded for the center τ₀."""
    action = instanton.classical_action_analytic(params).value
    return math.exp(math.log(2.0 * T * math.sqrt(action)) + log_stripped_factor(params, T))


def log_one_instanton_amplitude(params: PotentialParams, T: float, kappa: float = None) -> float:
    if not T > 0.0:
        raise InvalidParameters("T must be positive", field="T")
    kappa = instanton_density(params) if kappa is None else kappa
    action = instanton.classical_action_analytic(params).value
    omega = potential.geometry(params).omega_avg
    return (
        math.log(2.0 * kappa * T * math.sqrt(action))
        + 0.5 * math.log(omega / math.pi)
        - action
        - omega * T
    )


def one_instanton_amplitude(params: PotentialParams, T: float) -> float:
    """2κT√S_E √(ω/π) e^{-S_E} e^{-ωT}: one kink's contribution to <0|e^{-2HT}|-β>."""
    return math.exp(log_one_instanton_amplitude(params, T))


def fluctuation_report(params: PotentialParams, T: float, method: str = "adaptive") -> FluctuationReport:
    return FluctuationReport(
        T=T,
        I_T=collective_factor(params, T),
        I0=stripped_factor(params, T),
        gaussian_factor=gaussian_factor(params, T, method),
        epsilon0=boundary_eigenvalue(params, T),
        kappa=instanton_density(params),
        omega_avg=potential.geometry(params).omega_avg,
        S_E=instanton.classical_action_analytic(params).value,
    )


def discrete_fluctuation_spectrum(params: PotentialParams, T: float, n_points: int = 10001, k: int = 1) -> np.ndarray:
    """Lowest k eigenvalues of the discretised M on [-T, T] with Dirichlet ends.

    Only the exponential decay of the lowest eigenvalue with T is meaningful;
    its prefactor depends on the discretisation.
    """
    check_window(params, T)
    tau = np.linspace(-T, T, n_points)[1:-1]
    h = 2.0 * T / (n_points - 1)
    diagonal = 1.0 / (h * h) + params.alpha * curvature_profile(params, tau)
    off_diagonal = np.full(tau.size - 1, -0.5 / (h * h))
    try:
        values = eigh_tridiagonal(
            diagonal,
            off_diagonal,
            eigvals_only=True,
            select="i",
            select_range=(0, k - 1),
            lapack_driver="stebz",
        )
    except LinAlgError as e:
        raise EigensolverFailure(f"fluctuation spectrum failed: {e}") from e
    return values
