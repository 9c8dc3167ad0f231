"""
Classical Euclidean kink from the left vacuum (-β) to the central vacuum (0).

With a = β²√(2α) and s = exp(2a(τ - τ₀)) the kink is φ = -β/√(1+s).
Everything is written through w = s/(1+s) and u = 1/(1+s), evaluated with
expit, so no exponential is formed explicitly.
"""

import logging
import math

import numpy as np
from scipy.integrate import quad, solve_bvp
from scipy.optimize import brentq
from scipy.special import expit

from ..config import get_settings
from ..errors import NoConvergence, QuadratureNonConvergence, TooShortInterval
from ..models.data_models import (
    ActionValue,
    BvpSolution,
    InstantonSolution,
    Orientation,
    PotentialParams,
)
from . import potential

logger = logging.getLogger(__name__)

# a*T below this leaves boundary terms above the quadrature tolerance
MIN_INTERVAL = 20.0

# tolerance ladder for relaxing from the straight-line guess
CONTINUATION_TOLS = (1e-2, 1e-3)


def _local_time(sol: InstantonSolution, tau):
    shifted = np.asarray(tau, dtype=float) - sol.tau0
    if sol.orientation is Orientation.ANTI_INSTANTON:
        return -shifted
    return shifted


def _weights(sol: InstantonSolution, tau):
    z = 2.0 * sol.params.kink_rate * _local_time(sol, tau)
    return expit(z), expit(-z)


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def phi_cl(sol: InstantonSolution, tau):
    """Kink profile; the anti-instanton is its time reflection about τ₀."""
    _, u = _weights(sol, tau)
    return _scalar(-sol.params.beta * np.sqrt(u))


def velocity(sol: InstantonSolution, tau):
    """dφ_cl/dτ = aβ w √u (negated for the anti-instanton)."""
    w, u = _weights(sol, tau)
    v = sol.params.kink_rate * sol.params.beta * w * np.sqrt(u)
    if sol.orientation is Orientation.ANTI_INSTANTON:
        v = -v
    return _scalar(v)


def acceleration(sol: InstantonSolution, tau):
    """d²φ_cl/dτ² = a²β w √u (2u - w); even under time reflection."""
    w, u = _weights(sol, tau)
    a = sol.params.kink_rate
    return _scalar(a * a * sol.params.beta * w * np.sqrt(u) * (2.0 * u - w))


def zero_mode(sol: InstantonSolution, tau):
    """N(τ) = φ̇_cl, the translation zero mode of the fluctuation operator."""
    return velocity(sol, tau)


def eom_residual(sol: InstantonSolution, tau):
    """φ̈_cl - V'(φ_cl); zero up to round-off for the exact kink."""
    return _scalar(acceleration(sol, tau) - potential.gradient(sol.params, phi_cl(sol, tau)))


def first_integral(sol: InstantonSolution, tau):
    """½φ̇² - V(φ); vanishes on a zero-energy Euclidean trajectory."""
    v = velocity(sol, tau)
    return _scalar(0.5 * v * v - potential.evaluate(sol.params, phi_cl(sol, tau)))


def kink_center(params: PotentialParams, tau, phi) -> float:
    """τ where a sampled monotone path crosses -β/√2, by linear interpolation."""
    tau = np.asarray(tau, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if phi[-1] < phi[0]:
        tau, phi = tau[::-1], phi[::-1]
    target = -params.beta / math.sqrt(2.0)
    if not phi[0] <= target <= phi[-1]:
        raise ValueError("sampled path does not cross -β/√2")
    return float(np.interp(target, phi, tau))


def classical_action_analytic(params: PotentialParams) -> ActionValue:
    """T → ∞ action of the kink, √(2α)β⁴/4."""
    return ActionValue(value=math.sqrt(2.0 * params.alpha) * params.beta ** 4 / 4.0)


def _require_interval(params: PotentialParams, T: float):
    minimum = MIN_INTERVAL / params.kink_rate
    if not T >= minimum:
        raise TooShortInterval(
            f"T={T} is shorter than {MIN_INTERVAL}/(β²√(2α)) = {minimum:.6g}",
            field="T",
            minimum=minimum,
        )


def classical_action_quadrature(
    sol: InstantonSolution,
    T: float,
    epsabs: float = 1e-10,
    epsrel: float = 1e-12,
) -> ActionValue:
    """Integrate ½φ̇² + V(φ) over [-T, T] with adaptive quadrature."""
    params = sol.params
    _require_interval(params, T)

    def lagrangian(tau):
        v = velocity(sol, tau)
        return 0.5 * v * v + potential.evaluate(params, phi_cl(sol, tau))

    points = [sol.tau0] if -T < sol.tau0 < T else None
    result = quad(
        lagrangian,
        -T,
        T,
        points=points,
        epsabs=epsabs,
        epsrel=epsrel,
        limit=get_settings().quad_limit,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3:
        raise QuadratureNonConvergence(
            f"action quadrature did not reach {epsabs:g}: {result[3]}",
            abserr=abserr,
            neval=result[2].get("neval"),
        )
    logger.debug(f"Action quadrature on [-{T}, {T}]: {value!r} ± {abserr:.2e}")
    return ActionValue(value=value, abserr=abserr)


def _scaled_rhs(t, y):
    x = y[0]
    x2 = x * x
    return np.vstack((y[1], x * (3.0 * x2 * x2 - 4.0 * x2 + 1.0)))


def _scaled_jac(t, y):
    x2 = y[0] * y[0]
    jac = np.zeros((2, 2, y.shape[1]))
    jac[0, 1] = 1.0
    jac[1, 0] = 15.0 * x2 * x2 - 12.0 * x2 + 1.0
    return jac


def solve_bvp_numeric(
    params: PotentialParams,
    T: float,
    initial_guess: str = "kink",
    tol: float = 1e-6,
    max_nodes: int = 200000,
) -> BvpSolution:
    """Relax φ̈ = V'(φ) on [-T, T] independently of the closed-form kink.

    Works in x = φ/β and t = aτ, where the equation becomes
    x'' = x(3x⁴ - 4x² + 1) for every (α, β). Boundary values follow the
    linearised decay into each vacuum: x(-aT) = -1 + e^{-2aT}/2 and
    x(aT) = -e^{-aT}.
    """
    _require_interval(params, T)
    if initial_guess not in ("kink", "linear"):
        raise ValueError(f"Unknown initial guess: {initial_guess}")

    L = params.kink_rate * T
    left = -1.0 + 0.5 * math.exp(-2.0 * L)
    right = -math.exp(-L)

    def boundary(ya, yb):
        return np.array([ya[0] - left, yb[0] - right])

    t = np.linspace(-L, L, max(401, int(40 * L) | 1))
    guess = np.zeros((2, t.size))
    if initial_guess == "kink":
        # right topology, wrong width
        guess[0] = left + (right - left) * 0.5 * (1.0 + np.tanh(0.5 * t))
        guess[1] = (right - left) * 0.25 / np.cosh(0.5 * t) ** 2
    else:
        guess[0] = left + (right - left) * (t + L) / (2.0 * L)
        guess[1] = (right - left) / (2.0 * L)

    # a flat guess is relaxed at loose tolerances first; each stage seeds the next
    stages = CONTINUATION_TOLS if initial_guess == "linear" else ()
    for stage_tol in [s for s in stages if s > tol] + [tol]:
        res = solve_bvp(_scaled_rhs, boundary, t, guess, fun_jac=_scaled_jac, tol=stage_tol, max_nodes=max_nodes)
        if not res.success:
            break
        logger.debug(f"Kink relaxation stage tol={stage_tol:g}: {res.x.size} nodes")
        t, guess = res.x, res.y
    if not res.success:
        raise NoConvergence(
            f"kink relaxation failed: {res.message}",
            status=int(res.status),
            niter=int(res.niter),
            n_nodes=int(res.x.size),
            max_rms_residual=float(np.max(res.rms_residuals)),
        )
    logger.debug(f"Kink relaxation converged in {res.niter} iterations on {res.x.size} nodes")

    target = -1.0 / math.sqrt(2.0)
    t_center = brentq(lambda s: res.sol(s)[0] - target, res.x[0], res.x[-1], xtol=1e-14)
    tau0 = t_center / params.kink_rate

    dense = np.linspace(-L, L, 8001)
    centred = InstantonSolution(params=params, tau0=tau0)
    x_dense = res.sol(dense)[0]
    deviation = np.max(np.abs(params.beta * x_dense - phi_cl(centred, dense / params.kink_rate)))

    return BvpSolution(
        tau=res.x / params.kink_rate,
        phi=params.beta * res.y[0],
        velocity=params.kink_rate * params.beta * res.y[1],
        tau0=tau0,
        max_deviation=float(deviation / params.beta),
        n_nodes=int(res.x.size),
        niter=int(res.niter),
    )
