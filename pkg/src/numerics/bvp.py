"""
Chebyshev collocation for the profile B two-point problem.

In the angle theta = arctan t the profile equation is

    (cos^a(theta) B_theta)_theta = (a^2/4) cos^a(theta) B,   B(-pi/2) = 0, B(pi/2) = 1,

which is solved as the first-order system B_theta = g cos^-a, g_theta = (a^2/4) cos^a B
for B and its flux g. The angle is reached from tau in [0, 1] by

    u = U (2 tau - 1),  w = (pi/2) sinh u,  theta = (pi/2) tanh w,

so both algebraic ends of B become smooth in tau. All map quantities are
kept in log form; cos(theta) underflows long before the collocation
coefficients do.
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.fft import dct

from ..core.config import get_settings
from ..core.logging import get_logger
from ..models.numerics import BvpSolution
from ..models.order import Order
from ..utils.error_handling import ConvergenceError

logger = get_logger(__name__)

CoefficientFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

# (1 - |a|) pi sinh(U) >= TAIL_DECAY puts the neglected tails below e^-30
TAIL_DECAY = 30.0
TAIL_COEFFICIENTS = 8


def chebdiff(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Chebyshev points x_k = cos(pi k / n) and the differentiation matrix.

    Returns:
        (x, D) with x of size n + 1 (descending) and D of shape (n + 1, n + 1)
    """
    if n == 0:
        return np.ones(1), np.zeros((1, 1))
    k = np.arange(n + 1)
    x = np.cos(np.pi * k / n)
    c = np.hstack((2.0, np.ones(n - 1), 2.0)) * (-1.0) ** k
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    d = d - np.diag(np.sum(d, axis=1))
    return x, d


def chebyshev_coefficients(values_desc: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through values at descending Chebyshev points."""
    n = len(values_desc) - 1
    coeffs = dct(np.asarray(values_desc, dtype=float), type=1) / n
    coeffs[0] *= 0.5
    coeffs[-1] *= 0.5
    return coeffs


def truncation_half_width(s: Order) -> float:
    """Half-width U of the computational variable for order s."""
    margin = 1.0 - abs(s.a)
    return math.asinh(TAIL_DECAY / (math.pi * margin))


def angular_map(tau: np.ndarray, half_width: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Angle and log-derivatives of the compactifying map.

    Returns:
        (theta, log dtheta/dtau, log cos theta)
    """
    tau = np.asarray(tau, dtype=float)
    u = half_width * (2.0 * tau - 1.0)
    w = 0.5 * math.pi * np.sinh(u)
    aw = np.abs(w)
    theta = 0.5 * math.pi * np.tanh(w)
    log_tail = np.log1p(np.exp(-2.0 * aw))
    log_dtheta = (math.log(half_width * math.pi ** 2 / 2.0) + np.log(np.cosh(u))
                  + math.log(4.0) - 2.0 * aw - 2.0 * log_tail)
    # phi = pi/2 - |theta| = pi expit(-2|w|), cos(theta) = sin(phi)
    log_phi = math.log(math.pi) - 2.0 * aw - log_tail
    phi = np.exp(log_phi)
    log_cos = log_phi + np.log(np.sinc(phi / math.pi))
    return theta, log_dtheta, log_cos


def complementary_angle(t: np.ndarray) -> np.ndarray:
    """phi = pi/2 - |arctan t|, accurate for large |t|."""
    at = np.abs(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore"):
        return np.where(at >= 1.0, np.arctan(1.0 / np.maximum(at, 1.0)), 0.5 * math.pi - np.arctan(at))


def tau_of_phi(phi: np.ndarray, sign: np.ndarray, half_width: float) -> np.ndarray:
    """tau at theta = sign * (pi/2 - phi), clamped to [0, 1]."""
    phi = np.asarray(phi, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        aw = 0.5 * np.log((math.pi - phi) / phi)
    u = np.arcsinh(2.0 * np.sign(sign) * aw / math.pi)
    return np.clip(0.5 * (1.0 + u / half_width), 0.0, 1.0)


def tau_of_t(t: np.ndarray, half_width: float) -> np.ndarray:
    """Inverse of the compactifying map, clamped to [0, 1]."""
    t = np.asarray(t, dtype=float)
    return tau_of_phi(complementary_angle(t), t, half_width)


def profile_b_coefficients(s: Order, half_width: float) -> CoefficientFn:
    """Coefficients (c1, c2) of B_tau = c1 g, g_tau = c2 B for profile B."""
    a = s.a

    def coefficients(tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        _, log_dtheta, log_cos = angular_map(tau, half_width)
        c1 = np.exp(log_dtheta - a * log_cos)
        c2 = 0.25 * a * a * np.exp(log_dtheta + a * log_cos)
        return c1, c2

    return coefficients


def solve_bvp(
    s: Order,
    tol: Optional[float] = None,
    nodes: Optional[int] = None,
    coefficients: Optional[CoefficientFn] = None,
    boundary_values: Tuple[float, float] = (0.0, 1.0),
) -> BvpSolution:
    """
    Collocate y_tau = c1 g, g_tau = c2 y on [0, 1] with y fixed at both ends.

    Args:
        s: fractional order (sets the default coefficients and the map width)
        tol: bound on the trailing Chebyshev coefficients
        nodes: polynomial degree N (N + 1 collocation points)
        coefficients: (c1, c2) as functions of tau; profile B when omitted
        boundary_values: y(0), y(1)

    Raises:
        ConvergenceError: when the linear solve fails or the Chebyshev tail
            exceeds tol (grid too coarse)
    """
    settings = get_settings()
    tol = settings.bvp_tol if tol is None else tol
    n = settings.bvp_nodes if nodes is None else nodes
    half_width = truncation_half_width(s)
    coefficients = coefficients or profile_b_coefficients(s, half_width)

    x, d = chebdiff(n)
    # ascending tau
    x, d = x[::-1], d[::-1, ::-1]
    tau = 0.5 * (1.0 + x)
    d_tau = 2.0 * d
    c1, c2 = coefficients(tau)

    size = n + 1
    matrix = np.zeros((2 * size, 2 * size))
    rhs = np.zeros(2 * size)
    matrix[:size, :size] = d_tau
    matrix[:size, size:] = -np.diag(c1)
    matrix[size:, size:] = d_tau
    matrix[size:, :size] = -np.diag(c2)
    for row, value in ((0, boundary_values[0]), (n, boundary_values[1])):
        matrix[row, :] = 0.0
        matrix[row, row] = 1.0
        rhs[row] = value

    try:
        solution = linalg.solve(matrix, rhs)
    except linalg.LinAlgError as e:
        raise ConvergenceError(f"Collocation system is singular for {s}: {e}") from e

    y, g = solution[:size], solution[size:]
    residual_y = d_tau @ y - c1 * g
    residual_g = d_tau @ g - c2 * y
    residual = float(max(np.max(np.abs(residual_y[1:-1])), np.max(np.abs(residual_g[1:-1]))))

    tail = 0.0
    for values in (y, g):
        coeffs = chebyshev_coefficients(values[::-1])
        scale = max(np.max(np.abs(values)), 1e-300)
        tail = max(tail, float(np.max(np.abs(coeffs[-TAIL_COEFFICIENTS:]))) / scale)
    logger.debug(f"bvp {s}: N={n}, U={half_width:.4f}, residual={residual:.3g}, tail={tail:.3g}")
    if tail > tol:
        raise ConvergenceError(
            f"Collocation with {n} nodes not resolved for {s}: tail {tail:.3g} > {tol:.3g}",
            estimate=float(g[-1]), error=tail,
        )

    return BvpSolution(
        nodes=tau.tolist(),
        values=y.tolist(),
        derivatives=g.tolist(),
        residual_norm=residual,
        tail_estimate=tail,
        truncation=half_width,
    )


def evaluate_solution(solution: BvpSolution, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Chebyshev interpolation of the collocated solution at t.

    Returns:
        (y, flux, phi) with phi = pi/2 - |arctan t|
    """
    y_coeffs = chebyshev_coefficients(np.asarray(solution.values)[::-1])
    g_coeffs = chebyshev_coefficients(np.asarray(solution.derivatives)[::-1])
    return evaluate_coefficients(y_coeffs, g_coeffs, solution.truncation, t)


def evaluate_coefficients(y_coeffs: np.ndarray, g_coeffs: np.ndarray, half_width: float,
                          t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate precomputed Chebyshev series at t (see evaluate_solution)."""
    x = 2.0 * tau_of_t(t, half_width) - 1.0
    return (np.polynomial.chebyshev.chebval(x, y_coeffs),
            np.polynomial.chebyshev.chebval(x, g_coeffs),
            complementary_angle(t))
