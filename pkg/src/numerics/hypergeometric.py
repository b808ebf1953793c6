"""
Gauss hypergeometric function 2F1(alpha, beta; gamma; z) on the negative real axis.

Only z <= 0 is needed (arguments are -t^2). Three evaluation routes:

- series, |z| < 1/2
- Pfaff transformation F = (1-z)^(-alpha) F(alpha, gamma-beta; gamma; z/(z-1)),
  -2 <= z <= -1/2, which maps into [1/3, 2/3]
- inversion z -> 1/z, z < -2
"""

from typing import Optional, Union

import numpy as np

from ..core.config import get_settings
from ..core.logging import get_logger
from ..utils.error_handling import ConvergenceError, DomainError, ParameterDegeneracyError
from .special import gamma, rgamma

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

SERIES_RADIUS = 0.5
PFAFF_LIMIT = -2.0
MAX_TERMS = 5000
DEGENERACY_GAP = 1e-8


def _nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def hyp2f1_series(alpha: float, beta: float, gamma_p: float, z: np.ndarray,
                  tol: Optional[float] = None) -> np.ndarray:
    """Direct power series, valid for |z| < 1 (fast for |z| <= 2/3)."""
    tol = get_settings().f21_tol if tol is None else tol
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(MAX_TERMS):
        term = term * ((alpha + k) * (beta + k) / ((gamma_p + k) * (k + 1.0))) * z
        total = total + term
        if np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)):
            return total
        if not np.any(term):
            return total
    raise ConvergenceError(f"2F1 series did not converge for max |z| = {np.max(np.abs(z)):.3g}")


def hyp2f1_pfaff(alpha: float, beta: float, gamma_p: float, z: np.ndarray) -> np.ndarray:
    """Pfaff transformation onto the positive argument z/(z-1)."""
    z = np.asarray(z, dtype=float)
    w = z / (z - 1.0)
    return (1.0 - z) ** (-alpha) * hyp2f1_series(alpha, gamma_p - beta, gamma_p, w)


def hyp2f1_inversion(alpha: float, beta: float, gamma_p: float, z: np.ndarray) -> np.ndarray:
    """
    Inversion formula for z < -1.

    Raises:
        ParameterDegeneracyError: when alpha - beta is an integer
    """
    diff = alpha - beta
    if abs(diff - round(diff)) < DEGENERACY_GAP:
        raise ParameterDegeneracyError(
            f"Inversion formula degenerate: alpha - beta = {diff} is an integer"
        )
    z = np.asarray(z, dtype=float)
    if np.any(z >= -1.0):
        raise DomainError("Inversion formula requires z < -1")
    mz = -z
    w = 1.0 / z
    first = (gamma(gamma_p) * gamma(beta - alpha) * rgamma(beta) * rgamma(gamma_p - alpha)
             * mz ** (-alpha) * _dispatch(alpha, 1.0 - gamma_p + alpha, 1.0 - beta + alpha, w))
    second = (gamma(gamma_p) * gamma(alpha - beta) * rgamma(alpha) * rgamma(gamma_p - beta)
              * mz ** (-beta) * _dispatch(beta, 1.0 - gamma_p + beta, 1.0 - alpha + beta, w))
    return first + second


def _dispatch(alpha: float, beta: float, gamma_p: float, z: np.ndarray) -> np.ndarray:
    """Default route selection on z <= 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    near = np.abs(z) < SERIES_RADIUS
    band = (~near) & (z >= PFAFF_LIMIT)
    far = z < PFAFF_LIMIT
    if np.any(near):
        out[near] = hyp2f1_series(alpha, beta, gamma_p, z[near])
    if np.any(band):
        out[band] = hyp2f1_pfaff(alpha, beta, gamma_p, z[band])
    if np.any(far):
        out[far] = hyp2f1_inversion(alpha, beta, gamma_p, z[far])
    return out


def gauss_2f1(alpha: float, beta: float, gamma_p: float, z: ArrayLike,
              branch: Optional[str] = None, eps: Optional[float] = None) -> ArrayLike:
    """
    Gauss hypergeometric function for real parameters and z <= 0.

    Args:
        alpha, beta, gamma_p: parameters; gamma_p must not be a non-positive integer
        z: argument(s), all <= 0
        branch: force "series" (direct or Pfaff) or "inversion"; automatic when None
        eps: parameter shift used when the inversion formula is degenerate

    Returns:
        F(alpha, beta; gamma_p; z), scalar or array like z
    """
    if _nonpositive_integer(gamma_p):
        raise DomainError(f"gamma = {gamma_p} is a non-positive integer")
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zs > 0):
        raise DomainError("gauss_2f1 is implemented for z <= 0 only")

    def evaluate(a: float) -> np.ndarray:
        if branch is None:
            return _dispatch(a, beta, gamma_p, zs)
        if branch == "series":
            out = np.empty_like(zs)
            near = np.abs(zs) < SERIES_RADIUS
            if np.any(near):
                out[near] = hyp2f1_series(a, beta, gamma_p, zs[near])
            if np.any(~near):
                out[~near] = hyp2f1_pfaff(a, beta, gamma_p, zs[~near])
            return out
        if branch == "inversion":
            return hyp2f1_inversion(a, beta, gamma_p, zs)
        raise ValueError(f"Unknown branch '{branch}'")

    try:
        result = evaluate(alpha)
    except ParameterDegeneracyError:
        shift = get_settings().f21_eps if eps is None else eps
        logger.debug(f"2F1 degenerate at alpha={alpha}, beta={beta}; averaging at alpha +/- {shift}")
        result = 0.5 * (evaluate(alpha + shift) + evaluate(alpha - shift))

    return float(result[0]) if scalar else result


def gauss_2f1_derivative(alpha: float, beta: float, gamma_p: float, z: ArrayLike) -> ArrayLike:
    """d/dz F(alpha, beta; gamma; z) = (alpha beta / gamma) F(alpha+1, beta+1; gamma+1; z)."""
    return alpha * beta / gamma_p * gauss_2f1(alpha + 1.0, beta + 1.0, gamma_p + 1.0, z)
