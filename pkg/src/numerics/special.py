"""
Gamma and modified Bessel functions with the domain checks the suite relies on.
"""

import math
from typing import Tuple, Union

import numpy as np
from scipy import special as sp

from ..core.logging import get_logger
from ..utils.error_handling import DomainError, PoleError

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# K_nu(t) < 1e-300 beyond this point
BESSEL_UNDERFLOW_T = 700.0


def _is_pole(x: np.ndarray) -> np.ndarray:
    return (x <= 0) & (np.floor(x) == x)


def gamma(x: ArrayLike) -> ArrayLike:
    """
    Gamma function.

    Raises:
        PoleError: at a non-positive integer
    """
    arr = np.asarray(x, dtype=float)
    if np.any(_is_pole(arr)):
        raise PoleError(f"Gamma has a pole at {x}")
    result = sp.gamma(arr)
    return float(result) if np.ndim(result) == 0 else result


def rgamma(x: ArrayLike) -> ArrayLike:
    """1 / Gamma(x), zero at the poles."""
    result = sp.rgamma(np.asarray(x, dtype=float))
    return float(result) if np.ndim(result) == 0 else result


def bessel_k_checked(nu: float, t: ArrayLike) -> Tuple[ArrayLike, bool]:
    """
    Modified Bessel function of the second kind with an underflow flag.

    K is even in the order, so any real nu is accepted.

    Returns:
        (K_nu(t), underflow) where underflow is True when some t exceeded the
        guard and the corresponding value was set to exactly zero
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0):
        raise DomainError(f"bessel_k needs t > 0, got {t}")
    nu = abs(float(nu))
    far = arr > BESSEL_UNDERFLOW_T
    values = np.where(far, 0.0, sp.kv(nu, np.where(far, 1.0, arr)))
    underflow = bool(np.any(far))
    if underflow:
        logger.debug(f"bessel_k underflow guard hit for nu={nu}")
    if np.ndim(values) == 0:
        return float(values), underflow
    return values, underflow


def bessel_k(nu: float, t: ArrayLike) -> ArrayLike:
    """Modified Bessel function of the second kind K_nu(t), t > 0."""
    return bessel_k_checked(nu, t)[0]


def bessel_k_integral(nu: float, t: float) -> float:
    """K_nu(t) from its integral representation, integral of exp(-t cosh u) cosh(nu u)."""
    from .quadrature import integrate
    from ..models.numerics import Interval

    return integrate(
        lambda u: np.exp(-t * np.cosh(u) + nu * u) * 0.5 + np.exp(-t * np.cosh(u) - nu * u) * 0.5,
        Interval(lo=0.0, hi=math.inf),
    )
