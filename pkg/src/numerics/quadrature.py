"""
Double-exponential and Gauss-Jacobi quadrature with level doubling.

Finite intervals use tanh-sinh, [lo, inf) uses exp-sinh and (-inf, inf) uses
sinh-sinh, all with step h = 1/level. Nodes near a finite endpoint are built
from the distance to that endpoint, so a singular endpoint at 0 is resolved
down to ~1e-300.
"""

import math
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import expit, roots_jacobi

from ..core.config import get_settings
from ..core.logging import get_logger
from ..models.numerics import Interval, QuadratureKind, QuadratureResult, QuadratureRule
from ..utils.error_handling import ConvergenceError

logger = get_logger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

# pi * sinh(U_FINITE) ~ 690, endpoint distances reach ~1e-300
U_FINITE = 6.1
# exp-sinh: left distances ~1e-300, right end ~1e150
U_EXP_LEFT = 6.8
U_EXP_RIGHT = 6.1
# sinh-sinh: |x| up to ~1e150
U_SINH = 6.4
# Gauss-Jacobi uses 4 * level nodes
JACOBI_MAX_LEVEL = 128
# two-dimensional rules stop doubling here
BATCH_MAX_LEVEL = 80


@lru_cache(maxsize=64)
def _unit_finite(level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Distances to the left and right ends of [0, 1], weights and side flags."""
    h = 1.0 / level
    k = np.arange(-math.ceil(U_FINITE * level), math.ceil(U_FINITE * level) + 1)
    u = k * h
    v = 0.5 * math.pi * np.sinh(u)
    d_lo = expit(2.0 * v)
    d_hi = expit(-2.0 * v)
    w = h * math.pi * np.cosh(u) * d_lo * d_hi
    keep = (w > 0) & (d_lo > 0) & (d_hi > 0)
    return d_lo[keep], d_hi[keep], w[keep], (u < 0)[keep]


@lru_cache(maxsize=64)
def _unit_half_line(level: int) -> Tuple[np.ndarray, np.ndarray]:
    """Offsets from the finite end of [lo, inf) and weights."""
    h = 1.0 / level
    k = np.arange(-math.ceil(U_EXP_LEFT * level), math.ceil(U_EXP_RIGHT * level) + 1)
    u = k * h
    e = np.exp(0.5 * math.pi * np.sinh(u))
    w = h * 0.5 * math.pi * np.cosh(u) * e
    keep = (e > 0) & (w > 0)
    return e[keep], w[keep]


@lru_cache(maxsize=256)
def _finite_nodes(level: int, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
    d_lo, d_hi, w, left = _unit_finite(level)
    length = hi - lo
    x = np.where(left, lo + length * d_lo, hi - length * d_hi)
    w = length * w
    keep = (x > lo) & (x < hi)
    return x[keep], w[keep]


@lru_cache(maxsize=256)
def _half_line_nodes(level: int, lo: float) -> Tuple[np.ndarray, np.ndarray]:
    e, w = _unit_half_line(level)
    x = lo + e
    keep = x > lo
    return x[keep], w[keep]


@lru_cache(maxsize=64)
def _line_nodes(level: int) -> Tuple[np.ndarray, np.ndarray]:
    h = 1.0 / level
    k = np.arange(-math.ceil(U_SINH * level), math.ceil(U_SINH * level) + 1)
    u = k * h
    v = 0.5 * math.pi * np.sinh(u)
    x = np.sinh(v)
    w = h * 0.5 * math.pi * np.cosh(u) * np.cosh(v)
    return x, w


@lru_cache(maxsize=256)
def _jacobi_nodes(count: int, lo: float, hi: float, e_lo: float, e_hi: float
                  ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    xi, wi = roots_jacobi(count, e_hi, e_lo)
    half = 0.5 * (hi - lo)
    x = lo + half * (1.0 + xi)
    w = wi * half ** (1.0 + e_lo + e_hi)
    weight_fn = (x - lo) ** e_lo * (hi - x) ** e_hi
    return x, w, weight_fn


def quadrature_nodes(domain: Interval, kind: QuadratureKind = QuadratureKind.TANH_SINH,
                     level: int = 10) -> Tuple[np.ndarray, np.ndarray]:
    """
    Abscissae and weights of one level on a domain.

    For gauss_jacobi the weights already include division by the Jacobi
    weight, so sum(w * f(x)) approximates the plain integral of f.
    """
    if QuadratureKind(kind) == QuadratureKind.GAUSS_JACOBI:
        if not domain.is_finite:
            raise ValueError("Gauss-Jacobi needs a finite interval")
        x, w, weight_fn = _jacobi_nodes(4 * level, domain.lo, domain.hi,
                                        domain.lo_algebraic_exponent or 0.0,
                                        domain.hi_algebraic_exponent or 0.0)
        return x, w / weight_fn
    if domain.is_finite:
        return _finite_nodes(level, domain.lo, domain.hi)
    if math.isfinite(domain.lo):
        return _half_line_nodes(level, domain.lo)
    if math.isfinite(domain.hi):
        x, w = _half_line_nodes(level, -domain.hi)
        return -x, w
    return _line_nodes(level)


def build_rule(domain: Interval, kind: QuadratureKind = QuadratureKind.TANH_SINH,
               level: int = 10) -> QuadratureRule:
    """Materialize the nodes of one level as a QuadratureRule."""
    x, w = quadrature_nodes(domain, kind, level)
    return QuadratureRule(kind=kind, level=level, abscissae=x.tolist(), weights=w.tolist())


def apply_rule(f: Integrand, domain: Interval, kind: QuadratureKind, level: int) -> float:
    """Single-level quadrature sum."""
    x, w = quadrature_nodes(domain, kind, level)
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        values = np.asarray(f(x), dtype=float)
        terms = np.where(w > 0, w * values, 0.0)
    if not np.all(np.isfinite(terms)):
        raise ConvergenceError(f"Non-finite integrand values on [{domain.lo}, {domain.hi}]")
    return float(np.sum(terms))


def integrate_with_estimate(
    f: Integrand,
    domain: Interval,
    rule: Optional[QuadratureRule] = None,
    tol: Optional[float] = None,
    max_level: Optional[int] = None,
) -> QuadratureResult:
    """
    Integrate a vectorized f over domain, doubling the level until two
    successive levels agree.

    Raises:
        ConvergenceError: when max_level is exceeded
    """
    settings = get_settings()
    tol = settings.quad_tol if tol is None else tol
    max_level = settings.quad_max_level if max_level is None else max_level
    kind = QuadratureKind(rule.kind) if rule else QuadratureKind.TANH_SINH
    if kind == QuadratureKind.GAUSS_JACOBI:
        max_level = min(max_level, JACOBI_MAX_LEVEL)
    level = rule.level if rule else settings.quad_level

    previous = apply_rule(f, domain, kind, level)
    while True:
        level *= 2
        current = apply_rule(f, domain, kind, level)
        error = abs(current - previous)
        if error <= tol * max(abs(current), 1e-300) or current == previous:
            return QuadratureResult(value=current, error=error, level=level)
        if level >= max_level:
            raise ConvergenceError(
                f"Quadrature on [{domain.lo}, {domain.hi}] not converged at level {level}: "
                f"estimate {current:.15g}, change {error:.3g}",
                estimate=current, error=error,
            )
        logger.debug(f"quadrature level {level} change {error:.3g}")
        previous = current


def integrate(
    f: Integrand,
    domain: Interval,
    rule: Optional[QuadratureRule] = None,
    tol: Optional[float] = None,
    max_level: Optional[int] = None,
) -> float:
    """Integral of a vectorized f over domain (see integrate_with_estimate)."""
    return integrate_with_estimate(f, domain, rule, tol, max_level).value


def gauss_legendre(lo: float, hi: float, count: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = _legendre(count)
    half = 0.5 * (hi - lo)
    return lo + half * (1.0 + x), half * w


@lru_cache(maxsize=64)
def _legendre(count: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(count)


def _batch_sum(f: Integrand, lo: np.ndarray, hi: np.ndarray, level: int, half_line: bool) -> np.ndarray:
    if half_line:
        e, w0 = _unit_half_line(level)
        x = lo[:, None] + e[None, :]
        w = np.broadcast_to(w0, x.shape)
    else:
        d_lo, d_hi, w0, left = _unit_finite(level)
        length = (hi - lo)[:, None]
        x = np.where(left[None, :], lo[:, None] + length * d_lo[None, :],
                     hi[:, None] - length * d_hi[None, :])
        w = length * w0[None, :]
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        values = np.asarray(f(x), dtype=float)
        terms = np.where(w > 0, w * values, 0.0)
    if not np.all(np.isfinite(terms)):
        raise ConvergenceError("Non-finite integrand values in a batched integral")
    return np.sum(terms, axis=1)


def integrate_batch(
    f: Integrand,
    lo: np.ndarray,
    hi: np.ndarray,
    tol: Optional[float] = None,
    max_level: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Integrals of f over [lo_k, hi_k] for a batch of intervals at once.

    f receives abscissae of shape (k, m), row k lying in [lo_k, hi_k], and
    broadcasts its own per-row parameters as (k, 1) arrays. Either every hi is
    finite (tanh-sinh) or every hi is +inf (exp-sinh).

    Returns:
        (values, change between the last two levels), both of shape (k,)

    Raises:
        ConvergenceError: when some row has not settled by max_level
    """
    settings = get_settings()
    tol = settings.quad_tol if tol is None else tol
    max_level = BATCH_MAX_LEVEL if max_level is None else max_level
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), lo.shape)
    infinite = np.isinf(hi)
    if np.any(infinite) and not np.all(infinite):
        raise ValueError("A batch must be all finite or all half-line intervals")
    half_line = bool(np.all(infinite)) and lo.size > 0
    if lo.size == 0:
        return np.zeros(0), np.zeros(0)

    level = settings.quad_level
    previous = _batch_sum(f, lo, hi, level, half_line)
    while True:
        level *= 2
        current = _batch_sum(f, lo, hi, level, half_line)
        change = np.abs(current - previous)
        floor = 1e-6 * float(np.max(np.abs(current)))
        if np.all(change <= tol * np.maximum(np.abs(current), floor)):
            return current, change
        if level >= max_level:
            worst = int(np.argmax(change))
            raise ConvergenceError(
                f"Batched quadrature not converged at level {level}: "
                f"row {worst} estimate {current[worst]:.15g}, change {change[worst]:.3g}",
                estimate=float(current[worst]), error=float(change[worst]),
            )
        previous = current


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x_domain: Interval,
    y_bounds: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    rule: Optional[QuadratureRule] = None,
    tol: Optional[float] = None,
    max_level: Optional[int] = None,
) -> QuadratureResult:
    """
    Iterated integral of f(x, y) for x in x_domain and y in y_bounds(x).

    The inner integrals are batched over the outer abscissae; the outer rule
    doubles like integrate_with_estimate. Rows with an empty inner range
    contribute zero.
    """
    settings = get_settings()
    tol = settings.quad_tol if tol is None else tol
    inner_tol = tol * 1e-1

    def outer(x: np.ndarray) -> np.ndarray:
        lo, hi = y_bounds(x)
        lo = np.broadcast_to(np.asarray(lo, dtype=float), x.shape)
        hi = np.broadcast_to(np.asarray(hi, dtype=float), x.shape)
        result = np.zeros_like(x, dtype=float)
        active = hi > lo
        if not np.any(active):
            return result
        xs = x[active][:, None]
        values, _ = integrate_batch(lambda y: f(xs, y), lo[active], hi[active], inner_tol,
                                    max_level)
        result[active] = values
        return result

    return integrate_with_estimate(outer, x_domain, rule, tol,
                                   BATCH_MAX_LEVEL if max_level is None else max_level)
