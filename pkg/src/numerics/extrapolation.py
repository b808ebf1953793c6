"""
Richardson extrapolation of limits with known power-law corrections.
"""

from typing import Callable, Optional, Sequence

import numpy as np

from ..core.config import get_settings
from ..core.logging import get_logger
from ..utils.error_handling import ExtrapolationError

logger = get_logger(__name__)

# exponents closer than this are merged into one elimination step
EXPONENT_MERGE = 1e-3


def merge_exponents(exponents: Sequence[float]) -> list:
    """Sorted positive exponents with near-duplicates removed."""
    merged: list = []
    for p in sorted(e for e in exponents if e > 0):
        if not merged or p - merged[-1] > EXPONENT_MERGE:
            merged.append(p)
    return merged


def richardson_limit(
    f: Callable[[np.ndarray], np.ndarray],
    exponents: Sequence[float],
    h0: float = 1e-2,
    levels: Optional[int] = None,
    check_monotone: bool = True,
) -> tuple:
    """
    Limit of f(h) as h -> 0+ when f(h) = L + sum_k c_k h^p_k + ...

    Samples h_j = h0 / 2^j and eliminates the listed correction exponents
    one at a time.

    Returns:
        (limit, error estimate)

    Raises:
        ExtrapolationError: when the raw samples are not monotone
    """
    levels = get_settings().richardson_levels if levels is None else levels
    exps = merge_exponents(exponents)
    h = h0 / 2.0 ** np.arange(levels)
    raw = np.asarray(f(h), dtype=float)
    if not np.all(np.isfinite(raw)):
        raise ExtrapolationError("Non-finite samples in Richardson table")
    steps = np.diff(raw)
    if check_monotone and len(steps) > 1:
        scale = max(np.max(np.abs(raw)), 1e-300)
        significant = steps[np.abs(steps) > 1e-13 * scale]
        if len(significant) and not (np.all(significant > 0) or np.all(significant < 0)):
            raise ExtrapolationError(f"Richardson samples are not monotone: {raw.tolist()}")

    column = previous = raw
    for p in exps[: levels - 1]:
        factor = 2.0 ** p
        previous = column
        column = (factor * column[1:] - column[:-1]) / (factor - 1.0)
    best = column[-1]
    error = abs(column[-1] - column[-2]) if len(column) > 1 else abs(best - previous[-1])
    logger.debug(f"richardson limit {best:.15g} +/- {error:.3g} from {len(raw)} samples")
    return float(best), float(error)
