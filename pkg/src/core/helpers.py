"""
Utility helper functions for the verification suite.
"""
import re
from typing import List

import numpy as np


def parse_float_list(text: str) -> List[float]:
    """Parse a comma or whitespace separated list of reals.

    Ranges of the form ``start:stop:count`` expand to ``count`` evenly
    spaced values, endpoints included.
    """
    values: List[float] = []
    for token in re.split(r'[,\s]+', text.strip()):
        if not token:
            continue
        if ":" in token:
            parts = token.split(":")
            if len(parts) != 3:
                raise ValueError(f"Range '{token}' must look like start:stop:count")
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError(f"Range '{token}' needs a positive count")
            values.extend(np.linspace(start, stop, count).tolist())
        else:
            values.append(float(token))
    if not values:
        raise ValueError("Empty list")
    return values


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    """Logarithmically spaced grid on [lo, hi]."""
    return np.logspace(np.log10(lo), np.log10(hi), count)


def relative_difference(x: float, y: float) -> float:
    """|x - y| scaled by max(|x|, |y|, 1)."""
    return abs(x - y) / max(abs(x), abs(y), 1.0)


def format_real(value: float) -> str:
    """Round-trip safe rendering with 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"
