"""
Smallest eigenpair of a symmetric pencil K v = lambda M v with M semidefinite.
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..core.logging import get_logger
from ..utils.error_handling import SingularMassError

logger = get_logger(__name__)

# eigenvalues of M below this fraction of the largest span its kernel
KERNEL_RTOL = 1e-12


def min_generalized_eig(stiffness: np.ndarray, mass: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Smallest lambda with K v = lambda M v restricted to range(M).

    When M is singular the kernel directions are eliminated by their
    K-harmonic extension (Schur complement), which is the minimizer of the
    quotient v^T K v / v^T M v over the kernel component.

    Args:
        stiffness: symmetric K, positive definite on the kernel of M
        mass: symmetric positive semidefinite M

    Returns:
        (lambda_min, v) with v normalized to v^T M v = 1

    Raises:
        SingularMassError: when M vanishes identically
    """
    k = 0.5 * (np.asarray(stiffness, dtype=float) + np.asarray(stiffness, dtype=float).T)
    m = 0.5 * (np.asarray(mass, dtype=float) + np.asarray(mass, dtype=float).T)
    if k.shape != m.shape or k.shape[0] != k.shape[1]:
        raise ValueError(f"Stiffness {k.shape} and mass {m.shape} must be equal square matrices")
    if not np.any(m):
        raise SingularMassError("Mass matrix is identically zero")

    mu, basis = linalg.eigh(m)
    cutoff = KERNEL_RTOL * np.max(np.abs(mu))
    range_mask = mu > cutoff
    if np.all(range_mask):
        values, vectors = linalg.eigh(k, m, subset_by_index=[0, 0])
        return float(values[0]), vectors[:, 0]

    ur, uk = basis[:, range_mask], basis[:, ~range_mask]
    logger.debug(f"mass kernel dimension {uk.shape[1]} of {m.shape[0]}")
    krr = ur.T @ k @ ur
    krk = ur.T @ k @ uk
    kkk = uk.T @ k @ uk
    mr = np.diag(mu[range_mask])

    coupling = linalg.solve(kkk, krk.T, assume_a="pos")
    schur = krr - krk @ coupling
    schur = 0.5 * (schur + schur.T)
    values, vectors = linalg.eigh(schur, mr, subset_by_index=[0, 0])
    x = vectors[:, 0]
    v = ur @ x - uk @ (coupling @ x)
    v = v / np.sqrt(v @ m @ v)
    return float(values[0]), v
