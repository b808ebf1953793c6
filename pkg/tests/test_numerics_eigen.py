import numpy as np
import pytest

from src.numerics.eigen import min_generalized_eig
from src.numerics.extrapolation import merge_exponents, richardson_limit
from src.utils.error_handling import ExtrapolationError, SingularMassError


def test_definite_pencil():
    k = np.diag([2.0, 3.0, 10.0])
    m = np.diag([1.0, 2.0, 1.0])
    value, v = min_generalized_eig(k, m)
    assert value == pytest.approx(1.5, rel=1e-14)
    assert v @ m @ v == pytest.approx(1.0, rel=1e-12)


def test_singular_mass_uses_schur_complement():
    k = np.array([[2.0, -1.0], [-1.0, 2.0]])
    m = np.diag([1.0, 0.0])
    value, _ = min_generalized_eig(k, m)
    # eliminating the second unknown leaves 2 - 1/2
    assert value == pytest.approx(1.5, rel=1e-14)


def test_zero_mass_raises():
    with pytest.raises(SingularMassError):
        min_generalized_eig(np.eye(2), np.zeros((2, 2)))


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        min_generalized_eig(np.eye(2), np.eye(3))


def test_richardson_removes_listed_powers():
    limit, error = richardson_limit(lambda h: 2.0 + 3.0 * h + 5.0 * h ** 2 - h ** 3, (1.0, 2.0, 3.0),
                                    h0=0.1, levels=6)
    assert limit == pytest.approx(2.0, abs=1e-12)
    assert error < 1e-10


def test_richardson_fractional_exponents():
    limit, _ = richardson_limit(lambda h: 1.0 - h ** 0.4 + h ** 1.4, (0.4, 1.4), h0=0.5, levels=8)
    assert limit == pytest.approx(1.0, abs=1e-10)


def test_richardson_rejects_oscillating_samples():
    with pytest.raises(ExtrapolationError):
        richardson_limit(lambda h: np.cos(1.0 / h), (1.0,), h0=0.1, levels=6)


def test_merge_exponents_drops_duplicates_and_nonpositive():
    assert merge_exponents([2.0, 1.0, 1.0000001, -0.5, 0.0]) == [1.0, 2.0]
