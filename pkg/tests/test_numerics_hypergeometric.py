import math

import numpy as np
import pytest

from src.numerics.hypergeometric import gauss_2f1, gauss_2f1_derivative
from src.utils.error_handling import DomainError


@pytest.mark.parametrize("x", [0.1, 0.6, 1.0, 3.0, 10.0, 1e3])
def test_arctan_identity(x):
    # F(1/2, 1; 3/2; -x^2) = arctan(x) / x
    assert gauss_2f1(0.5, 1.0, 1.5, -x * x) == pytest.approx(math.atan(x) / x, rel=1e-11)


@pytest.mark.parametrize("z", [-0.3, -0.9, -4.0, -50.0])
def test_log_identity_through_degenerate_inversion(z):
    # F(1, 1; 2; z) = -ln(1 - z) / z; alpha - beta = 0 triggers the shifted average
    assert gauss_2f1(1.0, 1.0, 2.0, z) == pytest.approx(-math.log1p(-z) / z, rel=1e-7)


def test_branches_agree_in_overlap():
    z = np.array([-1.5, -2.5, -3.0])
    series = gauss_2f1(0.3, 0.8, 1.7, z, branch="series")
    inversion = gauss_2f1(0.3, 0.8, 1.7, z, branch="inversion")
    assert np.allclose(series, inversion, rtol=1e-12)


def test_vector_and_scalar_calls():
    z = np.array([-0.2, -5.0])
    values = gauss_2f1(0.25, 0.5, 1.5, z)
    assert values.shape == (2,)
    assert values[1] == pytest.approx(gauss_2f1(0.25, 0.5, 1.5, -5.0), rel=1e-15)


def test_derivative_contiguous_relation():
    a, b, c, z = 0.3, 0.6, 1.4, -2.0
    assert gauss_2f1_derivative(a, b, c, z) == pytest.approx(a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z),
                                                             rel=1e-12)


def test_positive_argument_rejected():
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1.0, 0.5)


def test_nonpositive_integer_gamma_rejected():
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, -1.0, -0.5)
