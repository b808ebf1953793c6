import math

import numpy as np
import pytest

from src.models.numerics import Interval, QuadratureKind, QuadratureRule
from src.numerics.quadrature import (
    build_rule,
    gauss_legendre,
    integrate,
    integrate_2d,
    integrate_batch,
    integrate_with_estimate,
)
from src.utils.error_handling import ConvergenceError


def test_finite_interval_with_endpoint_singularity():
    assert integrate(lambda x: x ** -0.5, Interval(lo=0.0, hi=1.0)) == pytest.approx(2.0, rel=1e-10)


def test_half_line_exponential():
    assert integrate(lambda x: np.exp(-x), Interval(lo=0.0, hi=math.inf)) == pytest.approx(1.0, rel=1e-10)


def test_whole_line_gaussian():
    value = integrate(lambda x: np.exp(-x * x), Interval(lo=-math.inf, hi=math.inf))
    assert value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_log_integral_after_substitution():
    # int_0^1 (1 - ln t)^-2 dt / t with v = -ln t
    assert integrate(lambda v: (1.0 + v) ** -2, Interval(lo=0.0, hi=math.inf)) == pytest.approx(1.0, rel=1e-9)


def test_gauss_jacobi_absorbs_algebraic_endpoint():
    domain = Interval(lo=0.0, hi=1.0, lo_algebraic_exponent=0.4)
    rule = QuadratureRule(kind=QuadratureKind.GAUSS_JACOBI, level=4)
    value = integrate(lambda x: x ** 0.4 * np.cos(x), domain, rule=rule)
    reference = integrate(lambda x: x ** 0.4 * np.cos(x), Interval(lo=0.0, hi=1.0))
    assert value == pytest.approx(reference, rel=1e-9)


def test_gauss_jacobi_rejects_infinite_domain():
    with pytest.raises(ValueError):
        build_rule(Interval(lo=0.0, hi=math.inf), QuadratureKind.GAUSS_JACOBI, 4)


def test_interval_rejects_nonintegrable_exponent():
    with pytest.raises(ValueError):
        Interval(lo=0.0, hi=1.0, lo_algebraic_exponent=-1.0)


def test_divergent_integral_raises():
    with pytest.raises(ConvergenceError):
        integrate_with_estimate(lambda x: 1.0 / x, Interval(lo=0.0, hi=1.0), max_level=40)


def test_gauss_legendre_is_exact_for_polynomials():
    x, w = gauss_legendre(-1.0, 3.0, 5)
    assert np.sum(w) == pytest.approx(4.0, rel=1e-14)
    assert np.sum(w * x ** 9) == pytest.approx((3.0 ** 10 - 1.0) / 10.0, rel=1e-13)


def test_batch_with_per_row_bounds():
    hi = np.array([0.5, 1.0, 2.0, 3.0])
    values, change = integrate_batch(lambda x: x * x, np.zeros(4), hi)
    assert np.allclose(values, hi ** 3 / 3.0, rtol=1e-10)
    assert change.shape == hi.shape


def test_batch_half_lines_with_row_parameters():
    rate = np.array([1.0, 2.0, 4.0])[:, None]
    values, _ = integrate_batch(lambda x: np.exp(-rate * x), np.zeros(3), np.full(3, np.inf))
    assert np.allclose(values, 1.0 / rate.ravel(), rtol=1e-10)


def test_batch_rejects_mixed_bounds():
    with pytest.raises(ValueError):
        integrate_batch(lambda x: x, np.zeros(2), np.array([1.0, np.inf]))


def test_empty_batch():
    values, change = integrate_batch(lambda x: x, np.zeros(0), np.zeros(0))
    assert values.size == 0 and change.size == 0


def test_iterated_integral_over_triangle():
    result = integrate_2d(lambda x, y: y, Interval(lo=0.0, hi=1.0), lambda x: (np.zeros_like(x), x))
    assert result.value == pytest.approx(1.0 / 6.0, rel=1e-10)
