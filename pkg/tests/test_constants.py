import math

import pytest

from src.models.order import Order
from src.numerics.special import gamma


def test_half_order_values(constants_engine, half):
    assert constants_engine.dbar(half) == pytest.approx(2.0 / math.pi, rel=1e-15)
    assert constants_engine.kbar(half) == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert constants_engine.d_spec(half) == pytest.approx(2.0 / math.pi, rel=1e-15)
    assert constants_engine.c_ns(1, half) == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert constants_engine.ext_factor(half) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_identities_hold_to_rounding(constants_engine, n, s):
    residuals = constants_engine.identity_residuals(n, Order(s=s))
    assert set(residuals) == {"dbar_kbar_trig", "dspec_dbar_extension", "kns_kbar", "kns_cns", "kappa_split"}
    assert max(residuals.values()) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
def test_kns_follows_from_kbar(constants_engine, n, s):
    order = Order(s=s)
    link = math.pi ** (n / 2) * math.gamma(s) / (s * math.gamma((n + 2 * s) / 2))
    assert constants_engine.k_ns(n, order) == pytest.approx(constants_engine.kbar(order) * link, rel=1e-12)
    assert constants_engine.identity_residuals(n, order)["kns_kbar"] <= 1e-12


@pytest.mark.parametrize("s", [0.2, 0.6])
def test_dbar_against_math_gamma(constants_engine, s):
    expected = (2.0 * math.gamma(1.0 - s) * math.gamma((3.0 + 2 * s) / 4.0) ** 2
                / (math.gamma((3.0 - 2 * s) / 4.0) ** 2 * math.gamma(s)))
    assert constants_engine.dbar(Order(s=s)) == pytest.approx(expected, rel=1e-14)
    assert gamma(s) == pytest.approx(math.gamma(s), rel=1e-15)


def test_sharp_constants_row(constants_engine):
    row = constants_engine.sharp_constants(1, Order(s=0.3))
    assert row.extrapolated
    assert not constants_engine.sharp_constants(2, Order(s=0.3)).extrapolated
    assert row.n == 1 and row.s == 0.3


def test_censored_constant_changes_sign(constants_engine):
    # the bracket vanishes at s = 1/2 and is positive above
    assert constants_engine.kappa_ns(2, Order(s=0.5)) == pytest.approx(0.0, abs=1e-14)
    assert constants_engine.kappa_ns(2, Order(s=0.8)) > 0.0


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("s", [0.3, 0.7])
def test_kernel_prefactor_by_quadrature(constants_engine, n, s):
    order = Order(s=s)
    assert constants_engine.kernel_mass_quadrature(n, order) == pytest.approx(
        constants_engine.kernel_prefactor(n, order), rel=1e-9)


def test_kernel_mass_scales_with_height(constants_engine):
    order = Order(s=0.4)
    assert constants_engine.kernel_mass_quadrature(2, order, x_n=2.0) == pytest.approx(
        constants_engine.kernel_prefactor(2, order) * 2.0 ** -0.8, rel=1e-9)


def test_constants_table_shape(constants_engine):
    table = constants_engine.constants_table([1, 2], [0.25, 0.5, 0.75])
    assert len(table) == 6
    assert {"s", "n", "dbar", "kbar", "d_spec", "k_ns", "kappa_ns", "extrapolated"} <= set(table.columns)
    assert table.loc[(table.n == 2) & (table.s == 0.5), "dbar"].item() == pytest.approx(2.0 / math.pi)


def test_nonpositive_dimension_rejected(constants_engine):
    with pytest.raises(ValueError):
        constants_engine.sharp_constants(0, Order(s=0.5))


def test_order_bounds():
    with pytest.raises(ValueError):
        Order(s=1.0)
    assert Order.from_a(0.0).s == 0.5


def test_tolerance_lookup(constants_engine, settings):
    assert constants_engine.tolerance() == settings.quad_tol
    assert constants_engine.tolerance(field="bvp_tol") == settings.bvp_tol
    assert constants_engine.tolerance(1e-3) == 1e-3
    assert constants_engine.tolerance(1e-14, floor=1e-9) == 1e-9
