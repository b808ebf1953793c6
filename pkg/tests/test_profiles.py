import math

import numpy as np
import pytest

from src.models.order import Order
from src.models.profile import ExtensionPoint, PhiKind, ProfileKind
from src.utils.error_handling import DomainError


def test_profile_a_limit_and_energy(profile_engine, constants_engine, order):
    profile = profile_engine.build_profile(ProfileKind.A, order)
    dbar = constants_engine.dbar(order)
    assert profile.limit_constant == pytest.approx(dbar, rel=1e-8)
    assert profile.energy == pytest.approx(dbar, rel=1e-6)


def test_profile_a_at_half_order(profile_engine, half):
    # A(t) = 1 - (2/pi) arctan t
    profile = profile_engine.build_profile(ProfileKind.A, half)
    t = np.array([0.05, 0.5, 1.0, 3.0, 20.0])
    value, first = profile_engine.profile_eval(profile, t)
    assert np.allclose(value, 1.0 - 2.0 / math.pi * np.arctan(t), rtol=1e-12)
    assert np.allclose(first, -2.0 / (math.pi * (1.0 + t ** 2)), rtol=1e-11)
    assert profile_engine.profile_eval(profile, 1.0)[0] == pytest.approx(0.5, rel=1e-12)


def test_profile_t_at_half_order(profile_engine, half):
    profile = profile_engine.build_profile(ProfileKind.T, half)
    t = np.array([1e-3, 0.3, 2.0, 15.0])
    value, first = profile_engine.profile_eval(profile, t)
    assert np.allclose(value, np.exp(-t), rtol=1e-13)
    assert np.allclose(first, -np.exp(-t), rtol=1e-13)
    assert profile.energy == pytest.approx(1.0, rel=1e-8)


def test_profile_t_limit(profile_engine, constants_engine, order):
    profile = profile_engine.build_profile(ProfileKind.T, order)
    assert profile.limit_constant == pytest.approx(constants_engine.ext_factor(order), rel=1e-8)
    assert profile.energy == pytest.approx(constants_engine.ext_factor(order), rel=1e-6)


def test_profile_b_limit_and_energy(profile_engine, constants_engine, order):
    profile = profile_engine.build_profile(ProfileKind.B, order)
    kbar = constants_engine.kbar(order)
    assert profile.limit_constant == pytest.approx(kbar, rel=1e-6)
    assert profile.energy == pytest.approx(kbar, rel=1e-6)


def test_profile_b_at_half_order(profile_engine, half):
    # B(t) = 1/2 + arctan(t) / pi
    profile = profile_engine.build_profile(ProfileKind.B, half)
    t = np.array([-30.0, -1.0, 0.0, 0.4, 1.0, 8.0])
    value, _ = profile_engine.profile_eval(profile, t)
    assert np.allclose(value, 0.5 + np.arctan(t) / math.pi, atol=1e-9)


def test_profile_b_angular_form_at_half_order(profile_engine, half):
    # a = 0: B = 1/2 + theta/pi and the flux is 1/pi everywhere
    profile = profile_engine.build_profile(ProfileKind.B, half)
    phi = np.array([1e-4, 0.1, 0.7, 1.5])
    for sign in (1.0, -1.0):
        value, flux = profile_engine.profile_b_angular(profile, phi, sign)
        assert np.allclose(value, 0.5 + sign * (math.pi / 2 - phi) / math.pi, atol=1e-9)
        assert np.allclose(flux, 1.0 / math.pi, rtol=1e-7)


@pytest.mark.parametrize("kind", list(ProfileKind))
def test_limit_and_energy_recompute_stored_values(profile_engine, half, kind):
    profile = profile_engine.build_profile(kind, half)
    assert profile_engine.profile_limit(profile) == pytest.approx(profile.limit_constant, rel=1e-10)
    assert profile_engine.profile_energy(profile) == pytest.approx(profile.energy, rel=1e-10)


def test_profile_b_matches_hypergeometric_form(profile_engine, order):
    profile = profile_engine.build_profile(ProfileKind.B, order)
    t = np.linspace(-6.0, 6.0, 25)
    value, first = profile_engine.profile_eval(profile, t)
    closed, closed_first = profile_engine.profile_b_closed_form(order, t)
    assert np.max(np.abs(value - closed)) <= 1e-8
    assert np.max(np.abs(first - closed_first)) <= 1e-7


def test_profile_b_is_monotone(profile_engine, order):
    profile = profile_engine.build_profile(ProfileKind.B, order)
    value, first = profile_engine.profile_eval(profile, np.linspace(-50.0, 50.0, 401))
    assert np.all(np.diff(value) > 0.0)
    assert np.all(first > 0.0)
    assert np.all((value > 0.0) & (value < 1.0))


@pytest.mark.parametrize("kind", [ProfileKind.A, ProfileKind.B, ProfileKind.T])
def test_ode_residuals(profile_engine, order, kind):
    profile = profile_engine.build_profile(kind, order)
    t = np.geomspace(0.05, 20.0, 30)
    assert np.max(profile_engine.ode_residual(profile, t)) <= 1e-5


@pytest.mark.parametrize("kind", [ProfileKind.A, ProfileKind.T])
def test_nonpositive_argument_rejected(profile_engine, half, kind):
    profile = profile_engine.build_profile(kind, half)
    with pytest.raises(DomainError):
        profile_engine.profile_eval(profile, 0.0)
    with pytest.raises(DomainError):
        profile_engine.profile_eval(profile, np.array([1.0, -2.0]))


def test_profiles_are_cached(profile_engine):
    first = profile_engine.build_profile(ProfileKind.A, Order(s=0.35))
    assert profile_engine.build_profile("A", Order(s=0.35)) is first


@pytest.mark.parametrize("s", [0.2, 0.3, 0.5, 0.7, 0.9])
def test_a_decay_slope(profile_engine, s):
    envelope = profile_engine.asymptotic_envelope_check(profile_engine.build_profile(ProfileKind.A, Order(s=s)))
    assert envelope["slope"] == pytest.approx(envelope["slope_target"], abs=1e-4)
    assert 0.0 < envelope["min"] <= envelope["max"]


def test_profile_a_is_monotone(profile_engine, order):
    profile = profile_engine.build_profile(ProfileKind.A, order)
    value, first = profile_engine.profile_eval(profile, np.geomspace(1e-3, 1e3, 500))
    assert np.all(value > 0.0)
    assert np.all(first < 0.0)
    assert np.all(np.diff(value) < 0.0)


@pytest.mark.parametrize("s", [0.5, 0.7, 0.9])
def test_profile_a_weighted_slope_bound(profile_engine, s):
    # t A' + (a/2) A <= 0 when a <= 0
    order = Order(s=s)
    t = np.geomspace(1e-3, 1e3, 500)
    value, first = profile_engine.profile_eval(profile_engine.build_profile(ProfileKind.A, order), t)
    assert np.all(t * first + order.a / 2 * value <= 1e-12)


@pytest.mark.parametrize("s", [0.5, 0.7, 0.9])
def test_profile_b_weighted_flux_bound(profile_engine, s):
    # (1+t^2) B' - (a/2) t B > 0 when a <= 0
    order = Order(s=s)
    half_grid = np.geomspace(1e-3, 1e2, 250)
    t = np.concatenate((-half_grid[::-1], half_grid))
    value, first = profile_engine.profile_eval(profile_engine.build_profile(ProfileKind.B, order), t)
    assert np.all(value > 0.0)
    assert np.all(first > 0.0)
    assert np.all((1.0 + t ** 2) * first - order.a / 2 * t * value > 0.0)


@pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
def test_boundary_values_and_limits(profile_engine, constants_engine, s):
    order = Order(s=s)
    a_profile = profile_engine.build_profile(ProfileKind.A, order)
    b_profile = profile_engine.build_profile(ProfileKind.B, order)
    t_profile = profile_engine.build_profile(ProfileKind.T, order)
    assert profile_engine.profile_eval(a_profile, 1e-8)[0] == pytest.approx(1.0, abs=1e-4)
    assert 0.0 < profile_engine.profile_eval(a_profile, 1e5)[0] < 1e-2
    assert profile_engine.profile_eval(b_profile, -1e6)[0] < 1e-2
    assert profile_engine.profile_eval(b_profile, 1e6)[0] > 1.0 - 1e-2
    assert profile_engine.profile_eval(t_profile, 1e-8)[0] == pytest.approx(1.0, abs=1e-4)
    assert profile_engine.profile_limit(a_profile) == pytest.approx(constants_engine.dbar(order), rel=1e-8)
    assert profile_engine.profile_limit(t_profile) == pytest.approx(constants_engine.ext_factor(order), rel=1e-8)


def test_profile_table_columns(profile_engine, half):
    table = profile_engine.profile_table(profile_engine.build_profile(ProfileKind.A, half), np.array([0.5, 1.0]))
    assert list(table.columns) == ["t", "value", "derivative"]
    assert table["value"].iloc[1] == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("kind,point", [
    (PhiKind.I, ExtensionPoint(x_n_or_signed_d=1.0, y=0.5)),
    (PhiKind.II, ExtensionPoint(x_n_or_signed_d=-0.7, y=0.9)),
])
def test_phi_is_weighted_harmonic(profile_engine, kind, point):
    assert abs(profile_engine.weighted_divergence(kind, Order(s=0.3), point)) <= 1e-4


def test_phi_one_needs_interior_point(profile_engine, half):
    with pytest.raises(DomainError):
        profile_engine.phi_eval(PhiKind.I, half, ExtensionPoint(x_n_or_signed_d=-1.0, y=1.0))
