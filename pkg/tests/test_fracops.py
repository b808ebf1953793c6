import math

import numpy as np
import pytest

from src.models.geometry import SpectralBasis, TestFamily, TestFunctionSpec
from src.models.order import Order
from src.utils.error_handling import DomainError

GAUSSIAN = TestFunctionSpec(family=TestFamily.GAUSSIAN, params={"center": 0.0, "sigma": 1.0})
LINE_BUMP = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"center": 1.0, "width": 0.5})
PLANE_BUMP = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 0.0, "c1": 1.0, "width": 0.5})


def test_spectral_form_of_first_mode(fracops_engine, order):
    basis = SpectralBasis.interval(math.pi, [1.0])
    assert fracops_engine.spectral_form(basis, order) == pytest.approx(1.0, rel=1e-15)


def test_spectral_form_scales_with_eigenvalue(fracops_engine):
    basis = SpectralBasis.interval(math.pi, [0.0, 1.0])
    assert fracops_engine.spectral_form(basis, Order(s=0.5)) == pytest.approx(2.0, rel=1e-15)


@pytest.mark.parametrize("s", [0.5, 0.75])
def test_spectral_hardy_quotient_above_target(fracops_engine, constants_engine, s):
    order = Order(s=s)
    for basis in fracops_engine.families.random_sine_series(3, seed=7, modes=16):
        report = fracops_engine.spectral_hardy_quotient(basis, order)
        assert report.asserted
        assert report.quotient >= constants_engine.d_spec(order) - 1e-9


def test_spectral_hardy_not_asserted_below_half(fracops_engine):
    report = fracops_engine.spectral_hardy_quotient(SpectralBasis.interval(math.pi, [1.0]), Order(s=0.3))
    assert not report.asserted


@pytest.mark.slow
def test_spectral_hardy_on_rectangle(fracops_engine, constants_engine):
    order = Order(s=0.6)
    basis = fracops_engine.families.random_sine_series(1, seed=3, modes=4, lengths=(math.pi, 2.0))[0]
    report = fracops_engine.spectral_hardy_quotient(basis, order)
    assert report.quotient >= constants_engine.d_spec(order) - 1e-9


def test_distance_integral_needs_low_dimension(fracops_engine, half):
    cube = SpectralBasis(lengths=[1.0, 1.0, 1.0], modes=[[1, 1, 1]], coefficients=[1.0])
    with pytest.raises(DomainError):
        fracops_engine.spectral_hardy_quotient(cube, half)


def test_extension_energy_identity(fracops_engine, order):
    basis = fracops_engine.families.random_sine_series(1, seed=1, modes=16)[0]
    report = fracops_engine.spectral_extension_energy(basis, order)
    assert report.identity_residual <= 1e-6
    assert report.truncation_bound > 0.0


@pytest.mark.parametrize("s", [0.3, 0.5, 0.8])
def test_truncation_bound_covers_the_dropped_modes(fracops_engine, s):
    modes = 16
    basis = SpectralBasis.interval(math.pi, [k ** -2.0 for k in range(1, modes + 1)])
    bound = fracops_engine.truncation_bound(basis, Order(s=s))
    k = np.arange(modes + 1, 200001, dtype=float)
    dropped = np.sum(k ** (2 * s) * k ** -4.0)
    assert bound == pytest.approx(modes ** (2 * s) * modes ** -3.0 / (3 - 2 * s), rel=1e-12)
    assert dropped <= bound <= 1.2 * dropped


def test_truncation_bound_on_rectangle(fracops_engine):
    s = 0.6
    lengths = (math.pi, 2.0)
    index = np.arange(1, 5, dtype=float)
    basis = SpectralBasis.box(lengths, np.outer(index, index) ** -2.0)
    bound = fracops_engine.truncation_bound(basis, Order(s=s))
    i, j = np.meshgrid(np.arange(1, 401, dtype=float), np.arange(1, 401, dtype=float), indexing="ij")
    eigenvalues = math.pi ** 2 * (i ** 2 / lengths[0] ** 2 + j ** 2 / lengths[1] ** 2)
    outside = (i > 4) | (j > 4)
    dropped = np.sum((eigenvalues ** s * (i * j) ** -4.0)[outside])
    assert dropped <= bound


def test_line_dirichlet_split(fracops_engine):
    forms = fracops_engine.dirichlet_form(LINE_BUMP, Order(s=0.4), n=1)
    assert forms.split_residual <= 1e-6
    assert forms.omega_complement > 0.0
    assert forms.qmc_full_form is None


def test_line_dirichlet_quotients(fracops_engine):
    report = fracops_engine.dirichlet_hardy_quotient(LINE_BUMP, Order(s=0.6), n=1)
    assert not report.normalized.asserted
    assert report.ratio_residual <= 1e-9


@pytest.mark.slow
def test_plane_dirichlet_quotient(fracops_engine, constants_engine):
    order = Order(s=0.5)
    report = fracops_engine.dirichlet_hardy_quotient(PLANE_BUMP, order, n=2)
    assert report.normalized.asserted
    assert report.normalized.quotient >= constants_engine.gamma_sq_over_pi(order) - 1e-9
    assert report.unnormalized.quotient >= constants_engine.k_ns(2, order) - 1e-9
    assert report.ratio_residual <= 1e-9


@pytest.mark.slow
def test_plane_form_cross_checks(fracops_engine):
    forms = fracops_engine.dirichlet_form(PLANE_BUMP, Order(s=0.6), n=2)
    assert forms.split_residual <= 1e-6
    assert forms.qmc_full_form == pytest.approx(forms.full_form, rel=1e-2)
    assert forms.resolution_error < 1e-2 * forms.full_form


@pytest.mark.slow
def test_plane_form_reflection_symmetry(fracops_engine):
    order = Order(s=0.6)
    left = fracops_engine.dirichlet_form(
        TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": -0.4, "c1": 1.0, "width": 0.4}), order, n=2)
    right = fracops_engine.dirichlet_form(
        TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 0.4, "c1": 1.0, "width": 0.4}), order, n=2)
    assert left.full_form == pytest.approx(right.full_form, rel=1e-8)


@pytest.mark.slow
def test_plane_censored_quotient(fracops_engine, constants_engine):
    order = Order(s=0.75)
    spec = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 0.0, "c1": 1.0, "width": 0.2})
    report = fracops_engine.dirichlet_hardy_quotient(spec, order, n=2)
    assert report.censored.quotient >= constants_engine.kappa_ns(2, order) - 1e-9


def test_line_form_under_translation(fracops_engine):
    order = Order(s=0.5)
    near = fracops_engine.dirichlet_form(LINE_BUMP, order, n=1)
    deeper = fracops_engine.dirichlet_form(
        TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"center": 2.0, "width": 0.5}), order, n=1)
    assert deeper.full_form == pytest.approx(near.full_form, rel=1e-8)
    assert deeper.omega_complement < near.omega_complement


def test_dirichlet_rejections(fracops_engine, half):
    with pytest.raises(DomainError):
        fracops_engine.dirichlet_form(LINE_BUMP, half, n=3)
    with pytest.raises(DomainError):
        fracops_engine.dirichlet_form(GAUSSIAN, half, n=2)
    touching = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"center": 0.2, "width": 0.5})
    with pytest.raises(DomainError):
        fracops_engine.dirichlet_form(touching, half, n=1)


@pytest.mark.parametrize("s", [0.2, 0.5, 0.8])
def test_fourier_identity(fracops_engine, s):
    report = fracops_engine.fourier_energy_identity(GAUSSIAN, Order(s=s))
    assert report.residual <= 1e-5
    assert report.constant_chain_residual <= 1e-12
    assert report.fourier_side == pytest.approx(math.gamma(s + 0.5), rel=1e-12)


def test_fourier_energy_tends_to_gradient_energy(fracops_engine):
    ratios = [fracops_engine.fourier_energy_identity(GAUSSIAN, Order(s=s)).plancherel_ratio
              for s in (0.5, 0.7, 0.9)]
    assert np.all(np.diff(np.abs(np.array(ratios) - 1.0)) < 0.0)


def test_fourier_needs_gaussian(fracops_engine, half):
    with pytest.raises(DomainError):
        fracops_engine.fourier_energy_identity(LINE_BUMP, half)
