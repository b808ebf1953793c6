import pytest

from src.models.geometry import QuarterPlaneGrid, SequenceParams, TestFamily, TestFunctionSpec
from src.models.order import Order
from src.utils.error_handling import DomainError

SMALL_GRID = QuarterPlaneGrid(X=8.0, Y=8.0, nx=24, ny=24, grading_exponent=2.0)
BOUNDARY_BUMP = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 1.0, "c1": 0.0, "width": 0.5})


def test_sequence_one_decreases_to_dbar(rayleigh_engine, constants_engine, order):
    quotients = [rayleigh_engine.sequence_quotient_I(order, SequenceParams(epsilon=e)).quotient
                 for e in (1e-2, 1e-3, 1e-4)]
    dbar = constants_engine.dbar(order)
    assert quotients[0] > quotients[1] > quotients[2] >= dbar - 1e-9
    assert quotients[2] <= 1.15 * dbar


def test_sequence_one_report_fields(rayleigh_engine, half):
    report = rayleigh_engine.sequence_quotient_I(half, SequenceParams(epsilon=1e-3))
    assert report.kind == "sequence_I"
    assert report.tolerance_met
    assert report.deficit == pytest.approx(report.quotient - report.target)
    assert report.params["epsilon"] == 1e-3


@pytest.mark.slow
def test_sequence_one_with_cutoff_corrections(rayleigh_engine, constants_engine):
    order = Order(s=0.6)
    report = rayleigh_engine.sequence_quotient_I(order, SequenceParams(epsilon=1e-2), include_corrections=True)
    assert report.extra["corrected_quotient"] >= constants_engine.dbar(order) - 1e-9


@pytest.mark.parametrize("s", [0.5, 0.7, 0.9])
def test_sequence_two_near_kbar(rayleigh_engine, constants_engine, s):
    order = Order(s=s)
    report = rayleigh_engine.sequence_quotient_II(order, SequenceParams(epsilon=1e-3))
    kbar = constants_engine.kbar(order)
    assert report.asserted
    assert report.tolerance_met
    assert abs(report.quotient - kbar) <= 0.02 * kbar
    assert report.extra["extrapolated_limit"] == pytest.approx(kbar, rel=1e-4)


def test_sequence_two_not_asserted_below_half(rayleigh_engine):
    report = rayleigh_engine.sequence_quotient_II(Order(s=0.3), SequenceParams(epsilon=1e-3))
    assert not report.asserted


def test_sequence_two_near_kbar_below_half(rayleigh_engine, constants_engine):
    order = Order(s=0.3)
    report = rayleigh_engine.sequence_quotient_II(order, SequenceParams(epsilon=1e-3))
    kbar = constants_engine.kbar(order)
    assert report.target == pytest.approx(kbar)
    assert abs(report.quotient - kbar) <= 0.02 * kbar


def test_discrete_bound_above_dbar(rayleigh_engine, constants_engine, order):
    report = rayleigh_engine.discrete_quotient(order, SMALL_GRID)
    assert report.quotient >= constants_engine.dbar(order)
    assert report.extra["eigenvector_positive"]


def test_discrete_bound_improves_under_refinement(rayleigh_engine):
    order = Order(s=0.4)
    coarse = rayleigh_engine.discrete_quotient(order, QuarterPlaneGrid(X=8.0, Y=8.0, nx=12, ny=12,
                                                                       grading_exponent=2.0))
    fine = rayleigh_engine.discrete_quotient(order, SMALL_GRID)
    # nested grids, so the Galerkin eigenvalue cannot grow
    assert fine.quotient <= coarse.quotient + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("s", [0.4, 0.5, 0.6])
def test_discrete_bound_on_default_and_refined_grids(rayleigh_engine, constants_engine, s):
    order = Order(s=s)
    grid = QuarterPlaneGrid(X=8.0, Y=8.0, nx=96, ny=96, grading_exponent=2.0)
    coarse = rayleigh_engine.discrete_quotient(order, grid)
    fine = rayleigh_engine.discrete_quotient(order, grid.model_copy(update={"nx": 192, "ny": 192}))
    dbar = constants_engine.dbar(order)
    assert fine.quotient <= coarse.quotient + 1e-12
    for report in (coarse, fine):
        assert dbar <= report.quotient <= 1.25 * dbar


@pytest.mark.slow
def test_hsm_deficit_matches_ground_state_remainder(rayleigh_engine):
    report = rayleigh_engine.hsm_deficit(Order(s=0.5), BOUNDARY_BUMP, n=2)
    assert report.deficit >= -1e-9
    assert report.identity_residual <= 1e-6
    assert report.sobolev_term > 0.0 and report.bulk_sobolev_term > 0.0
    assert report.implied_c == pytest.approx(report.deficit / report.sobolev_term)


@pytest.mark.slow
def test_hsm_deficit_over_random_bump_family(rayleigh_engine):
    order = Order(s=0.5)
    family = [BOUNDARY_BUMP] + rayleigh_engine.families.random_bumps(9, 0, (0.8, 1.5), (0.0, 0.2), (0.3, 0.6))
    reports = [rayleigh_engine.hsm_deficit(order, spec, n=2) for spec in family]
    assert len(reports) == 10
    assert all(r.deficit >= -1e-9 for r in reports)
    assert all(r.identity_residual <= 1e-6 for r in reports)
    assert min(r.implied_c for r in reports) > 0.0


@pytest.mark.slow
def test_hsm_along_cutoff_sequence(rayleigh_engine, constants_engine):
    order = Order(s=0.5)
    reports = rayleigh_engine.hsm_along_sequence(order, (1e-2, 1e-3, 1e-4), n=2)
    assert [r.family for r in reports] == [TestFamily.CUTOFF_I.value] * 3
    assert [r.params["epsilon"] for r in reports] == [1e-2, 1e-3, 1e-4]
    dbar = constants_engine.dbar(order)
    relative = [r.deficit / (dbar * r.hardy_term) for r in reports]
    assert relative[0] > relative[1] > relative[2] > 0.0
    assert all(r.identity_residual <= 1e-6 for r in reports)
    assert all(r.implied_c > 0.0 for r in reports)


@pytest.mark.slow
def test_ground_state_remainder_in_three_dimensions(rayleigh_engine):
    remainder, residual = rayleigh_engine.ground_state_remainder(Order(s=0.3), BOUNDARY_BUMP, n=3)
    assert remainder > 0.0
    assert residual <= 1e-6


def test_hsm_needs_two_dimensions(rayleigh_engine, half):
    with pytest.raises(DomainError):
        rayleigh_engine.hsm_deficit(half, BOUNDARY_BUMP, n=1)


def test_bump_touching_the_corner_rejected(rayleigh_engine, half):
    spec = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 0.2, "c1": 0.0, "width": 0.5})
    with pytest.raises(DomainError):
        rayleigh_engine.hsm_deficit(half, spec, n=2)


def test_sequence_params_ordering():
    with pytest.raises(ValueError):
        SequenceParams(epsilon=2.0, delta=1.0)
