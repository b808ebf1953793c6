import pytest

from src.models.geometry import TestFamily, TestFunctionSpec
from src.models.reports import LemmaId, LemmaParams
from src.services.lemmas import LemmaEngine, log_weight
from src.utils.error_handling import DomainError, InvalidParamsError


def bump(c0, c1, width):
    return TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": c0, "c1": c1, "width": width})


BUMP = bump(1.0, 1.0, 0.3)
MIRRORED = bump(-1.0, 1.0, 0.3)


@pytest.mark.parametrize("params,expected", [
    (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L41), 1.0),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=1.0), 1.0 / 3.0),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=-1.0, lemma_id=LemmaId.L44), 2.0),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L45), 0.25),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L46, R_in=1.0), 1.0 / 36.0),
    (LemmaParams(A=0.5, B=0.0, Gamma_w=0.5, lemma_id=LemmaId.L47), 1.0 / 7.0),
])
def test_lemma_constants(lemma_engine, params, expected):
    assert lemma_engine.lemma_constant(params) == pytest.approx(expected, rel=1e-15)


def test_square_constant_is_half_of_linear_squared(lemma_engine):
    linear = lemma_engine.lemma_constant(LemmaParams(A=0.3, B=0.7, Gamma_w=0.4, lemma_id=LemmaId.L41))
    square = lemma_engine.lemma_constant(LemmaParams(A=0.3, B=0.7, Gamma_w=0.4, lemma_id=LemmaId.L45))
    assert square == pytest.approx((linear / 2.0) ** 2, rel=1e-15)


@pytest.mark.parametrize("params", [
    LemmaParams(A=0.0, B=0.0, Gamma_w=1.5, lemma_id=LemmaId.L41),
    LemmaParams(A=-1.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L44),
    LemmaParams(A=0.0, B=-1.2, Gamma_w=0.0, lemma_id=LemmaId.L45),
    LemmaParams(A=0.8, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L47),
    LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42),
])
def test_invalid_params_rejected(lemma_engine, params):
    with pytest.raises(InvalidParamsError):
        lemma_engine.lemma_constant(params)


@pytest.mark.parametrize("params,spec", [
    (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L41), BUMP),
    (LemmaParams(A=0.4, B=-0.3, Gamma_w=-0.5, lemma_id=LemmaId.L41), BUMP),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=1.0), BUMP),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L44), MIRRORED),
    (LemmaParams(A=1.2, B=0.5, Gamma_w=0.8, lemma_id=LemmaId.L44), MIRRORED),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L45), BUMP),
    (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L46, R_in=1.0), BUMP),
    (LemmaParams(A=0.5, B=0.0, Gamma_w=0.5, lemma_id=LemmaId.L47), BUMP),
])
def test_lemma_margins_nonnegative(lemma_engine, params, spec):
    report = lemma_engine.verify(params, spec)
    assert report.lhs > 0.0
    assert report.margin >= -1e-8
    assert report.margin == pytest.approx(report.rhs - report.lhs)


def test_l41_degrades_toward_parameter_boundary(lemma_engine):
    # A + B + 2 = 2.5, so the region ends at Gamma = 1.25
    constants = []
    for gap in (1e-1, 1e-2, 1e-3, 1e-4):
        params = LemmaParams(A=0.3, B=0.2, Gamma_w=1.25 - gap, lemma_id=LemmaId.L41)
        report = lemma_engine.verify(params, BUMP)
        assert report.constant_used >= 0.0
        assert report.margin >= -1e-8
        constants.append(report.constant_used)
    assert constants == sorted(constants, reverse=True)
    assert constants[-1] == pytest.approx(1.2 * 2e-4 / 2.5, rel=1e-9)
    for gamma_w in (1.25, 1.3):
        with pytest.raises(InvalidParamsError):
            lemma_engine.verify(LemmaParams(A=0.3, B=0.2, Gamma_w=gamma_w, lemma_id=LemmaId.L41), BUMP)


def test_scan_bumps_reach_the_boundary(lemma_engine):
    for lemma in LemmaId:
        specs = lemma_engine.scan_bumps(lemma, count=4, seed=2)
        touching = [s for s in specs if s.params["c1"] < s.params["width"]]
        assert len(specs) == 4
        assert len(touching) == 2


@pytest.mark.parametrize("params,spec", [
    (LemmaParams(A=-0.5, B=0.3, Gamma_w=0.2, lemma_id=LemmaId.L41), bump(1.0, 0.1, 0.4)),
    (LemmaParams(A=0.5, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=1.0), bump(1.0, 0.0, 0.4)),
    (LemmaParams(A=0.2, B=0.4, Gamma_w=0.3, lemma_id=LemmaId.L44), bump(-1.0, 0.1, 0.4)),
    (LemmaParams(A=-0.5, B=0.3, Gamma_w=0.2, lemma_id=LemmaId.L45), bump(1.0, 0.1, 0.4)),
    (LemmaParams(A=0.5, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L46, R_in=1.0), bump(1.0, 0.0, 0.4)),
    (LemmaParams(A=0.4, B=0.1, Gamma_w=0.5, lemma_id=LemmaId.L47), bump(1.0, 0.1, 0.4)),
])
def test_margins_for_bumps_cut_by_the_boundary(lemma_engine, params, spec):
    report = lemma_engine.verify(params, spec)
    assert report.lhs > 0.0
    assert report.margin >= -1e-8


def test_log_lemmas_report_ridge(lemma_engine):
    # the bump straddles the midplane x_n = R_in
    report = lemma_engine.verify(LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=1.0), BUMP)
    assert report.extra["ridge"] > 0.0
    off_ridge = lemma_engine.verify(LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=2.0), BUMP)
    assert off_ridge.extra["ridge"] == 0.0


def test_dilation_invariance(lemma_engine):
    params = LemmaParams(A=0.3, B=0.2, Gamma_w=0.6, lemma_id=LemmaId.L41)
    small = lemma_engine.verify(params, bump(1.0, 1.0, 0.3))
    large = lemma_engine.verify(params, bump(2.0, 2.0, 0.6))
    assert small.lhs / small.rhs == pytest.approx(large.lhs / large.rhs, rel=1e-6)


def test_wrong_lemma_kind(lemma_engine):
    with pytest.raises(DomainError):
        lemma_engine.verify_l1(LemmaParams(A=0.0, B=0.0, lemma_id=LemmaId.L45), BUMP)
    with pytest.raises(DomainError):
        lemma_engine.verify_l2(LemmaParams(A=0.0, B=0.0, lemma_id=LemmaId.L41), BUMP)


def test_test_function_outside_geometry(lemma_engine):
    with pytest.raises(DomainError):
        lemma_engine.verify(LemmaParams(A=0.0, B=0.0, lemma_id=LemmaId.L44), BUMP)
    with pytest.raises(DomainError):
        lemma_engine.verify(LemmaParams(A=0.0, B=0.0, lemma_id=LemmaId.L41), MIRRORED)
    with pytest.raises(DomainError):
        lemma_engine.verify(LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=0.6), BUMP)
    with pytest.raises(DomainError):
        lemma_engine.verify(LemmaParams(A=0.0, B=0.0, lemma_id=LemmaId.L41),
                            TestFunctionSpec(family=TestFamily.GAUSSIAN, params={"center": 1.0}))


def test_random_params_inside_region(lemma_engine):
    for lemma in LemmaId:
        for params in lemma_engine.random_params(lemma, count=20, seed=4):
            LemmaEngine.validate(params)


def test_small_scan_is_deterministic(lemma_engine):
    first = lemma_engine.scan(LemmaId.L41, samples=2, bumps=1, seed=11)
    second = lemma_engine.scan(LemmaId.L41, samples=2, bumps=1, seed=11, threads=2)
    assert len(first) == 2
    assert list(first.columns) == ["lemma_id", "A", "B", "Gamma_w", "R_in", "c0", "c1", "width",
                                   "lhs", "rhs", "constant", "margin"]
    assert first.equals(second)
    assert (first["margin"] >= -1e-8).all()


def test_log_weight():
    assert log_weight(1.0) == 1.0
    assert log_weight(0.5) == pytest.approx(1.0 / (1.0 + 0.6931471805599453))
