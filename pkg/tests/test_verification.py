import pytest

from src.models.profile import ProfileKind
from src.models.reports import CheckResult, QuotientReport
from src.models.run_config import Command, RunConfig
from src.services.verification import VerificationService, quotient_check
from src.utils.error_handling import ConvergenceError


@pytest.fixture(scope="module")
def service(settings):
    return VerificationService(settings)


def test_constants_command(service):
    config = RunConfig(command=Command.CONSTANTS, s_grid=[0.25, 0.5, 0.75], n=3)
    results = service.run(config)
    assert [r.s for r in results] == [0.25, 0.5, 0.75]
    assert all(r.passed and r.n == 3 for r in results)


@pytest.mark.parametrize("kind", list(ProfileKind))
def test_profile_checks_pass(service, kind):
    result = service.profile_check(kind, 0.5)
    assert result.passed, result.report
    assert result.check == f"profile_{kind.value}"


def test_profile_table_grid(service):
    frame = service.profile_table(ProfileKind.B, [0.5], t_max=1.0)
    assert list(frame.columns) == ["s", "t", "value", "derivative"]
    assert len(frame) == 41
    assert frame["t"].min() == pytest.approx(-1.0)


def test_failures_become_rows(service):
    def broken() -> CheckResult:
        raise ConvergenceError("not converged", estimate=1.0, error=0.5)

    results = service.run_checks([("broken", 0.5, None, broken)])
    assert len(results) == 1
    assert not results[0].passed
    assert results[0].failed
    assert results[0].report["error_type"] == "ConvergenceError"


def test_thread_count_keeps_order(service):
    config = RunConfig(command=Command.CONSTANTS, s_grid=[0.2, 0.4, 0.6, 0.8], threads=3)
    assert [r.s for r in service.run(config)] == [0.2, 0.4, 0.6, 0.8]


def test_quotient_check_carries_assertion():
    report = QuotientReport.build("spectral_hardy", 0.3, 1.0, 2.0, 0.6, asserted=False)
    result = quotient_check("spectral_hardy", report)
    assert not result.passed and not result.asserted
    assert not result.failed
    assert result.summary_line().startswith("[INFO] spectral_hardy")


def test_fourier_check(service):
    assert service.fourier_check(0.5).passed


@pytest.mark.slow
def test_discrete_check_runs_refined_grid(service, settings):
    result = service.discrete_check(0.5)
    assert result.passed, result.report
    assert result.report["grids"] == [settings.grid_nx, 2 * settings.grid_nx]
    assert result.report["refinement_monotone"]
    assert result.value <= result.report["coarse"]["quotient"]


@pytest.mark.slow
def test_hsm_check_covers_family_and_sequence(service):
    result = service.hsm_check(0.5, 2, seed=3)
    assert result.passed, result.report
    assert len(result.report["family_implied_c"]) == 10
    assert result.report["epsilons"] == [1e-2, 1e-3, 1e-4]
    assert len(result.report["sequence_implied_c"]) == 3
    assert result.value == min(result.report["family_implied_c"])
