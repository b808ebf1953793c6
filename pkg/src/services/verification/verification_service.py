"""
Verification Service - runs the per-module acceptance checks behind the CLI.

Each check is a named callable returning a CheckResult. Checks run on a
thread pool and come back in submission order, so output does not depend on
the thread count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ...core.helpers import log_grid, relative_difference
from ...core.logging import performance_logger
from ...models.geometry import SequenceParams, TestFamily, TestFunctionSpec
from ...models.order import Order
from ...models.profile import ProfileKind
from ...models.reports import CheckResult, LemmaId, LemmaParams, QuotientReport
from ...models.run_config import Command, RunConfig
from ...numerics.special import gamma
from ...utils.error_handling import create_error_response, safe_execute
from ..base_service import BaseService
from ..constants import ConstantsEngine
from ..fracops import FracopsEngine
from ..lemmas import LemmaEngine
from ..profiles import ProfileEngine
from ..rayleigh import RayleighEngine

Check = Tuple[str, Optional[float], Optional[int], Callable[[], CheckResult]]

IDENTITY_TOL = 1e-12
PROFILE_LIMIT_TOL = {ProfileKind.A: 1e-8, ProfileKind.B: 1e-6, ProfileKind.T: 1e-8}
PROFILE_ENERGY_TOL = 1e-6
ODE_RESIDUAL_TOL = 1e-5
B_ORACLE_TOL = 1e-8
SEQUENCE_I_EPSILONS = (1e-2, 1e-3, 1e-4)
SEQUENCE_I_BAND = 0.15
SEQUENCE_II_EPSILON = 1e-3
SEQUENCE_II_BAND = 0.02
DISCRETE_UPPER = 1.25
HSM_IDENTITY_TOL = 1e-6
EXTENSION_TOL = 1e-6
FOURIER_TOL = 1e-5
LEMMA_MARGIN_TOL = 1e-8
SCAN_FUNCTIONS = 10
# sine modes of the random spectral test functions
SCAN_MODES = 32
HSM_BUMP = {"c0": 1.0, "c1": 0.0, "width": 0.5}
HSM_FAMILY_SIZE = 10
HSM_FAMILY_SIZE_QUICK = 3
# (x_n center, y center, width): supports stay clear of x_n = 0 and cut y = 0
HSM_BUMP_RANGES = ((0.8, 1.5), (0.0, 0.2), (0.3, 0.6))
HSM_EPSILONS = (1e-2, 1e-3, 1e-4)


def quotient_check(name: str, report: QuotientReport, n: Optional[int] = None,
                   passed: Optional[bool] = None) -> CheckResult:
    """CheckResult of a quotient report; passed defaults to its tolerance verdict."""
    return CheckResult(
        check=name, s=report.s, n=n,
        passed=report.tolerance_met if passed is None else passed,
        asserted=report.asserted, value=report.quotient, target=report.target,
        report=report.model_dump(),
    )


class VerificationService(BaseService):
    """
    Check runner for the command-line surface.

    Responsibilities:
    - Build the list of checks of each command from a RunConfig
    - Run them on a worker pool with deterministic ordering
    - Turn numerical failures into failed rows instead of aborting the run
    """

    def __init__(self, settings=None):
        super().__init__("VerificationService", settings)
        self.profiles = ProfileEngine(self.settings)
        self.constants = ConstantsEngine(self.settings)
        self.rayleigh = RayleighEngine(self.profiles, self.settings)
        self.fracops = FracopsEngine(self.profiles, self.settings)
        self.lemmas = LemmaEngine(self.fracops.families, self.settings)

    # ------------------------------------------------------------------ running

    def _guarded(self, name: str, s: Optional[float], n: Optional[int],
                 check: Callable[[], CheckResult]) -> CheckResult:
        def failure(error: Exception) -> CheckResult:
            return CheckResult(check=name, s=s, n=n, passed=False,
                               report=create_error_response(name, error))

        with performance_logger.timed(name, s=s, n=n):
            return safe_execute(check, fallback_result=failure, logger=self.logger, operation_name=name)

    def run_checks(self, checks: List[Check], threads: int = 1) -> List[CheckResult]:
        """Run checks on a pool of `threads` workers, results in submission order."""
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            return list(pool.map(lambda c: self._guarded(*c), checks))

    def checks_for(self, config: RunConfig) -> List[Check]:
        """Checks of config.command."""
        command = Command(config.command)
        if command == Command.CONSTANTS:
            return self.constants_checks(config)
        if command == Command.PROFILE:
            kind = ProfileKind(config.options.get("kind", ProfileKind.A.value))
            return self.profile_checks(config, (kind,))
        if command == Command.RAYLEIGH:
            return self.rayleigh_checks(config)
        if command == Command.FRACOPS:
            return self.fracops_checks(config)
        if command == Command.LEMMAS:
            return self.lemma_checks(config)
        return (self.constants_checks(config) + self.profile_checks(config, tuple(ProfileKind))
                + self.rayleigh_checks(config) + self.fracops_checks(config) + self.lemma_checks(config))

    def run(self, config: RunConfig) -> List[CheckResult]:
        self.log_operation_start("run", command=config.command, threads=config.threads)
        results = self.run_checks(self.checks_for(config), config.threads)
        failed = sum(r.failed for r in results)
        self.log_operation_success("run", f"checks={len(results)}, failed={failed}")
        return results

    # --------------------------------------------------------------- constants

    def constants_checks(self, config: RunConfig) -> List[Check]:
        def check(s: float) -> CheckResult:
            order = Order(s=s)
            row = self.constants.sharp_constants(config.n, order)
            residuals = self.constants.identity_residuals(config.n, order)
            worst = max(residuals.values())
            return CheckResult(check="constants", s=s, n=config.n, passed=worst <= IDENTITY_TOL,
                               value=row.dbar, report={**row.model_dump(), "residuals": residuals})

        return [("constants", s, config.n, lambda s=s: check(s)) for s in config.s_grid]

    # ---------------------------------------------------------------- profiles

    def _profile_target(self, kind: ProfileKind, order: Order) -> float:
        if kind == ProfileKind.A:
            return self.constants.dbar(order)
        if kind == ProfileKind.B:
            return self.constants.kbar(order)
        return self.constants.ext_factor(order)

    def profile_check(self, kind: ProfileKind, s: float) -> CheckResult:
        """Limit constant, energy identity, ODE residual and the kind-specific extras."""
        order = Order(s=s)
        profile = self.profiles.build_profile(kind, order)
        target = self._profile_target(kind, order)
        limit_residual = relative_difference(profile.limit_constant, target)
        energy_residual = relative_difference(profile.energy, target)
        t = log_grid(1e-3, 1e2, 64)
        ode = float(np.max(self.profiles.ode_residual(profile, t)))
        report = {"kind": kind.value, "limit_constant": profile.limit_constant, "energy": profile.energy,
                  "limit_residual": limit_residual, "energy_residual": energy_residual, "ode_residual": ode}
        passed = (limit_residual <= PROFILE_LIMIT_TOL[kind] and energy_residual <= PROFILE_ENERGY_TOL
                  and ode <= ODE_RESIDUAL_TOL)
        if kind == ProfileKind.B:
            both = np.concatenate((-t[::-1], t))
            value, first = self.profiles.profile_eval(profile, both)
            oracle, _ = self.profiles.profile_b_closed_form(order, both)
            report["closed_form_error"] = float(np.max(np.abs(value - oracle)))
            report["monotone"] = bool(np.all(first > 0.0))
            passed = passed and report["closed_form_error"] <= B_ORACLE_TOL and report["monotone"]
        elif kind == ProfileKind.T:
            # t^s K_s(t) -> 2^(s-1) Gamma(s) as t -> 0
            report["value_at_zero"] = float(profile.metadata["normalization"] * 2.0 ** (s - 1.0) * gamma(s))
            passed = passed and abs(report["value_at_zero"] - 1.0) <= 1e-12
        return CheckResult(check=f"profile_{kind.value}", s=s, passed=bool(passed),
                           value=profile.limit_constant, target=target, report=report)

    def profile_checks(self, config: RunConfig, kinds) -> List[Check]:
        return [(f"profile_{kind.value}", s, None, lambda kind=kind, s=s: self.profile_check(kind, s))
                for kind in kinds for s in config.s_grid]

    def profile_table(self, kind: ProfileKind, s_grid: List[float], t_max: float,
                      step: float = 0.05) -> pd.DataFrame:
        """(s, t, value, derivative) rows at t = k step in (0, t_max] (B: [-t_max, t_max])."""
        count = max(1, int(round(t_max / step)))
        frames = []
        for s in s_grid:
            profile = self.profiles.build_profile(kind, Order(s=s))
            first = -count if ProfileKind(kind) == ProfileKind.B else 1
            table = self.profiles.profile_table(profile, step * np.arange(first, count + 1))
            table.insert(0, "s", s)
            frames.append(table)
        return pd.concat(frames, ignore_index=True)

    # ---------------------------------------------------------------- rayleigh

    def sequence_I_check(self, s: float) -> CheckResult:
        order = Order(s=s)
        epsilons = SEQUENCE_I_EPSILONS[:2] if self.settings.quad_level < 10 else SEQUENCE_I_EPSILONS
        reports = [self.rayleigh.sequence_quotient_I(order, SequenceParams(epsilon=e),
                                                      include_corrections=(k == 0))
                   for k, e in enumerate(epsilons)]
        quotients = [r.quotient for r in reports]
        last = reports[-1]
        decreasing = all(b < a for a, b in zip(quotients, quotients[1:]))
        above = all(r.tolerance_met for r in reports)
        passed = decreasing and above
        if epsilons[-1] <= 1e-4:
            passed = passed and last.quotient <= (1.0 + SEQUENCE_I_BAND) * last.target
        return CheckResult(check="sequence_I", s=s, passed=passed, value=last.quotient, target=last.target,
                           report={"epsilons": list(epsilons), "quotients": quotients,
                                   "corrected_quotient": reports[0].extra.get("corrected_quotient")})

    def sequence_II_check(self, s: float) -> CheckResult:
        report = self.rayleigh.sequence_quotient_II(Order(s=s), SequenceParams(epsilon=SEQUENCE_II_EPSILON))
        within = abs(report.quotient - report.target) <= SEQUENCE_II_BAND * report.target
        passed = within and (report.tolerance_met or not report.asserted)
        return CheckResult(check="sequence_II", s=s, passed=passed, value=report.quotient,
                           target=report.target, report=report.model_dump())

    def discrete_check(self, s: float) -> CheckResult:
        order = Order(s=s)
        coarse_grid = self.rayleigh.default_grid()
        fine_grid = coarse_grid.model_copy(update={"nx": 2 * coarse_grid.nx, "ny": 2 * coarse_grid.ny})
        coarse = self.rayleigh.discrete_quotient(order, coarse_grid)
        fine = self.rayleigh.discrete_quotient(order, fine_grid)
        refined = fine.quotient <= coarse.quotient + 1e-12
        passed = (refined and coarse.tolerance_met and fine.tolerance_met
                  and coarse.quotient <= DISCRETE_UPPER * coarse.target)
        return CheckResult(check="discrete", s=s, passed=passed, value=fine.quotient, target=fine.target,
                           report={"coarse": coarse.model_dump(), "fine": fine.model_dump(),
                                   "grids": [coarse_grid.nx, fine_grid.nx], "refinement_monotone": refined})

    def hsm_check(self, s: float, n: int, seed: int = 0) -> CheckResult:
        """
        HSM deficit over a bump family and along the cutoff sequence.

        Asserted: nonnegative deficits, the ground-state identity, a positive
        implied constant over the family and a relative deficit
        deficit / (dbar hardy) that shrinks as eps -> 0.
        """
        order = Order(s=s)
        quick = self.settings.quad_level < 10
        members = HSM_FAMILY_SIZE_QUICK if quick else HSM_FAMILY_SIZE
        epsilons = HSM_EPSILONS[:2] if quick else HSM_EPSILONS
        family = [TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params=HSM_BUMP)]
        family += self.rayleigh.families.random_bumps(members - 1, seed, *HSM_BUMP_RANGES)
        reports = [self.rayleigh.hsm_deficit(order, spec, n) for spec in family]
        sequence = self.rayleigh.hsm_along_sequence(order, epsilons, n)

        dbar = self.constants.dbar(order)
        relative = [r.deficit / (dbar * r.hardy_term) for r in sequence]
        implied = [r.implied_c for r in sequence]
        everything = reports + sequence
        nonnegative = all(r.deficit >= -1e-9 for r in everything)
        identity = all(r.identity_residual <= HSM_IDENTITY_TOL for r in everything)
        c_min = min(r.implied_c for r in reports)
        shrinking = all(b < a for a, b in zip(relative, relative[1:]))
        passed = nonnegative and identity and c_min > 0.0 and shrinking
        return CheckResult(check="hsm_deficit", s=s, n=n, passed=passed, value=c_min,
                           report={"family_implied_c": [r.implied_c for r in reports],
                                   "family_implied_c_bulk": [r.implied_c_bulk for r in reports],
                                   "epsilons": list(epsilons), "sequence_implied_c": implied,
                                   "relative_deficit": relative,
                                   "implied_c_decreasing": all(b < a for a, b in zip(implied, implied[1:])),
                                   "max_identity_residual": max(r.identity_residual for r in everything)})

    def rayleigh_checks(self, config: RunConfig) -> List[Check]:
        hsm_n = max(config.n, 2)
        checks: List[Check] = []
        for s in config.s_grid:
            checks += [
                ("sequence_I", s, None, lambda s=s: self.sequence_I_check(s)),
                ("sequence_II", s, None, lambda s=s: self.sequence_II_check(s)),
                ("discrete", s, None, lambda s=s: self.discrete_check(s)),
                ("hsm_deficit", s, hsm_n, lambda s=s: self.hsm_check(s, hsm_n, config.seed)),
            ]
        return checks

    # ----------------------------------------------------------------- fracops

    def spectral_check(self, s: float, seed: int, count: int) -> CheckResult:
        order = Order(s=s)
        bases = self.fracops.families.random_sine_series(count, seed, modes=SCAN_MODES)
        reports = [self.fracops.spectral_hardy_quotient(b, order) for b in bases]
        worst = min(reports, key=lambda r: r.deficit)
        return CheckResult(check="spectral_hardy", s=s, n=1, passed=all(r.tolerance_met for r in reports),
                           asserted=worst.asserted, value=worst.quotient, target=worst.target,
                           report={"quotients": [r.quotient for r in reports]})

    def extension_check(self, s: float, seed: int) -> CheckResult:
        basis = self.fracops.families.random_sine_series(1, seed, modes=SCAN_MODES)[0]
        report = self.fracops.spectral_extension_energy(basis, Order(s=s))
        return CheckResult(check="extension_energy", s=s, passed=report.identity_residual <= EXTENSION_TOL,
                           value=report.identity_residual, report=report.model_dump())

    def dirichlet_check(self, s: float, n: int, seed: int, count: int) -> CheckResult:
        order = Order(s=s)
        bumps = self.fracops.families.random_bumps(count, seed, (-1.0, 1.0), (0.6, 1.4))
        reports = [self.fracops.dirichlet_hardy_quotient(b, order, n) for b in bumps]
        normalized = [r.normalized for r in reports]
        worst = min(normalized, key=lambda r: r.deficit)
        passed = all(r.tolerance_met for r in normalized) and all(r.ratio_residual <= 1e-9 for r in reports)
        return CheckResult(check="dirichlet_hardy", s=s, n=n, passed=passed, asserted=worst.asserted,
                           value=worst.quotient, target=worst.target,
                           report={"quotients": [r.quotient for r in normalized],
                                   "censored": [r.censored.quotient for r in reports]})

    def fourier_check(self, s: float) -> CheckResult:
        spec = TestFunctionSpec(family=TestFamily.GAUSSIAN, params={"center": 0.0, "sigma": 1.0})
        report = self.fracops.fourier_energy_identity(spec, Order(s=s))
        return CheckResult(check="fourier_identity", s=s, n=1, passed=report.residual <= FOURIER_TOL,
                           value=report.fourier_side, target=report.double_integral_side,
                           report=report.model_dump())

    def fracops_checks(self, config: RunConfig) -> List[Check]:
        count = SCAN_FUNCTIONS if self.settings.quad_level >= 10 else 3
        dirichlet_n = config.n if config.n in (1, 2) else 2
        checks: List[Check] = []
        for s in config.s_grid:
            checks += [
                ("spectral_hardy", s, 1, lambda s=s: self.spectral_check(s, config.seed, count)),
                ("extension_energy", s, None, lambda s=s: self.extension_check(s, config.seed)),
                ("dirichlet_hardy", s, dirichlet_n,
                 lambda s=s: self.dirichlet_check(s, dirichlet_n, config.seed, count)),
                ("fourier_identity", s, 1, lambda s=s: self.fourier_check(s)),
            ]
        return checks

    # ------------------------------------------------------------------ lemmas

    def lemma_example_check(self, params: LemmaParams, spec: TestFunctionSpec) -> CheckResult:
        report = self.lemmas.verify(params, spec)
        return CheckResult(check=f"lemma_{params.lemma_id}", passed=report.margin >= -LEMMA_MARGIN_TOL,
                           value=report.lhs, target=report.rhs, report=report.model_dump())

    def lemma_scan_check(self, lemma: LemmaId, samples: int, bumps: int, seed: int) -> CheckResult:
        frame = self.lemmas.scan(lemma, samples=samples, bumps=bumps, seed=seed)
        worst = float(frame["margin"].min()) if len(frame) else math.inf
        return CheckResult(check=f"lemma_scan_{lemma.value}", passed=worst >= -LEMMA_MARGIN_TOL,
                           value=worst, report={"rows": frame.to_dict(orient="records")})

    def lemma_checks(self, config: RunConfig) -> List[Check]:
        quick = self.settings.quad_level < 10
        samples = int(config.options.get("samples", 5 if quick else 50))
        bumps = int(config.options.get("bumps", 1 if quick else 5))
        bump = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": 1.0, "c1": 1.0, "width": 0.3})
        mirrored = TestFunctionSpec(family=TestFamily.GAUSSIAN_BUMP, params={"c0": -1.0, "c1": 1.0, "width": 0.3})
        examples = [
            (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L41), bump),
            (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L42, R_in=1.0), bump),
            (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L44), mirrored),
            (LemmaParams(A=0.0, B=0.0, Gamma_w=0.0, lemma_id=LemmaId.L45), bump),
            (LemmaParams(A=0.0, B=0.0, Gamma_w=1.0, lemma_id=LemmaId.L46, R_in=1.0), bump),
            (LemmaParams(A=0.5, B=0.0, Gamma_w=0.5, lemma_id=LemmaId.L47), bump),
        ]
        checks: List[Check] = [(f"lemma_{p.lemma_id}", None, None,
                                lambda p=p, v=v: self.lemma_example_check(p, v)) for p, v in examples]
        checks += [(f"lemma_scan_{lemma.value}", None, None,
                    lambda lemma=lemma: self.lemma_scan_check(lemma, samples, bumps, config.seed))
                   for lemma in LemmaId]
        return checks
