"""
Lemma Engine - weighted L1 and L2 Hardy inequalities in the (x_n, y) plane.

The distance function is d = x_n on the half space and d = |x_n| on its
complement, so the -Laplace(d) terms vanish. The log-weight lemmas need a
finite inner radius; they are checked on the slab 0 < x_n < 2 R_in with
d = min(x_n, 2 R_in - x_n), where -Laplace(d) is twice the line measure on
the midplane x_n = R_in. That ridge term is integrated explicitly.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ...models.geometry import TestFamily, TestFunctionSpec
from ...models.numerics import Interval
from ...models.reports import LemmaId, LemmaParams, LemmaReport
from ...numerics.quadrature import integrate_with_estimate
from ...utils.error_handling import DivergentIntegralError, DomainError, InvalidParamsError, logged_operation
from ..base_service import BaseService
from ..families import BumpField, FamilyFactory

L1_LEMMAS = (LemmaId.L41, LemmaId.L42, LemmaId.L44, LemmaId.L47)
L2_LEMMAS = (LemmaId.L45, LemmaId.L46)
LOG_LEMMAS = (LemmaId.L42, LemmaId.L46)

# bump placement for scans: O(1) away from both axes
SCAN_CENTER_RANGE = (0.6, 1.4)
SCAN_WIDTH_RANGE = (0.1, 0.5)
# near-boundary bumps: y center below every width, so the support is cut by y = 0
BOUNDARY_Y_RANGE = (0.0, 0.3)
BOUNDARY_WIDTH_RANGE = (0.3, 0.5)


def log_weight(t: np.ndarray) -> np.ndarray:
    """X(t) = 1 / (1 - ln t) for 0 < t <= 1."""
    return 1.0 / (1.0 - np.log(t))


class LemmaEngine(BaseService):
    """
    Weighted Hardy lemma checker.

    Responsibilities:
    - Validate lemma parameters and return the explicit constants
    - Integrate both sides of the L1 and L2 inequalities for bump test functions
    - Random parameter scans as DataFrames
    """

    def __init__(self, families: Optional[FamilyFactory] = None, settings=None):
        super().__init__("LemmaEngine", settings)
        self.families = families or FamilyFactory(settings=self.settings)

    # -------------------------------------------------------------- constants

    @staticmethod
    def validate(p: LemmaParams) -> None:
        """
        Raises:
            InvalidParamsError: when p lies outside the validity region of its lemma
        """
        lemma = LemmaId(p.lemma_id)
        if not p.A + 1.0 > 0.0:
            raise InvalidParamsError(f"{lemma.value} needs A + 1 > 0, got A = {p.A}")
        if not p.B + 1.0 > 0.0:
            raise InvalidParamsError(f"{lemma.value} needs B + 1 > 0, got B = {p.B}")
        if lemma in LOG_LEMMAS:
            if p.R_in is None or not p.R_in > 0.0:
                raise InvalidParamsError(f"{lemma.value} needs a positive inner radius, got {p.R_in}")
            return
        if not 2.0 * p.Gamma_w < p.A + p.B + 2.0:
            raise InvalidParamsError(
                f"{lemma.value} needs 2 Gamma < A + B + 2, got Gamma = {p.Gamma_w}, A + B + 2 = {p.A + p.B + 2.0}"
            )
        if lemma == LemmaId.L47 and not 0.0 < p.A <= 0.5:
            raise InvalidParamsError(f"L47 needs 0 < A <= 1/2, got A = {p.A}")

    def lemma_constant(self, p: LemmaParams) -> float:
        """Explicit constant on the left-hand side of the lemma."""
        self.validate(p)
        lemma = LemmaId(p.lemma_id)
        a, b, g = p.A, p.B, p.gamma_plus
        if lemma == LemmaId.L41:
            return (b + 1.0) * (b + a + 2.0 - 2.0 * g) / (b + a + 2.0)
        if lemma == LemmaId.L42:
            return (b + 1.0) / (a + b + 3.0)
        if lemma == LemmaId.L44:
            return (a + 1.0) * (a + b + 2.0 - 2.0 * g)
        if lemma == LemmaId.L45:
            return ((b + 1.0) * (b + a + 2.0 - 2.0 * g) / (2.0 * (b + a + 2.0))) ** 2
        if lemma == LemmaId.L46:
            return ((b + 1.0) / (2.0 * (a + b + 3.0))) ** 2
        return (a * (b + 1.0) * (b + a + 2.0 - 2.0 * g)
                / ((a + b + 2.0) * (a + 2.0 * b + 2.0) - 2.0 * g * (b + 1.0)))

    # ------------------------------------------------------------ integration

    def _field(self, spec: TestFunctionSpec) -> BumpField:
        if TestFamily(spec.family) != TestFamily.GAUSSIAN_BUMP:
            raise DomainError(f"Lemma checks use gaussian_bump test functions, got {spec.family}")
        return self.families.build(spec, dimension=2)

    def _tol(self) -> float:
        # |grad v| has a cone point at the bump center
        return self.tolerance(floor=1e-9)

    def _integral(self, name: str, field: BumpField, f: Callable[..., np.ndarray],
                  x_range: Tuple[float, float], breaks: Tuple[float, ...] = ()) -> float:
        result = field.integrate(f, x_range=x_range, y_min=0.0,
                                 breaks=(field.center[0],) + breaks, tol=self._tol())
        if not math.isfinite(result.value):
            raise DivergentIntegralError(f"{name} integral is not finite")
        return result.value

    def _ridge(self, p: LemmaParams, field: BumpField, power: int) -> float:
        """int_0^inf y^A R^(B+1) X(1) 2 |v(R, y)|^power / (R^2 + y^2)^((A+B+2)/2) dy at the midplane."""
        radius = p.R_in
        lo, hi = field.chord(radius, 0.0)
        if not hi > lo:
            return 0.0
        exponent = 0.5 * (p.A + p.B + 2.0)

        def integrand(y):
            v = np.abs(field.value(np.full_like(y, radius), y)) ** power
            return 2.0 * y ** p.A * radius ** (p.B + 1.0) * v / (radius ** 2 + y ** 2) ** exponent

        value = integrate_with_estimate(integrand, Interval(lo=float(lo), hi=float(hi)), tol=self._tol()).value
        if not math.isfinite(value):
            raise DivergentIntegralError("Ridge integral is not finite")
        return value

    def _region(self, p: LemmaParams, field: BumpField) -> Tuple[Tuple[float, float], Callable, Tuple[float, ...]]:
        """x_n range, distance function and extra breaks of the lemma geometry."""
        lemma = LemmaId(p.lemma_id)
        lo, hi = field.support()
        if lemma == LemmaId.L44:
            if hi > 0.0:
                raise DomainError(f"L44 test function must lie in x_n < 0, reaches {hi}")
            return (-math.inf, 0.0), np.abs, ()
        if lo <= 0.0:
            raise DomainError(f"Test function must lie in x_n > 0, reaches {lo}")
        if lemma in LOG_LEMMAS:
            width = 2.0 * p.R_in
            if hi >= width:
                raise DomainError(f"Test function must lie in the slab 0 < x_n < {width}, reaches {hi}")
            return (0.0, width), (lambda x: np.minimum(x, width - x)), (p.R_in,)
        return (0.0, math.inf), (lambda x: x), ()

    @logged_operation("verify_l1")
    def verify_l1(self, p: LemmaParams, v: TestFunctionSpec) -> LemmaReport:
        """
        L1 lemmas L41, L42, L44 and L47 for |v|.

        Raises:
            InvalidParamsError: for parameters outside the lemma's region
            DomainError: for L2 lemmas or a test function outside the geometry
            DivergentIntegralError: when a weighted integral is not finite
        """
        lemma = LemmaId(p.lemma_id)
        if lemma not in L1_LEMMAS:
            raise DomainError(f"{lemma.value} is an L2 lemma")
        constant = self.lemma_constant(p)
        field = self._field(v)
        x_range, dist, breaks = self._region(p, field)
        a, b, g = p.A, p.B, p.Gamma_w
        extra = {}

        if lemma == LemmaId.L41:
            lhs = self._integral("lhs", field, lambda x, y, w, wx, wy:
                                 y ** a * x ** b / (x * x + y * y) ** g * np.abs(w), x_range)
            rhs = self._integral("rhs", field, lambda x, y, w, wx, wy:
                                 y ** a * x ** (b + 1.0) / (x * x + y * y) ** g * np.hypot(wx, wy), x_range)
        elif lemma == LemmaId.L44:
            lhs = self._integral("lhs", field, lambda x, y, w, wx, wy:
                                 y ** a * dist(x) ** b / (x * x + y * y) ** g * np.abs(w), x_range)
            rhs = (a + b + 2.0) * self._integral(
                "rhs", field, lambda x, y, w, wx, wy:
                y ** (a + 1.0) * dist(x) ** b / (x * x + y * y) ** g * np.hypot(wx, wy), x_range)
        elif lemma == LemmaId.L47:
            lhs = self._integral("lhs", field, lambda x, y, w, wx, wy:
                                 y ** (-a) * x ** b / (x * x + y * y) ** (g - a) * np.abs(w), x_range)
            rhs = self._integral("rhs", field, lambda x, y, w, wx, wy:
                                 y ** a * x ** (1.0 + b) / (x * x + y * y) ** g * np.hypot(wx, wy), x_range)
        else:
            exponent = 0.5 * (a + b + 2.0)

            def weight(x, y):
                d = dist(x)
                return y ** a * d ** b / (d * d + y * y) ** exponent, d, log_weight(d / p.R_in)

            def lhs_integrand(x, y, w, wx, wy):
                base, _, big_x = weight(x, y)
                return base * big_x ** 2 * np.abs(w)

            def rhs_integrand(x, y, w, wx, wy):
                base, d, big_x = weight(x, y)
                return base * d * big_x * np.hypot(wx, wy)

            lhs = self._integral("lhs", field, lhs_integrand, x_range, breaks)
            ridge = self._ridge(p, field, 1)
            rhs = ridge + self._integral("rhs", field, rhs_integrand, x_range, breaks)
            extra["ridge"] = ridge

        lhs *= constant
        return LemmaReport(lhs=lhs, rhs=rhs, constant_used=constant, margin=rhs - lhs, params=p,
                           extra={"test_function": dict(v.params), **extra})

    @logged_operation("verify_l2")
    def verify_l2(self, p: LemmaParams, w: TestFunctionSpec) -> LemmaReport:
        """
        L2 lemmas L45 and L46 for w^2 against the d^(B+2)-weighted Dirichlet energy.

        Raises:
            as verify_l1
        """
        lemma = LemmaId(p.lemma_id)
        if lemma not in L2_LEMMAS:
            raise DomainError(f"{lemma.value} is an L1 lemma")
        constant = self.lemma_constant(p)
        field = self._field(w)
        x_range, dist, breaks = self._region(p, field)
        a, b = p.A, p.B
        extra = {}

        if lemma == LemmaId.L45:
            g = p.Gamma_w
            lhs = self._integral("lhs", field, lambda x, y, v, vx, vy:
                                 y ** a * x ** b / (x * x + y * y) ** g * v * v, x_range)
            rhs = self._integral("rhs", field, lambda x, y, v, vx, vy:
                                 y ** a * x ** (b + 2.0) / (x * x + y * y) ** g * (vx * vx + vy * vy), x_range)
        else:
            exponent = 0.5 * (a + b + 2.0)

            def lhs_integrand(x, y, v, vx, vy):
                d = dist(x)
                return y ** a * d ** b * log_weight(d / p.R_in) ** 2 / (d * d + y * y) ** exponent * v * v

            def rhs_integrand(x, y, v, vx, vy):
                d = dist(x)
                return y ** a * d ** (b + 2.0) / (d * d + y * y) ** exponent * (vx * vx + vy * vy)

            lhs = self._integral("lhs", field, lhs_integrand, x_range, breaks)
            ridge = (b + 1.0) / (2.0 * (a + b + 3.0)) * self._ridge(p, field, 2)
            rhs = ridge + self._integral("rhs", field, rhs_integrand, x_range, breaks)
            extra["ridge"] = ridge

        lhs *= constant
        return LemmaReport(lhs=lhs, rhs=rhs, constant_used=constant, margin=rhs - lhs, params=p,
                           extra={"test_function": dict(w.params), **extra})

    def verify(self, p: LemmaParams, v: TestFunctionSpec) -> LemmaReport:
        """Dispatch to verify_l1 or verify_l2 by lemma."""
        if LemmaId(p.lemma_id) in L2_LEMMAS:
            return self.verify_l2(p, v)
        return self.verify_l1(p, v)

    # ------------------------------------------------------------------ scans

    def random_params(self, lemma: LemmaId, count: int, seed: int, r_in: float = 1.0) -> List[LemmaParams]:
        """count parameter sets drawn uniformly inside the validity region of lemma."""
        lemma = LemmaId(lemma)
        rng = np.random.default_rng(seed)
        params = []
        for _ in range(count):
            a = rng.uniform(0.05, 0.5) if lemma == LemmaId.L47 else rng.uniform(-0.9, 1.5)
            b = rng.uniform(-0.9, 1.5)
            if lemma in LOG_LEMMAS:
                params.append(LemmaParams(A=a, B=b, Gamma_w=0.5 * (a + b + 2.0), lemma_id=lemma, R_in=r_in))
                continue
            # strictly inside 2 Gamma < A + B + 2
            g = rng.uniform(-1.0, 0.5 * (a + b + 2.0) - 0.05)
            params.append(LemmaParams(A=a, B=b, Gamma_w=g, lemma_id=lemma))
        return params

    def scan_bumps(self, lemma: LemmaId, count: int, seed: int, r_in: float = 1.0) -> List[TestFunctionSpec]:
        """
        Random bumps placed inside the geometry of lemma: the first (count + 1) // 2
        away from y = 0, the rest with supports reaching down to y = 0.
        """
        lemma = LemmaId(lemma)
        if lemma == LemmaId.L44:
            c0_range = (-SCAN_CENTER_RANGE[1], -SCAN_CENTER_RANGE[0])
        elif lemma in LOG_LEMMAS:
            c0_range = (r_in * SCAN_CENTER_RANGE[0], r_in * SCAN_CENTER_RANGE[1])
        else:
            c0_range = SCAN_CENTER_RANGE
        width_range = SCAN_WIDTH_RANGE
        if lemma in LOG_LEMMAS:
            width_range = (SCAN_WIDTH_RANGE[0], min(SCAN_WIDTH_RANGE[1], 0.55 * r_in))
        interior = (count + 1) // 2
        scale = min(1.0, width_range[1] / BOUNDARY_WIDTH_RANGE[1])
        return (self.families.random_bumps(interior, seed, c0_range, SCAN_CENTER_RANGE, width_range)
                + self.families.random_bumps(count - interior, seed + interior, c0_range,
                                             tuple(scale * y for y in BOUNDARY_Y_RANGE),
                                             tuple(scale * w for w in BOUNDARY_WIDTH_RANGE)))

    @logged_operation("scan")
    def scan(self, lemma: LemmaId, samples: int = 50, bumps: int = 5, seed: int = 0,
             threads: int = 1) -> pd.DataFrame:
        """
        Check every (parameter set, bump) pair of a random scan.

        Returns:
            One row per pair, in sample order regardless of threads
        """
        lemma = LemmaId(lemma)
        jobs = [(p, v) for k, p in enumerate(self.random_params(lemma, samples, seed))
                for v in self.scan_bumps(lemma, bumps, seed + 1000 * (k + 1))]

        def run(job):
            p, v = job
            report = self.verify(p, v)
            return {
                "lemma_id": lemma.value, "A": p.A, "B": p.B, "Gamma_w": p.Gamma_w, "R_in": p.R_in,
                "c0": v.params["c0"], "c1": v.params["c1"], "width": v.params["width"],
                "lhs": report.lhs, "rhs": report.rhs, "constant": report.constant_used,
                "margin": report.margin,
            }

        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            rows = list(pool.map(run, jobs))
        return pd.DataFrame(rows)
