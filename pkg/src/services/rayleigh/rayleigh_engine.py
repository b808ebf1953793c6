"""
Rayleigh Engine - quotients along the extremizing sequences, the discrete
eigenvalue lower bound and Hardy-Sobolev-Maz'ya deficits.

Everything is computed in the (x_n, y) quarter plane; the tangential
directions enter through a Gaussian factor psi(x') = exp(-|x'|^2 / (2 sigma^2))
whose integrals are closed form.
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ...models.geometry import QuarterPlaneGrid, SequenceParams, TestFamily, TestFunctionSpec
from ...models.numerics import Interval
from ...models.order import Order
from ...models.profile import PhiKind, ProfileKind
from ...models.reports import HsmReport, QuotientReport
from ...numerics.eigen import min_generalized_eig
from ...numerics.extrapolation import richardson_limit
from ...numerics.quadrature import integrate_2d, integrate_with_estimate
from ...utils.error_handling import DomainError, ExtrapolationError, logged_operation
from ..base_service import BaseService
from ..constants import ConstantsEngine
from ..families import BumpField, CutoffField, FamilyFactory
from ..profiles import ProfileEngine

# below x_n = eps * e^-LOG_DEPTH the cutoff field contributes less than e^-LOG_DEPTH
LOG_DEPTH = 40.0
# plane integrals are checked to this multiple of quad_tol
PLANE_TOL_FACTOR = 10.0
# sequence II Richardson samples: eps = EPS_START / 2^j
SEQUENCE_II_START = 1e-2
SEQUENCE_II_LEVELS = 5
# eigenvector entries above -POSITIVITY_TOL * max are counted as nonnegative
POSITIVITY_TOL = 1e-10


def _power_moment(lo: np.ndarray, hi: np.ndarray, p: float) -> np.ndarray:
    """Integral of x^p over [lo, hi] cell by cell (lo > 0 unless p > -1)."""
    if abs(p + 1.0) < 1e-14:
        return np.log(hi / lo)
    return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)


def _weighted_1d(nodes: np.ndarray, exponent: float, stiffness: bool) -> sparse.csr_matrix:
    """
    Linear-element mass or stiffness matrix with weight x^exponent, every
    cell integrated exactly. A first cell starting at 0 whose weight is not
    integrable keeps only its right-node entry.
    """
    lo, hi = nodes[:-1], nodes[1:]
    h = hi - lo
    size = len(nodes)
    first_singular = nodes[0] == 0.0 and exponent <= -1.0
    start = 1 if first_singular else 0
    lo_c, hi_c, h_c = lo[start:], hi[start:], h[start:]
    m0 = _power_moment(lo_c, hi_c, exponent)
    if stiffness:
        left = right = m0 / h_c ** 2
        off = -m0 / h_c ** 2
    else:
        m1 = _power_moment(lo_c, hi_c, exponent + 1.0)
        m2 = _power_moment(lo_c, hi_c, exponent + 2.0)
        left = (hi_c ** 2 * m0 - 2.0 * hi_c * m1 + m2) / h_c ** 2
        right = (m2 - 2.0 * lo_c * m1 + lo_c ** 2 * m0) / h_c ** 2
        off = (-m2 + (lo_c + hi_c) * m1 - lo_c * hi_c * m0) / h_c ** 2

    diagonal = np.zeros(size)
    upper = np.zeros(size - 1)
    diagonal[start:-1] += left
    diagonal[start + 1:] += right
    upper[start:] = off
    if first_singular and not stiffness:
        # x^e (x / x1)^2 over the first cell
        diagonal[1] += hi[0] ** (exponent + 2.0) / ((exponent + 3.0) * h[0] ** 2)
    return sparse.diags([upper, diagonal, upper], [-1, 0, 1], format="csr")


class RayleighEngine(BaseService):
    """
    Quotient and deficit calculator.

    Responsibilities:
    - Reduced and full two-dimensional quotients of the first extremizing sequence
    - Regularized angular energy bound of the second sequence
    - Discrete weighted eigenvalue lower bound on a graded grid
    - Hardy-Sobolev-Maz'ya deficits and the ground-state remainder
    """

    def __init__(self, profile_engine: Optional[ProfileEngine] = None, settings=None):
        super().__init__("RayleighEngine", settings)
        self.profiles = profile_engine or ProfileEngine(self.settings)
        self.constants = ConstantsEngine(self.settings)
        self.families = FamilyFactory(self.profiles, self.settings)

    @property
    def _plane_tol(self) -> float:
        return PLANE_TOL_FACTOR * self.tolerance()

    # -------------------------------------------------------------- sequence I

    @logged_operation("sequence_quotient_I")
    def sequence_quotient_I(self, s: Order, p: SequenceParams,
                            include_corrections: bool = False) -> QuotientReport:
        """
        Quotient of u_eps = h(x_n) x_n^(-a/2) A(max(y, eps) / x_n).

        The reduced form divides
            -int_{eps/delta}^inf t^(a-1) (1+t^2) A A' dt   by   int_{eps/delta}^inf A^2 / t dt,
        both of which diverge like ln(delta/eps). With include_corrections the
        full quarter-plane quotient with the smooth cutoff is added as
        extra['corrected_quotient'].

        Raises:
            ConvergenceError: when the quadrature near t = eps/delta fails
        """
        a = s.a
        profile = self.profiles.build_profile(ProfileKind.A, s)
        lower = p.epsilon / p.delta
        domain = Interval(lo=lower, hi=math.inf)

        def numerator(t):
            value, first = self.profiles.profile_eval(profile, t)
            return -t ** (a - 1.0) * (1.0 + t ** 2) * value * first

        def denominator(t):
            value, _ = self.profiles.profile_eval(profile, t)
            return value ** 2 / t

        num = integrate_with_estimate(numerator, domain, tol=self.tolerance())
        den = integrate_with_estimate(denominator, domain, tol=self.tolerance())
        dbar = self.constants.dbar(s)
        extra: Dict[str, float] = {"quadrature_error": num.error + den.error,
                                   "log_ratio": math.log(1.0 / lower)}
        if include_corrections:
            field = CutoffField(self.profiles, s, p.epsilon, p.delta, p.cutoff_smoothness)
            terms = self._cutoff_terms(s, field, remainder=False)
            extra["corrected_quotient"] = terms["energy"] / terms["hardy"]
            extra["corrected_tolerance_met"] = bool(extra["corrected_quotient"] >= dbar - 1e-9)
        return QuotientReport.build(
            "sequence_I", s.s, num.value, den.value, dbar, tol=1e-9,
            params=p.model_dump(), **extra,
        )

    # ------------------------------------------------------------- sequence II

    def _angular_bound(self, s: Order, epsilon: float) -> float:
        a = s.a
        profile = self.profiles.build_profile(ProfileKind.B, s)
        weight = 0.25 * (epsilon - a) ** 2
        total = 0.0
        for sign in (-1.0, 1.0):
            def integrand(phi, sign=sign):
                b, g = self.profiles.profile_b_angular(profile, phi, sign)
                sin_a = np.sin(phi) ** a
                return np.cos(phi) ** (-epsilon) * (g ** 2 / sin_a + weight * sin_a * b ** 2)

            total += integrate_with_estimate(integrand, Interval(lo=0.0, hi=0.5 * math.pi),
                                             tol=self.tolerance()).value
        return total

    @logged_operation("sequence_quotient_II")
    def sequence_quotient_II(self, s: Order, p: SequenceParams) -> QuotientReport:
        """
        Regularized energy of the second sequence in the angle theta = arctan t:

            int cos^a(theta) |sin theta|^-eps [B_theta^2 + ((eps - a)/2)^2 B^2] dtheta,

        which tends to kbar as eps -> 0. Also reports the Richardson limit in eps.
        The lower bound is asserted for s >= 1/2, where both terms grow with eps.
        """
        bound = self._angular_bound(s, p.epsilon)
        kbar = self.constants.kbar(s)
        extra: Dict[str, float] = {}
        try:
            def samples(eps: np.ndarray) -> np.ndarray:
                return np.array([self._angular_bound(s, float(e)) for e in eps])
            limit, error = richardson_limit(samples, (1.0, 2.0, 3.0), h0=SEQUENCE_II_START,
                                            levels=SEQUENCE_II_LEVELS, check_monotone=False)
            extra.update(extrapolated_limit=limit, extrapolation_error=error)
        except ExtrapolationError as e:
            self.logger.warning(f"sequence II extrapolation skipped: {e}")
        return QuotientReport.build(
            "sequence_II", s.s, bound, 1.0, kbar, tol=1e-9,
            params=p.model_dump(), asserted=s.a <= 0.0, **extra,
        )

    # ---------------------------------------------------------------- discrete

    def default_grid(self) -> QuarterPlaneGrid:
        """Quarter-plane grid from the grid_* settings."""
        return QuarterPlaneGrid(X=self.settings.grid_x, Y=self.settings.grid_y, nx=self.settings.grid_nx,
                                ny=self.settings.grid_ny, grading_exponent=self.settings.grid_grading)

    @logged_operation("discrete_quotient")
    def discrete_quotient(self, s: Order, g: Optional[QuarterPlaneGrid] = None) -> QuotientReport:
        """
        Smallest eigenvalue of K v = lambda M v for bilinear elements on a
        graded grid, K the y^a-weighted energy and M the trace mass with
        weight x_n^(a-1). Dirichlet conditions hold on x_n = 0, x_n = X and
        y = Y, so lambda >= dbar.

        Raises:
            SingularMassError: when the grid leaves no free boundary node
        """
        g = g or self.default_grid()
        a = s.a
        x, y = g.x_nodes(), g.y_nodes()
        nx, ny = g.nx, g.ny

        kx = _weighted_1d(x, 0.0, stiffness=True)
        mx = _weighted_1d(x, 0.0, stiffness=False)
        ky = _weighted_1d(y, a, stiffness=True)
        my = _weighted_1d(y, a, stiffness=False)
        stiffness = (sparse.kron(kx, my) + sparse.kron(mx, ky)).tocsr()
        trace_mass = _weighted_1d(x, a - 1.0, stiffness=False)

        index = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
        bottom = index[1:nx, 0]
        interior = index[1:nx, 1:ny].ravel()
        k_bb = stiffness[bottom][:, bottom].toarray()
        k_rb = stiffness[interior][:, bottom]
        k_rr = stiffness[interior][:, interior].tocsc()
        m_bb = trace_mass[1:nx][:, 1:nx].toarray()

        lu = splu(k_rr)
        harmonic = lu.solve(k_rb.toarray())
        schur = k_bb - k_rb.T @ harmonic
        value, v_bottom = min_generalized_eig(schur, m_bb)

        v_interior = -harmonic @ v_bottom
        full = np.concatenate((v_bottom, v_interior))
        full = full * np.sign(np.sum(full))
        positive = bool(np.min(full) >= -POSITIVITY_TOL * np.max(np.abs(full)))

        dbar = self.constants.dbar(s)
        return QuotientReport.build(
            "discrete", s.s, value, 1.0, dbar, tol=dbar * self.tolerance(),
            params=g.model_dump(), eigenvector_positive=positive, free_nodes=int(len(full)),
        )

    # ------------------------------------------------------------- plane terms

    def _bump_terms(self, s: Order, field: BumpField, exponents: Optional[Tuple[float, float]],
                    remainder: bool) -> Dict[str, float]:
        a = s.a
        tol = self._plane_tol
        lo, hi = field.support()
        if lo <= 0.0:
            raise DomainError(f"Test function must vanish near x_n = 0, support starts at {lo}")
        region = dict(x_range=(0.0, math.inf), y_min=0.0, tol=tol)

        terms = {
            "energy": field.integrate(lambda x, y, v, vx, vy: y ** a * (vx ** 2 + vy ** 2), **region).value,
            "mass": field.integrate(lambda x, y, v, vx, vy: y ** a * v ** 2, **region).value,
        }
        if remainder:
            def remainder_integrand(x, y, v, vx, vy):
                phi, phi_x, phi_y = self.profiles.phi_grid(PhiKind.I, s, x, y)
                return y ** a * ((vx - phi_x / phi * v) ** 2 + (vy - phi_y / phi * v) ** 2)
            terms["remainder"] = field.integrate(remainder_integrand, **region).value

        # trace on y = 0
        half = math.sqrt(max(field.width ** 2 - field.center[1] ** 2, 0.0))
        if half == 0.0:
            terms["hardy"] = terms["boundary"] = terms["bulk"] = 0.0
            return terms
        span = Interval(lo=field.center[0] - half, hi=field.center[0] + half)

        def trace(x):
            return field.value(x, np.zeros_like(x))

        terms["hardy"] = integrate_with_estimate(lambda x: trace(x) ** 2 * x ** (a - 1.0), span, tol=tol).value
        if exponents is not None:
            p_exp, q_exp = exponents
            terms["boundary"] = integrate_with_estimate(lambda x: np.abs(trace(x)) ** p_exp, span, tol=tol).value
            terms["bulk"] = field.integrate(lambda x, y, v, vx, vy: np.abs(v) ** q_exp, **region).value
        return terms

    def _cutoff_terms(self, s: Order, field: CutoffField, exponents: Optional[Tuple[float, float]] = None,
                      remainder: bool = True) -> Dict[str, float]:
        """
        Plane integrals of the cutoff field. Above y = eps the variables are
        z = ln x_n and t = y / x_n (dy dx_n = x_n^2 dt dz); below, v does not
        depend on y and the y-integral is closed form.
        """
        a = s.a
        eps = field.epsilon
        tol = self._plane_tol
        pieces = [Interval(lo=math.log(eps) - LOG_DEPTH, hi=math.log(field.delta)),
                  Interval(lo=math.log(field.delta), hi=math.log(field.x_max))]
        y_moment = eps ** (1.0 + a) / (1.0 + a)

        def above(kernel):
            def f(z, t):
                x = np.exp(z)
                sv, sx, sy = field.scaled_above(x, t)
                return kernel(x, t, sv, sx, sy)
            return sum(integrate_2d(f, piece, lambda z: (eps / np.exp(z), np.full_like(z, np.inf)),
                                    tol=tol).value for piece in pieces)

        def below(kernel):
            def f(z):
                x = np.exp(z)
                v, vx = field.below(x)
                return kernel(x, v, vx) * x
            return sum(integrate_with_estimate(f, piece, tol=tol).value for piece in pieces)

        terms = {
            "energy": above(lambda x, t, sv, sx, sy: t ** a * (sx ** 2 + sy ** 2))
            + y_moment * below(lambda x, v, vx: vx ** 2),
            "hardy": below(lambda x, v, vx: v ** 2 * x ** (a - 1.0)),
            "mass": above(lambda x, t, sv, sx, sy: t ** a * sv ** 2)
            + y_moment * below(lambda x, v, vx: v ** 2),
        }
        if exponents is not None:
            p_exp, q_exp = exponents
            terms["bulk"] = (above(lambda x, t, sv, sx, sy: np.abs(sv) ** q_exp * x ** (2.0 - q_exp * (1.0 + a / 2)))
                             + eps * below(lambda x, v, vx: np.abs(v) ** q_exp))
            terms["boundary"] = below(lambda x, v, vx: np.abs(v) ** p_exp)
        if remainder:
            profile = field.profile

            # grad v - (grad phi / phi) v = (h' phi, 0) above the layer
            def transition(x, t, sv, sx, sy):
                _, dh = field.cutoff(x)
                value, _ = self.profiles.profile_eval(profile, np.ravel(t))
                return t ** a * (dh * x) ** 2 * np.reshape(value, np.shape(t)) ** 2

            def lower_layer(z, y):
                x = np.exp(z)
                v, vx = field.below(x)
                phi, phi_x, phi_y = self.profiles.phi_grid(PhiKind.I, s, np.broadcast_to(x, y.shape), y)
                return x * y ** a * ((vx - phi_x / phi * v) ** 2 + (phi_y / phi * v) ** 2)

            terms["remainder"] = above(transition) + sum(
                integrate_2d(lower_layer, piece, lambda z: (np.zeros_like(z), np.full_like(z, eps)),
                             tol=tol).value for piece in pieces)
        return terms

    def _plane_terms(self, s: Order, family: TestFunctionSpec, exponents: Optional[Tuple[float, float]],
                     remainder: bool) -> Dict[str, float]:
        field = self.families.build(family, s)
        if isinstance(field, CutoffField):
            return self._cutoff_terms(s, field, exponents, remainder)
        if isinstance(field, BumpField):
            return self._bump_terms(s, field, exponents, remainder)
        raise DomainError(f"Family {family.family} is not a quarter-plane field")

    @staticmethod
    def _tangential_factors(n: int, sigma: float) -> Tuple[float, float]:
        """Psi2 = int psi^2 and G2 = int |grad psi|^2 over R^(n-1)."""
        m = n - 1
        psi2 = (math.pi * sigma ** 2) ** (m / 2.0)
        return psi2, m / (2.0 * sigma ** 2) * psi2

    # --------------------------------------------------------------------- HSM

    @logged_operation("hsm_deficit")
    def hsm_deficit(self, s: Order, family: TestFunctionSpec, n: int, sigma: float = 1.0) -> HsmReport:
        """
        Hardy deficit of u(x', x_n, y) = psi(x') v(x_n, y) on the extended half
        space of dimension n + 1, with its boundary and bulk Sobolev terms.

        energy = Psi2 E_v + G2 W_v and hardy = Psi2 H_v, where
        Psi2 = (pi sigma^2)^((n-1)/2) and G2 = (n-1) Psi2 / (2 sigma^2).

        Raises:
            DomainError: when n < 2 or the member has a zero Sobolev term
        """
        if n < 2:
            raise DomainError(f"Hardy-Sobolev-Maz'ya needs n >= 2, got {n}")
        p_exp = 2.0 * n / (n - 2.0 * s.s)
        q_exp = 2.0 * (n + 1.0) / (n - 2.0 * s.s)
        terms = self._plane_terms(s, family, (p_exp, q_exp), remainder=True)
        psi2, grad2 = self._tangential_factors(n, sigma)
        psi_p = (2.0 * math.pi * sigma ** 2 / p_exp) ** ((n - 1) / 2.0)
        psi_q = (2.0 * math.pi * sigma ** 2 / q_exp) ** ((n - 1) / 2.0)

        energy = psi2 * terms["energy"] + grad2 * terms["mass"]
        hardy = psi2 * terms["hardy"]
        deficit = energy - self.constants.dbar(s) * hardy
        sobolev = (psi_p * terms["boundary"]) ** (2.0 / p_exp)
        bulk = (psi_q * terms["bulk"]) ** (2.0 / q_exp)
        if sobolev <= 0.0 or bulk <= 0.0:
            raise DomainError(f"Family member {family.params} has a zero Sobolev term")
        remainder = psi2 * terms["remainder"] + grad2 * terms["mass"]
        return HsmReport(
            family=str(family.family), s=s.s, n=n,
            energy=energy, hardy_term=hardy, deficit=deficit,
            sobolev_term=sobolev, bulk_sobolev_term=bulk,
            implied_c=deficit / sobolev, implied_c_bulk=deficit / bulk,
            remainder=remainder, identity_residual=abs(deficit - remainder) / energy,
            params={**family.params, "sigma": sigma},
        )

    @logged_operation("hsm_along_sequence")
    def hsm_along_sequence(self, s: Order, epsilons: Sequence[float], n: int = 2,
                           delta: float = 1.0) -> List[HsmReport]:
        """HSM deficit of the cutoff_I members at each epsilon, in the given order."""
        reports = []
        for eps in epsilons:
            spec = self.sequence_family(SequenceParams(epsilon=eps, delta=delta))
            report = self.hsm_deficit(s, spec, n)
            self.logger.debug(f"hsm eps={eps:g} | deficit={report.deficit:.6e} | c={report.implied_c:.6e}")
            reports.append(report)
        return reports

    @logged_operation("ground_state_remainder")
    def ground_state_remainder(self, s: Order, family: TestFunctionSpec, n: int = 2,
                               sigma: float = 1.0) -> Tuple[float, float]:
        """
        Remainder Psi2 R[v] + G2 W_v of the ground-state identity for
        u = psi(x') v(x_n, y), where R[v] = int y^a |grad v - (grad phi / phi) v|^2
        with phi = phi-I.

        Returns:
            (remainder, |energy - dbar hardy - remainder| / energy)
        """
        if n < 1:
            raise DomainError(f"Dimension must be positive, got {n}")
        terms = self._plane_terms(s, family, None, remainder=True)
        psi2, grad2 = self._tangential_factors(n, sigma)
        energy = psi2 * terms["energy"] + grad2 * terms["mass"]
        deficit = energy - self.constants.dbar(s) * psi2 * terms["hardy"]
        remainder = psi2 * terms["remainder"] + grad2 * terms["mass"]
        return remainder, abs(deficit - remainder) / energy

    def sequence_family(self, p: SequenceParams) -> TestFunctionSpec:
        """cutoff_I member for the given sequence parameters."""
        return TestFunctionSpec(family=TestFamily.CUTOFF_I,
                                params={"epsilon": p.epsilon, "delta": p.delta,
                                        "smoothness": p.cutoff_smoothness})
