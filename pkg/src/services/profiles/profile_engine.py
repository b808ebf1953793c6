"""
Profile Engine - builds and evaluates the extension profiles A, B and T.

A(t), t > 0: (t^a (1+t^2) A')' + ((2+a)a/4) t^a A = 0, A(0) = 1, A(inf) = 0.
B(t), t real: (1+t^2)^2 B'' + (2-a) t (1+t^2) B' - (a^2/4) B = 0, B(-inf) = 0, B(inf) = 1.
T(t), t > 0: T'' + (a/t) T' - T = 0, T(0) = 1, T(inf) = 0.
"""

import math
from threading import Lock
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ...core.helpers import log_grid
from ...models.numerics import Interval
from ...models.order import Order
from ...models.profile import (
    ClosedFormCoeffs,
    ExtensionPoint,
    PhiKind,
    PhiValue,
    Profile,
    ProfileKind,
)
from ...numerics.bvp import (
    angular_map,
    chebyshev_coefficients,
    solve_bvp,
    tau_of_phi,
    tau_of_t,
)
from ...numerics.extrapolation import richardson_limit
from ...numerics.hypergeometric import gauss_2f1
from ...numerics.quadrature import integrate_with_estimate
from ...numerics.special import bessel_k, gamma, rgamma
from ...utils.error_handling import DomainError
from ..base_service import BaseService

ArrayLike = Union[float, np.ndarray]

# (coefficient, power of t, alpha, beta, gamma) of one term coef * t^p * F(alpha, beta; gamma; z(t))
HypTerm = Tuple[float, float, float, float, float]

# correction exponents of the limit sequences (in terms of a)
A_LIMIT_EXPONENTS = (lambda a: (1 + a, 2, 3 + a, 4, 5 + a, 6))
T_LIMIT_EXPONENTS = (lambda a: (1 - a, 1 + a, 2, 3 - a, 3 + a, 4))
B_LIMIT_EXPONENTS = (lambda a: (1 + a, 2, 3 + a, 4))

ENVELOPE_POINTS = 200
ENVELOPE_RANGE = (1e-3, 1e3)
T_ENVELOPE_MAX = 500.0
SLOPE_PROBE = 1e5


def _scalar_or_array(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values[0]) if scalar else values


def _hyp_series_terms(terms: List[HypTerm], t: np.ndarray, far: bool
                      ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Value and first two t-derivatives of sum coef * t^p * F(z), with
    z = -t^2 (near) or z = -1/t^2 (far), using dF/dz = (ab/c) F(a+1, b+1; c+1; z).
    """
    if far:
        z, dz, d2z = -1.0 / t ** 2, 2.0 / t ** 3, -6.0 / t ** 4
    else:
        z, dz, d2z = -t ** 2, -2.0 * t, -2.0 * np.ones_like(t)
    value = np.zeros_like(t)
    first = np.zeros_like(t)
    second = np.zeros_like(t)
    for coef, p, al, be, ga in terms:
        f0 = gauss_2f1(al, be, ga, z)
        fz = al * be / ga * gauss_2f1(al + 1, be + 1, ga + 1, z)
        fzz = (al * be / ga * (al + 1) * (be + 1) / (ga + 1)
               * gauss_2f1(al + 2, be + 2, ga + 2, z))
        ft = fz * dz
        ftt = fzz * dz ** 2 + fz * d2z
        tp = t ** p
        # p * t^(p-1) and p(p-1) t^(p-2), zero for the polynomial powers 0 and 1
        dp1 = p * t ** (p - 1) if p != 0 else np.zeros_like(t)
        dp2 = p * (p - 1) * t ** (p - 2) if p not in (0, 1) else np.zeros_like(t)
        value += coef * tp * f0
        first += coef * (dp1 * f0 + tp * ft)
        second += coef * (dp2 * f0 + 2 * dp1 * ft + tp * ftt)
    return value, first, second


class ProfileEngine(BaseService):
    """
    Extension profile builder.

    Responsibilities:
    - Closed-form A from two hypergeometric representations (t <= 1 and t > 1)
    - Collocated B with its flux, plus a hypergeometric oracle
    - T from the modified Bessel function
    - Limits, energies, envelopes, ODE residuals and the extension functions phi
    """

    def __init__(self, settings=None):
        super().__init__("ProfileEngine", settings)
        self._profiles: Dict[Tuple[str, float], Profile] = {}
        self._lock = Lock()

    # ------------------------------------------------------------------ build

    def build_profile(self, kind: ProfileKind, s: Order) -> Profile:
        """
        Build a profile with its limit constant and energy.

        Args:
            kind: A, B or T
            s: fractional order

        Returns:
            Immutable Profile; repeated calls return the cached instance
        """
        kind = ProfileKind(kind)
        key = (kind.value, s.s)
        with self._lock:
            if key in self._profiles:
                return self._profiles[key]

        self.log_operation_start("build_profile", kind=kind.value, s=s.s)
        try:
            profile = Profile(kind=kind, order=s)
            if kind == ProfileKind.A:
                profile.closed_form_coeffs = self._a_coefficients(s)
            elif kind == ProfileKind.B:
                profile.bvp = solve_bvp(s, tol=self.tolerance(field="bvp_tol"), nodes=self.settings.bvp_nodes)
                self._prepare_b(profile)
                profile.metadata["bvp_endpoint_flux"] = profile.bvp.derivatives[-1]
            else:
                profile.metadata["normalization"] = 2.0 ** (1.0 - s.s) / gamma(s.s)

            profile.limit_constant, profile.limit_error = self._limit(profile)
            profile.energy, profile.energy_error = self._energy(profile)
            self.log_operation_success(
                "build_profile", f"limit={profile.limit_constant:.12g}, energy={profile.energy:.12g}"
            )
        except Exception as e:
            self.log_operation_error("build_profile", e)
            raise

        with self._lock:
            self._profiles[key] = profile
        return profile

    @staticmethod
    def _a_coefficients(s: Order) -> ClosedFormCoeffs:
        a = s.a
        c2 = -(gamma((1 + a) / 2) * gamma((4 - a) / 4) ** 2
               / (gamma((2 + a) / 4) ** 2 * gamma((3 - a) / 2)))
        far = -2.0 * math.sqrt(math.pi) * gamma((1 + a) / 2) * (
            rgamma(a / 4) ** 2
            - gamma((4 - a) / 4) ** 2 * rgamma((2 + a) / 4) ** 2 * rgamma((2 - a) / 4) ** 2
        )
        return ClosedFormCoeffs(C1=1.0, C2_modulus=c2, far_coefficient=far)

    @staticmethod
    def _prepare_b(profile: Profile) -> None:
        bvp = profile.bvp
        profile._cache["b_coeffs"] = chebyshev_coefficients(np.asarray(bvp.values)[::-1])
        profile._cache["g_coeffs"] = chebyshev_coefficients(np.asarray(bvp.derivatives)[::-1])

    # ------------------------------------------------------------- evaluation

    def _a_terms(self, p: Profile) -> Tuple[List[HypTerm], List[HypTerm]]:
        a = p.order.a
        coeffs = p.closed_form_coeffs
        near = [
            (coeffs.C1, 0.0, a / 4, (2 + a) / 4, (1 + a) / 2),
            (coeffs.C2_modulus, 1.0 - a, (2 - a) / 4, (4 - a) / 4, (3 - a) / 2),
        ]
        far = [(coeffs.far_coefficient, -(2 + a) / 2, (2 + a) / 4, (4 - a) / 4, 1.5)]
        return near, far

    def _eval_a(self, p: Profile, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        near_terms, far_terms = self._a_terms(p)
        value, first, second = (np.empty_like(t) for _ in range(3))
        near = t <= 1.0
        for mask, terms, is_far in ((near, near_terms, False), (~near, far_terms, True)):
            if np.any(mask):
                v, d1, d2 = _hyp_series_terms(terms, t[mask], is_far)
                value[mask], first[mask], second[mask] = v, d1, d2
        return value, first, second

    def _b_tau(self, p: Profile, tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        x = 2.0 * tau - 1.0
        return (np.polynomial.chebyshev.chebval(x, p._cache["b_coeffs"]),
                np.polynomial.chebyshev.chebval(x, p._cache["g_coeffs"]))

    def _eval_b(self, p: Profile, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        a = p.order.a
        b, g = self._b_tau(p, tau_of_t(t, p.bvp.truncation))
        cos_sq = 1.0 / (1.0 + t ** 2)
        db = g * cos_sq ** ((2.0 - a) / 2.0)
        # second derivative from the equation itself
        d2b = (0.25 * a * a * b - (2.0 - a) * t * (1.0 + t ** 2) * db) / (1.0 + t ** 2) ** 2
        return b, db, d2b

    def _eval_t(self, p: Profile, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        s = p.order.s
        c = p.metadata["normalization"]
        ks = bessel_k(s, t)
        k1s = bessel_k(1.0 - s, t)
        value = c * t ** s * ks
        first = -c * t ** s * k1s
        second = -c * ((2 * s - 1) * t ** (s - 1) * k1s - t ** s * ks)
        return value, first, second

    def _evaluate(self, p: Profile, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if p.kind != ProfileKind.B and np.any(t <= 0):
            raise DomainError(f"Profile {p.kind} is defined for t > 0 only")
        with np.errstate(over="ignore", under="ignore"):
            if p.kind == ProfileKind.A:
                return self._eval_a(p, t)
            if p.kind == ProfileKind.B:
                return self._eval_b(p, t)
            return self._eval_t(p, t)

    def profile_eval(self, p: Profile, t: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """
        Value and first derivative of a profile.

        Raises:
            DomainError: for t <= 0 on kinds A and T
        """
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        value, first, _ = self._evaluate(p, ts)
        return _scalar_or_array(value, scalar), _scalar_or_array(first, scalar)

    def profile_second_derivative(self, p: Profile, t: ArrayLike) -> ArrayLike:
        """Analytic second derivative (from the equation for B)."""
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        return _scalar_or_array(self._evaluate(p, ts)[2], scalar)

    def profile_b_flux(self, p: Profile, t: ArrayLike) -> ArrayLike:
        """Flux (1+t^2)^((2-a)/2) B'(t), which tends to kbar at +inf."""
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        _, g = self._b_tau(p, tau_of_t(ts, p.bvp.truncation))
        return _scalar_or_array(g, scalar)

    def profile_b_angular(self, p: Profile, phi: np.ndarray, sign: float) -> Tuple[np.ndarray, np.ndarray]:
        """B and its flux g at theta = sign * (pi/2 - phi), for phi in (0, pi/2]."""
        phi = np.asarray(phi, dtype=float)
        return self._b_tau(p, tau_of_phi(phi, sign * np.ones_like(phi), p.bvp.truncation))

    def profile_b_closed_form(self, s: Order, t: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """
        Hypergeometric representation of B, used to cross-check the collocation.

        B = (1+t^2)^(a/4) [c_e F(a/4, (2-a)/4; 1/2; -t^2) + c_o t F((2+a)/4, (4-a)/4; 3/2; -t^2)]

        Returns:
            (B(t), B'(t))
        """
        a = s.a
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        even_norm = math.sqrt(math.pi) * gamma((1 - a) / 2) * rgamma((2 - a) / 4) ** 2
        odd_norm = 0.5 * math.sqrt(math.pi) * gamma((1 - a) / 2) * rgamma((4 - a) / 4) ** 2
        terms = [
            (0.5 / even_norm, 0.0, a / 4, (2 - a) / 4, 0.5),
            (0.5 / odd_norm, 1.0, (2 + a) / 4, (4 - a) / 4, 1.5),
        ]
        core, core_d, _ = _hyp_series_terms(terms, ts, far=False)
        weight = (1.0 + ts ** 2) ** (a / 4)
        value = weight * core
        derivative = weight * core_d + 0.5 * a * ts / (1.0 + ts ** 2) * value
        return _scalar_or_array(value, scalar), _scalar_or_array(derivative, scalar)

    # ---------------------------------------------------------------- limits

    def _limit(self, p: Profile) -> Tuple[float, float]:
        a = p.order.a
        if p.kind == ProfileKind.A:
            def sequence(h: np.ndarray) -> np.ndarray:
                _, first, _ = self._eval_a(p, h)
                return -(h ** a) * first
            return richardson_limit(sequence, A_LIMIT_EXPONENTS(a), levels=self.settings.richardson_levels)
        if p.kind == ProfileKind.B:
            def sequence(h: np.ndarray) -> np.ndarray:
                return np.asarray(self.profile_b_flux(p, 1.0 / h))
            return richardson_limit(sequence, B_LIMIT_EXPONENTS(a), levels=self.settings.richardson_levels)

        def sequence(h: np.ndarray) -> np.ndarray:
            value, first, _ = self._eval_t(p, h)
            return -(h ** a) * value * first
        return richardson_limit(sequence, T_LIMIT_EXPONENTS(a), levels=self.settings.richardson_levels)

    def profile_limit(self, p: Profile) -> float:
        """
        Boundary limit of the profile:
        A: -lim_{t->0} t^a A'(t) (= dbar)
        B: lim_{t->inf} (1+t^2)^((2-a)/2) B'(t) (= kbar)
        T: -lim_{t->0} t^a T T' (= ext_factor)

        Raises:
            ExtrapolationError: when the Richardson samples are not monotone
        """
        self.log_operation_start("profile_limit", kind=p.kind, s=p.order.s)
        value, error = self._limit(p)
        self.log_operation_success("profile_limit", f"value={value:.15g}, error={error:.3g}")
        return value

    # --------------------------------------------------------------- energies

    def _energy(self, p: Profile) -> Tuple[float, float]:
        a = p.order.a
        tol = self.tolerance()
        if p.kind == ProfileKind.A:
            def gradient_part(t):
                _, first, _ = self._eval_a(p, t)
                return t ** a * (1.0 + t ** 2) * first ** 2

            def mass_part(t):
                value, _, _ = self._eval_a(p, t)
                return t ** a * value ** 2

            total, error = 0.0, 0.0
            for domain in (Interval(lo=0.0, hi=1.0, lo_algebraic_exponent=-a), Interval(lo=1.0, hi=math.inf)):
                grad = integrate_with_estimate(gradient_part, domain, tol=tol)
                mass = integrate_with_estimate(mass_part, domain, tol=tol)
                total += grad.value - 0.25 * (2 + a) * a * mass.value
                error += grad.error + abs(0.25 * (2 + a) * a) * mass.error
            return total, error

        if p.kind == ProfileKind.B:
            half_width = p.bvp.truncation

            def integrand(sign: float):
                def f(phi):
                    b, g = self._b_tau(p, tau_of_phi(phi, sign * np.ones_like(phi), half_width))
                    sin_a = np.sin(phi) ** a
                    return g ** 2 / sin_a + 0.25 * a * a * sin_a * b ** 2
                return f

            total, error = 0.0, 0.0
            for sign in (-1.0, 1.0):
                part = integrate_with_estimate(integrand(sign), Interval(lo=0.0, hi=0.5 * math.pi), tol=tol)
                total += part.value
                error += part.error
            return total, error

        def t_energy(t):
            value, first, _ = self._eval_t(p, t)
            return t ** a * (value ** 2 + first ** 2)

        result = integrate_with_estimate(t_energy, Interval(lo=0.0, hi=math.inf), tol=tol)
        return result.value, result.error

    def profile_energy(self, p: Profile) -> float:
        """
        Energy integral of the profile:
        A: int t^a (1+t^2) A'^2 - ((2+a)a/4) int t^a A^2 (= dbar)
        B: int cos^a(theta) (B_theta^2 + (a^2/4) B^2) dtheta (= kbar)
        T: int t^a (T^2 + T'^2) (= ext_factor)
        """
        self.log_operation_start("profile_energy", kind=p.kind, s=p.order.s)
        value, error = self._energy(p)
        self.log_operation_success("profile_energy", f"value={value:.15g}, error={error:.3g}")
        return value

    # ------------------------------------------------------------- envelopes

    def asymptotic_envelope_check(self, p: Profile) -> Dict[str, float]:
        """
        Ratio of the profile to its algebraic envelope on a log grid over [1e-3, 1e3].

        A: A(t) (1+t^2)^((2+a)/4), plus t A'/A at t = 1e5 against -(2+a)/2
        B: B'(t) (1+t^2)^((2-a)/2) for t of both signs
        T: T(t) (1+t)^(1/2-s) e^t
        """
        a = p.order.a
        t = log_grid(*ENVELOPE_RANGE, ENVELOPE_POINTS)
        result: Dict[str, float] = {}
        if p.kind == ProfileKind.A:
            value, first = self.profile_eval(p, t)
            ratio = value * (1.0 + t ** 2) ** ((2 + a) / 4)
            v, d = self.profile_eval(p, SLOPE_PROBE)
            result["slope"] = SLOPE_PROBE * d / v
            result["slope_target"] = -(2 + a) / 2
        elif p.kind == ProfileKind.B:
            both = np.concatenate((-t[::-1], t))
            _, first = self.profile_eval(p, both)
            ratio = first * (1.0 + both ** 2) ** ((2 - a) / 2)
        else:
            # K underflows near t = 700
            t = log_grid(ENVELOPE_RANGE[0], T_ENVELOPE_MAX, ENVELOPE_POINTS)
            value, _ = self.profile_eval(p, t)
            ratio = value * (1.0 + t) ** (0.5 - p.order.s) * np.exp(t)
        result["min"] = float(np.min(ratio))
        result["max"] = float(np.max(ratio))
        return result

    # ----------------------------------------------------------- ODE residual

    def ode_residual(self, p: Profile, t: ArrayLike) -> ArrayLike:
        """
        Relative residual of the profile equation at t.

        A and T use analytic second derivatives. For B the flux equation
        g_tau = c2 B is checked with the differentiated Chebyshev series,
        scaled by the flux size.
        """
        a = p.order.a
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if p.kind == ProfileKind.A:
            v, d1, d2 = self._evaluate(p, ts)
            terms = [(ts ** 3 + ts) * d2, (a + ts ** 2 * (2 + a)) * d1, 0.25 * (2 + a) * a * ts * v]
        elif p.kind == ProfileKind.T:
            v, d1, d2 = self._evaluate(p, ts)
            terms = [d2, a / ts * d1, -v]
        else:
            tau = tau_of_t(ts, p.bvp.truncation)
            _, log_dtheta, log_cos = angular_map(tau, p.bvp.truncation)
            c2 = 0.25 * a * a * np.exp(log_dtheta + a * log_cos)
            x = 2.0 * tau - 1.0
            g_tau = 2.0 * np.polynomial.chebyshev.chebval(
                x, np.polynomial.chebyshev.chebder(p._cache["g_coeffs"]))
            b, g = self._b_tau(p, tau)
            scale = max(float(np.max(np.abs(p.bvp.derivatives))), 1e-300)
            return _scalar_or_array(np.abs(g_tau - c2 * b) / scale, scalar)
        total = sum(terms)
        scale = sum(np.abs(term) for term in terms)
        return _scalar_or_array(np.abs(total) / np.maximum(scale, 1e-300), scalar)

    # -------------------------------------------------------------- phi eval

    def phi_eval(self, kind: PhiKind, s: Order, pt: ExtensionPoint) -> PhiValue:
        """
        Extension function and its gradient.

        I: phi = x_n^(-a/2) A(y / x_n), x_n > 0
        II: phi = (y^2 + d^2)^(-a/4) B(d / y), d signed

        Raises:
            DomainError: when x_n <= 0 for kind I
        """
        kind = PhiKind(kind)
        a = s.a
        x, y = pt.x_n_or_signed_d, pt.y
        if kind == PhiKind.I:
            if x <= 0:
                raise DomainError(f"phi-I needs x_n > 0, got {x}")
            profile = self.build_profile(ProfileKind.A, s)
            t = y / x
            value, first = self.profile_eval(profile, t)
            scale = x ** (-a / 2 - 1)
            return PhiValue(
                value=x ** (-a / 2) * value,
                d_component=scale * (-0.5 * a * value - t * first),
                y_component=scale * first,
            )

        profile = self.build_profile(ProfileKind.B, s)
        t = x / y
        value, first = self.profile_eval(profile, t)
        r2 = x * x + y * y
        weight = r2 ** (-a / 4)
        return PhiValue(
            value=weight * value,
            d_component=-0.5 * a * x * r2 ** (-a / 4 - 1) * value + weight * first / y,
            y_component=-0.5 * a * y * r2 ** (-a / 4 - 1) * value - weight * first * x / y ** 2,
        )

    def phi_grid(self, kind: PhiKind, s: Order, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, ...]:
        """Vectorized phi_eval: (value, d_component, y_component) on arrays of points."""
        kind = PhiKind(kind)
        a = s.a
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if kind == PhiKind.I:
            if np.any(x <= 0):
                raise DomainError("phi-I needs x_n > 0")
            profile = self.build_profile(ProfileKind.A, s)
            t = y / x
            value, first = self.profile_eval(profile, t.ravel())
            value, first = value.reshape(t.shape), first.reshape(t.shape)
            scale = x ** (-a / 2 - 1)
            return x ** (-a / 2) * value, scale * (-0.5 * a * value - t * first), scale * first
        profile = self.build_profile(ProfileKind.B, s)
        t = x / y
        value, first = self.profile_eval(profile, t.ravel())
        value, first = value.reshape(t.shape), first.reshape(t.shape)
        r2 = x ** 2 + y ** 2
        weight = r2 ** (-a / 4)
        return (weight * value,
                -0.5 * a * x * r2 ** (-a / 4 - 1) * value + weight * first / y,
                -0.5 * a * y * r2 ** (-a / 4 - 1) * value - weight * first * x / y ** 2)

    # ----------------------------------------------------------------- export

    def profile_table(self, p: Profile, t_values: np.ndarray) -> pd.DataFrame:
        """(t, value, derivative) table of a profile."""
        value, first = self.profile_eval(p, np.asarray(t_values, dtype=float))
        return pd.DataFrame({"t": t_values, "value": value, "derivative": first})

    def weighted_divergence(self, kind: PhiKind, s: Order, pt: ExtensionPoint, h: float = 1e-3) -> float:
        """
        Five-point stencil of div(y^a grad phi) at pt, scaled by the size of the
        individual flux differences. Should be O(h^2).
        """
        x, y = pt.x_n_or_signed_d, pt.y
        a = s.a

        def flux(px: float, py: float) -> Tuple[float, float]:
            v = self.phi_eval(kind, s, ExtensionPoint(x_n_or_signed_d=px, y=py))
            return py ** a * v.d_component, py ** a * v.y_component

        fx_plus, _ = flux(x + h, y)
        fx_minus, _ = flux(x - h, y)
        _, fy_plus = flux(x, y + h)
        _, fy_minus = flux(x, y - h)
        divergence = (fx_plus - fx_minus + fy_plus - fy_minus) / (2.0 * h)
        scale = (abs(fx_plus) + abs(fx_minus) + abs(fy_plus) + abs(fy_minus)) / (2.0 * h)
        return divergence / max(scale, 1e-300)

    def clear(self, kinds: Optional[List[ProfileKind]] = None) -> None:
        """Drop cached profiles."""
        with self._lock:
            if kinds is None:
                self._profiles.clear()
            else:
                names = {ProfileKind(k).value for k in kinds}
                self._profiles = {k: v for k, v in self._profiles.items() if k[0] not in names}
