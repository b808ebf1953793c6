"""
Fracops Engine - quadratic forms of the spectral and Dirichlet fractional
Laplacians and the Hardy quotients built from them.

Double integrals over x and xi are taken in the difference variable
h = xi - x: the inner integral G(|h|) = int |f(x + h) - f(x)|^2 dx is smooth
and G(rho) / rho^2 is regular at 0, so the radial integral against
rho^(-1-2s) is a Gauss-Jacobi rule with exponent 1 - 2s.
"""

import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import zeta
from scipy.stats import qmc

from ...models.geometry import SpectralBasis, TestFamily, TestFunctionSpec
from ...models.numerics import Interval, QuadratureKind, QuadratureRule
from ...models.order import Order
from ...models.profile import ProfileKind
from ...models.reports import (
    DirichletForms,
    DirichletHardyReport,
    ExtensionEnergyReport,
    FourierIdentityReport,
    QuotientReport,
)
from ...numerics.quadrature import gauss_legendre, integrate_2d, integrate_batch, integrate_with_estimate
from ...numerics.special import gamma
from ...utils.error_handling import DomainError, logged_operation
from ..base_service import BaseService
from ..constants import ConstantsEngine
from ..families import BumpField, FamilyFactory, GaussianField
from ..profiles import ProfileEngine

# rho values handled per block in the plane form
RHO_BLOCK = 32


class FracopsEngine(BaseService):
    """
    Fractional quadratic form calculator.

    Responsibilities:
    - Spectral forms, Hardy quotients and extension energies of sine expansions
    - Full, censored and complement Dirichlet forms on the half line and half plane
    - Dirichlet and censored Hardy quotients against their sharp constants
    - Fourier side of the energy identity for Gaussians
    """

    def __init__(self, profile_engine: Optional[ProfileEngine] = None, settings=None):
        super().__init__("FracopsEngine", settings)
        self.profiles = profile_engine or ProfileEngine(self.settings)
        self.constants = ConstantsEngine(self.settings)
        self.families = FamilyFactory(self.profiles, self.settings)

    def _jacobi(self, lo: float, hi: float, e_lo: float = 0.0, e_hi: float = 0.0) -> Tuple[Interval, QuadratureRule]:
        domain = Interval(lo=lo, hi=hi, lo_algebraic_exponent=e_lo, hi_algebraic_exponent=e_hi)
        return domain, QuadratureRule(kind=QuadratureKind.GAUSS_JACOBI, level=self.settings.quad_level)

    # ---------------------------------------------------------------- spectral

    def spectral_form(self, b: SpectralBasis, s: Order) -> float:
        """sum c_i^2 lambda_i^s."""
        coefficients = np.asarray(b.coefficients, dtype=float)
        return float(np.sum(coefficients ** 2 * b.eigenvalues() ** s.s))

    def _distance_integral(self, b: SpectralBasis, s: Order) -> float:
        """int f^2 / d^(2s) with d the distance to the boundary of the interval or box."""
        tol = self.tolerance()
        exponent = 2.0 - 2.0 * s.s
        if b.dimension == 1:
            length = b.domain_length
            total = 0.0
            for near_left in (True, False):
                if near_left:
                    domain, rule = self._jacobi(0.0, 0.5 * length, e_lo=exponent)
                    distance = (lambda x: x)
                else:
                    domain, rule = self._jacobi(0.5 * length, length, e_hi=exponent)
                    distance = (lambda x: length - x)
                total += integrate_with_estimate(
                    lambda x, distance=distance: b.evaluate(x) ** 2 * distance(x) ** (-2.0 * s.s),
                    domain, rule=rule, tol=tol).value
            return total
        if b.dimension != 2:
            raise DomainError(f"Distance integrals are implemented for intervals and rectangles, not {b.dimension}D")

        l1, l2 = b.lengths
        depth = 0.5 * min(l1, l2)
        # (edge length, map from (r, u) to (x, y))
        edges = [
            (l1, lambda r, u: (u, r)),
            (l1, lambda r, u: (u, l2 - r)),
            (l2, lambda r, u: (r, u)),
            (l2, lambda r, u: (l1 - r, u)),
        ]
        domain, rule = self._jacobi(0.0, depth, e_lo=exponent)
        total = 0.0
        for along, to_xy in edges:
            def integrand(r, u, to_xy=to_xy):
                x, y = to_xy(r, u)
                return b.evaluate(x, y) ** 2 * r ** (-2.0 * s.s)

            total += integrate_2d(integrand, domain, lambda r, along=along: (r, along - r),
                                  rule=rule, tol=tol).value
        return total

    @logged_operation("spectral_hardy_quotient")
    def spectral_hardy_quotient(self, b: SpectralBasis, s: Order) -> QuotientReport:
        """
        Spectral form over int f^2 / d^(2s), against d_spec. The inequality is
        asserted for s in [1/2, 1) only.
        """
        form = self.spectral_form(b, s)
        denominator = self._distance_integral(b, s)
        return QuotientReport.build(
            "spectral_hardy", s.s, form, denominator, self.constants.d_spec(s), tol=1e-9,
            params={"lengths": b.lengths, "modes": b.mode_count}, asserted=s.s >= 0.5,
        )

    @staticmethod
    def truncation_bound(b: SpectralBasis, s: Order) -> float:
        """
        Upper bound on sum_k lambda_k^s c_k^2 over the modes beyond the expansion.

        The dropped coefficients are assumed to follow the envelope
        |c_k| <= C prod_e k_e^-2 with C fitted to the kept coefficients. With
        lambda_k^s <= (pi / L_min)^(2s) sum_e k_e^(2s), each direction e and
        each cut direction d contributes a tail sum times zeta factors. In one
        dimension this is lambda_M^s C^2 M^-3 / (3 - 2s).
        """
        modes = np.asarray(b.modes, dtype=float)
        coefficients = np.abs(np.asarray(b.coefficients, dtype=float))
        dim = modes.shape[1]
        envelope = float(np.max(coefficients * np.prod(modes, axis=1) ** 2))
        cut = modes.max(axis=0)

        def tail(p: float, m: float) -> float:
            # sum_{k > m} k^p <= int_m^inf x^p dx for p < -1
            return m ** (p + 1.0) / (-p - 1.0)

        z4, z4s = zeta(4.0), zeta(4.0 - 2.0 * s.s)
        total = 0.0
        for d in range(dim):
            for e in range(dim):
                if e == d:
                    total += tail(2.0 * s.s - 4.0, cut[d]) * z4 ** (dim - 1)
                else:
                    total += tail(-4.0, cut[d]) * z4s * z4 ** (dim - 2)
        scale = (math.pi / min(b.lengths)) ** (2.0 * s.s)
        return envelope ** 2 * scale * total

    @logged_operation("spectral_extension_energy")
    def spectral_extension_energy(self, b: SpectralBasis, s: Order) -> ExtensionEnergyReport:
        """
        Extension energy of the separable extension sum c_i T(sqrt(lambda_i) y) phi_i,
        once as ext_factor * form and once with the quadrature energy of T.
        """
        form = self.spectral_form(b, s)
        closed = self.constants.ext_factor(s) * form
        t_profile = self.profiles.build_profile(ProfileKind.T, s)
        quadrature = t_profile.energy * form
        return ExtensionEnergyReport(
            extension_energy=closed,
            quadrature_energy=quadrature,
            identity_residual=abs(closed - quadrature) / abs(closed),
            truncation_bound=self.truncation_bound(b, s),
        )

    # --------------------------------------------------------------- Dirichlet

    def _difference_energy_1d(self, field, s: Order) -> Tuple[float, float]:
        """
        int_R int_R |f(x) - f(xi)|^2 / |x - xi|^(1+2s) for a field supported
        (or negligible) outside [lo, hi]. Returns (value, int f^2).
        """
        tol = self.tolerance()
        lo, hi = field.support()
        reach = hi - lo

        def square(x):
            return field.value(x) ** 2

        mass = integrate_with_estimate(square, Interval(lo=lo, hi=hi), tol=tol).value

        def radial(rho):
            shift = rho[:, None]

            def difference(x):
                return (field.value(x + shift) - field.value(x)) ** 2

            total = np.zeros_like(rho)
            for left, right in ((lo - rho, np.full_like(rho, lo)), (np.full_like(rho, lo), hi - rho),
                                (hi - rho, np.full_like(rho, hi))):
                total += integrate_batch(difference, left, right, tol * 0.1)[0]
            return rho ** (-1.0 - 2.0 * s.s) * total

        domain, rule = self._jacobi(0.0, reach, e_lo=1.0 - 2.0 * s.s)
        near = integrate_with_estimate(radial, domain, rule=rule, tol=tol).value
        # beyond reach the supports are disjoint and G = 2 int f^2
        tail = 2.0 * mass * reach ** (-2.0 * s.s) / (2.0 * s.s)
        return 2.0 * (near + tail), mass

    def _plane_difference(self, field: BumpField, rho: np.ndarray, resolution: int) -> np.ndarray:
        """G(rho) = int_{R^2} (b(x + rho e) - b(x))^2 dx for a radial bump, polar around its center."""
        radius = field.width
        n_beta = 2 * resolution
        beta = 2.0 * math.pi * np.arange(n_beta) / n_beta
        cos_beta = np.cos(beta)[None, None, :]
        result = np.zeros_like(rho)
        for start in range(0, len(rho), RHO_BLOCK):
            block = rho[start:start + RHO_BLOCK]
            total = np.zeros_like(block)
            for lo, hi in ((np.zeros_like(block), np.full_like(block, radius)),
                           (np.full_like(block, radius), radius + block)):
                u, w = gauss_legendre(-1.0, 1.0, resolution)
                half = 0.5 * (hi - lo)[:, None]
                r = lo[:, None] + half * (1.0 + u[None, :])
                shifted = np.sqrt(r[:, :, None] ** 2 + block[:, None, None] ** 2
                                  + 2.0 * r[:, :, None] * block[:, None, None] * cos_beta)
                square = (field.radial(shifted) - field.radial(r)[:, :, None]) ** 2
                angular = np.sum(square, axis=2) * (2.0 * math.pi / n_beta)
                total += np.sum(angular * r * w[None, :] * half, axis=1)
            result[start:start + RHO_BLOCK] = total
        return result

    def _qmc_difference(self, field: BumpField, rho: np.ndarray, seed: int) -> np.ndarray:
        """Sobol estimate of G(rho) over the square containing both supports."""
        points = qmc.Sobol(d=2, scramble=True, seed=seed).random(self.settings.qmc_points)
        result = np.zeros_like(rho)
        for k, r in enumerate(rho):
            half = field.width + r
            x = (2.0 * points[:, 0] - 1.0) * half
            y = (2.0 * points[:, 1] - 1.0) * half
            square = (field.radial(np.hypot(x + r, y)) - field.radial(np.hypot(x, y))) ** 2
            result[k] = (2.0 * half) ** 2 * np.mean(square)
        return result

    def _difference_energy_2d(self, field: BumpField, s: Order, resolution: int,
                              difference: Optional[Callable[[np.ndarray], np.ndarray]] = None
                              ) -> Tuple[float, float]:
        """Plane analogue of _difference_energy_1d for radial bumps; returns (value, int f^2)."""
        tol = self.tolerance()
        radius = field.width
        difference = difference or (lambda rho: self._plane_difference(field, rho, resolution))
        mass = 2.0 * math.pi * integrate_with_estimate(
            lambda r: field.radial(r) ** 2 * r, Interval(lo=0.0, hi=radius), tol=tol).value

        domain, rule = self._jacobi(0.0, 2.0 * radius, e_lo=1.0 - 2.0 * s.s)
        # fixed-resolution inner values converge at the inner accuracy only
        near = integrate_with_estimate(lambda rho: rho ** (-1.0 - 2.0 * s.s) * difference(rho),
                                       domain, rule=rule, tol=max(tol, 1e-8)).value
        tail = 2.0 * mass * (2.0 * radius) ** (-2.0 * s.s) / (2.0 * s.s)
        return 2.0 * math.pi * (near + tail), mass

    def _marginal(self, field, n: int) -> Callable[[np.ndarray], np.ndarray]:
        """F(x_n) = integral of f^2 over the tangential variables."""
        if n == 1:
            return lambda xn: field.value(xn) ** 2
        radius, c_n = field.width, field.center[1]
        tol = self.tolerance() * 0.1

        def marginal(xn):
            xn = np.asarray(xn, dtype=float)
            offset = (xn - c_n).ravel()
            half = np.sqrt(np.maximum(radius ** 2 - offset ** 2, 0.0))
            values = np.zeros_like(offset)
            active = half > 0
            if np.any(active):
                off = offset[active][:, None]
                values[active] = 2.0 * integrate_batch(
                    lambda u: field.radial(np.sqrt(u ** 2 + off ** 2)) ** 2,
                    np.zeros(int(np.sum(active))), half[active], tol)[0]
            return values.reshape(xn.shape)

        return marginal

    def _complement_part(self, field, s: Order, n: int, mass: float) -> float:
        """
        int |h|^(-n-2s) (int_{0 < x_n < |h_n|} f^2) dh by quadrature in the
        direction of h and in t = |h_n|.
        """
        tol = self.tolerance()
        if n == 1:
            lo, hi = field.support()
            angular = 2.0
        else:
            lo, hi = field.center[1] - field.width, field.center[1] + field.width
            angular = 4.0 * integrate_with_estimate(lambda alpha: np.sin(alpha) ** (2.0 * s.s),
                                                    Interval(lo=0.0, hi=0.5 * math.pi), tol=tol).value
        marginal = self._marginal(field, n)

        def layer(t):
            # D(t) = int_{x_n < t} f^2
            d, _ = integrate_batch(marginal, np.full_like(t, lo), t, tol * 0.1)
            return t ** (-1.0 - 2.0 * s.s) * d

        inner = integrate_with_estimate(layer, Interval(lo=lo, hi=hi), tol=tol).value
        return angular * (inner + mass * hi ** (-2.0 * s.s) / (2.0 * s.s))

    def _hardy_integral(self, field, s: Order, n: int) -> float:
        """int f^2 / x_n^(2s) over the half space."""
        tol = self.tolerance()
        if n == 1:
            lo, hi = field.support()
            return integrate_with_estimate(lambda x: field.value(x) ** 2 * x ** (-2.0 * s.s),
                                           Interval(lo=lo, hi=hi), tol=tol).value
        return field.integrate(lambda x, y, v, vx, vy: v ** 2 * y ** (-2.0 * s.s),
                               y_min=0.0, tol=tol).value

    def _half_space_field(self, f: TestFunctionSpec, n: int):
        if n not in (1, 2):
            raise DomainError(f"Dirichlet forms are implemented for n = 1 and n = 2, got {n}")
        family = TestFamily(f.family)
        if n == 2 and family != TestFamily.GAUSSIAN_BUMP:
            raise DomainError(f"Plane Dirichlet forms need a radial bump, got {family.value}")
        if family not in (TestFamily.GAUSSIAN_BUMP, TestFamily.GAUSSIAN):
            raise DomainError(f"Family {family.value} has no Dirichlet form")
        field = self.families.build(f, dimension=n)
        lowest = field.support()[0] if n == 1 else field.center[1] - field.width
        if lowest <= 0.0:
            raise DomainError(f"Test function must be supported in x_n > 0, reaches {lowest}")
        return field

    @logged_operation("dirichlet_form")
    def dirichlet_form(self, f: TestFunctionSpec, s: Order, n: int,
                       resolution: Optional[int] = None) -> DirichletForms:
        """
        Full form (c_ns/2) int int |f(x) - f(xi)|^2 / |x - xi|^(n+2s) and its
        split into the Omega x Omega part and the complement part
        c_ns * kernel_prefactor * int f^2 / x_n^(2s) on the half space.

        The Omega x Omega part subtracts the complement by a quadrature route
        independent of the closed form, so split_residual measures both.

        Raises:
            DomainError: for unsupported families or support reaching x_n <= 0
        """
        field = self._half_space_field(f, n)
        c = self.constants.c_ns(n, s)
        resolution = resolution or self.settings.form_resolution
        qmc_value = None
        resolution_error = 0.0
        if n == 1:
            energy, mass = self._difference_energy_1d(field, s)
        else:
            energy, mass = self._difference_energy_2d(field, s, resolution)
            coarse, _ = self._difference_energy_2d(field, s, max(8, resolution // 2))
            resolution_error = 0.5 * c * abs(energy - coarse)
            qmc_energy, _ = self._difference_energy_2d(
                field, s, resolution, lambda rho: self._qmc_difference(field, rho, f.seed))
            qmc_value = 0.5 * c * qmc_energy

        full = 0.5 * c * energy
        hardy = self._hardy_integral(field, s, n)
        complement = c * self.constants.kernel_prefactor(n, s) * hardy
        omega_omega = full - 0.5 * c * self._complement_part(field, s, n, mass)
        return DirichletForms(
            full_form=full,
            omega_omega=omega_omega,
            omega_complement=complement,
            split_residual=abs(full - omega_omega - complement) / abs(full),
            hardy_integral=hardy,
            qmc_full_form=qmc_value,
            resolution_error=resolution_error,
        )

    @logged_operation("dirichlet_hardy_quotient")
    def dirichlet_hardy_quotient(self, f: TestFunctionSpec, s: Order, n: int) -> DirichletHardyReport:
        """
        Full form over int f^2 / x_n^(2s) against Gamma^2(s+1/2)/pi, the same
        without the c_ns/2 normalization against k_ns, and the censored form
        against kappa_ns. Asserted for n >= 2; n = 1 is reported only.
        """
        forms = self.dirichlet_form(f, s, n)
        c = self.constants.c_ns(n, s)
        asserted = n >= 2
        params = {"family": str(f.family), **f.params, "n": n}
        target = self.constants.gamma_sq_over_pi(s)
        k_ns = self.constants.k_ns(n, s)
        normalized = QuotientReport.build("dirichlet_normalized", s.s, forms.full_form, forms.hardy_integral,
                                          target, tol=1e-9, params=params, asserted=asserted)
        unnormalized = QuotientReport.build("dirichlet_unnormalized", s.s, 2.0 * forms.full_form / c,
                                            forms.hardy_integral, k_ns, tol=1e-9, params=params,
                                            asserted=asserted)
        censored = QuotientReport.build("censored", s.s, 2.0 * forms.omega_omega / c, forms.hardy_integral,
                                        self.constants.kappa_ns(n, s), tol=1e-9, params=params,
                                        asserted=asserted)
        expected = k_ns / target
        ratio = unnormalized.quotient / normalized.quotient
        return DirichletHardyReport(
            normalized=normalized,
            unnormalized=unnormalized,
            censored=censored,
            ratio_residual=abs(ratio - expected) / expected,
        )

    # ----------------------------------------------------------------- Fourier

    @logged_operation("fourier_energy_identity")
    def fourier_energy_identity(self, f: TestFunctionSpec, s: Order) -> FourierIdentityReport:
        """
        int |eta|^(2s) |f^|^2 against (c_1s/2) int int |f(x) - f(xi)|^2 / |x - xi|^(1+2s)
        on the line, for Gaussians.

        Raises:
            DomainError: for families without a closed-form transform
        """
        if TestFamily(f.family) != TestFamily.GAUSSIAN:
            raise DomainError(f"Fourier identity needs a Gaussian, got {f.family}")
        field: GaussianField = self.families.build(f)
        c = self.constants.c_ns(1, s)
        fourier = field.fourier_energy(s)
        energy, _ = self._difference_energy_1d(field, s)
        double = 0.5 * c * energy

        lo, hi = field.support()
        gradient = integrate_with_estimate(lambda x: field.value_grad(x)[1] ** 2, Interval(lo=lo, hi=hi),
                                           tol=self.tolerance()).value
        chain = s.s * gamma((1.0 + 2.0 * s.s) / 2.0) / (math.sqrt(math.pi) * gamma(s.s))
        via_constants = 0.5 * c * self.constants.ext_factor(s)
        return FourierIdentityReport(
            fourier_side=fourier,
            double_integral_side=double,
            residual=abs(fourier - double) / abs(fourier),
            constant_chain_residual=abs(chain - via_constants) / max(abs(chain), abs(via_constants)),
            plancherel_ratio=fourier / gradient,
        )
