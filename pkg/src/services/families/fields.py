"""
Evaluable test functions.

Plane fields live in the (x_n, y) half plane (or the (x', x_n) plane for the
Dirichlet forms); the second coordinate is always the one that must stay
positive.
"""

import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ...models.numerics import Interval, QuadratureResult
from ...models.order import Order
from ...models.profile import PhiKind, ProfileKind
from ...numerics.quadrature import integrate_2d
from ...numerics.special import gamma

# f(x, y, v, v_x, v_y) -> integrand
PlaneIntegrand = Callable[..., np.ndarray]

# a Gaussian is treated as zero this many widths away from its center
GAUSSIAN_WINDOW = 10.0


def smooth_step(tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    C-infinity step falling from 1 at tau <= 0 to 0 at tau >= 1.

    Returns:
        (value, derivative)
    """
    tau = np.clip(np.asarray(tau, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        left = np.where(tau < 1.0, np.exp(-1.0 / (1.0 - tau)), 0.0)
        right = np.where(tau > 0.0, np.exp(-1.0 / tau), 0.0)
        total = left + right
        value = left / total
        d_left = np.where(tau < 1.0, left / (1.0 - tau) ** 2, 0.0)
        d_right = np.where(tau > 0.0, right / tau ** 2, 0.0)
        derivative = (d_left * right + left * d_right) / total ** 2
    return value, -np.nan_to_num(derivative)


class BumpField:
    """exp(1 - 1/(1 - r^2/R^2)) around a center, in one or two dimensions."""

    def __init__(self, center: Sequence[float], width: float):
        if width <= 0:
            raise ValueError(f"Bump width must be positive, got {width}")
        self.center = tuple(float(c) for c in center)
        self.width = float(width)

    @property
    def dimension(self) -> int:
        return len(self.center)

    def radial(self, r: np.ndarray) -> np.ndarray:
        """Profile as a function of the distance to the center."""
        rho2 = (np.asarray(r, dtype=float) / self.width) ** 2
        inside = rho2 < 1.0
        safe = np.where(inside, 1.0 - rho2, 1.0)
        with np.errstate(under="ignore"):
            return np.where(inside, np.exp(1.0 - 1.0 / safe), 0.0)

    def value(self, *coords: np.ndarray) -> np.ndarray:
        r2 = sum((np.asarray(x, dtype=float) - c) ** 2 for x, c in zip(coords, self.center))
        return self.radial(np.sqrt(r2))

    def value_grad(self, *coords: np.ndarray) -> Tuple[np.ndarray, ...]:
        """Value followed by one partial derivative per coordinate."""
        offsets = [np.asarray(x, dtype=float) - c for x, c in zip(coords, self.center)]
        rho2 = sum(d ** 2 for d in offsets) / self.width ** 2
        inside = rho2 < 1.0
        safe = np.where(inside, 1.0 - rho2, 1.0)
        with np.errstate(under="ignore"):
            v = np.where(inside, np.exp(1.0 - 1.0 / safe), 0.0)
            factor = -2.0 * v / (safe ** 2 * self.width ** 2)
        return (v,) + tuple(factor * d for d in offsets)

    def support(self) -> Tuple[float, float]:
        """Extent along the first coordinate (the only one for 1D bumps)."""
        c = self.center[0]
        return c - self.width, c + self.width

    def chord(self, x: np.ndarray, y_min: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
        """Second-coordinate extent of the support above x, cut at y_min."""
        half = np.sqrt(np.maximum(self.width ** 2 - (np.asarray(x, dtype=float) - self.center[0]) ** 2, 0.0))
        return np.maximum(self.center[1] - half, y_min), self.center[1] + half

    def floor_crossings(self, y_min: float) -> Tuple[float, ...]:
        """x where the support boundary meets y = y_min; the chord has a kink there."""
        offset = self.center[1] - y_min
        if abs(offset) >= self.width:
            return ()
        half = math.sqrt(self.width ** 2 - offset ** 2)
        return self.center[0] - half, self.center[0] + half

    def integrate(
        self,
        f: PlaneIntegrand,
        x_range: Tuple[float, float] = (-math.inf, math.inf),
        y_min: float = 0.0,
        breaks: Sequence[float] = (),
        tol: Optional[float] = None,
    ) -> QuadratureResult:
        """
        Integral of f(x, y, v, v_x, v_y) over the support of a 2D bump,
        restricted to x in x_range and y > y_min. breaks split the x range
        where the integrand has a kink.
        """
        lo, hi = self.support()
        lo, hi = max(lo, x_range[0]), min(hi, x_range[1])
        if not hi > lo:
            return QuadratureResult(value=0.0, error=0.0, level=0)
        breaks = tuple(breaks) + self.floor_crossings(y_min)
        cuts = [lo] + sorted(set(b for b in breaks if lo < b < hi)) + [hi]

        def integrand(x: np.ndarray, y: np.ndarray) -> np.ndarray:
            v, vx, vy = self.value_grad(x, y)
            return f(x, y, v, vx, vy)

        value, error, level = 0.0, 0.0, 0
        for a, b in zip(cuts[:-1], cuts[1:]):
            part = integrate_2d(integrand, Interval(lo=a, hi=b), lambda x: self.chord(x, y_min), tol=tol)
            value += part.value
            error += part.error
            level = max(level, part.level)
        return QuadratureResult(value=value, error=error, level=level)


class PhiBumpField(BumpField):
    """phi-I times a bump in the (x_n, y) plane; the bump must stay in x_n > 0."""

    def __init__(self, center: Sequence[float], width: float, engine, s: Order):
        super().__init__(center, width)
        if self.center[0] - self.width <= 0:
            raise ValueError("phi-I bump must be supported in x_n > 0")
        self.engine = engine
        self.s = s

    def value(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        b = super().value(x, y)
        phi = np.zeros(x.shape)
        inside = b > 0
        trace = inside & (y <= 0.0)
        # A(0) = 1
        phi[trace] = x[trace] ** (-0.5 * self.s.a)
        bulk = inside & (y > 0.0)
        if np.any(bulk):
            phi[bulk] = self.engine.phi_grid(PhiKind.I, self.s, x[bulk], y[bulk])[0]
        return phi * b

    def value_grad(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        b, bx, by = super().value_grad(x, y)
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        inside = b > 0
        phi, phi_x, phi_y = (np.zeros(x.shape) for _ in range(3))
        if np.any(inside):
            values = self.engine.phi_grid(PhiKind.I, self.s, x[inside], y[inside])
            phi[inside], phi_x[inside], phi_y[inside] = values
        return phi * b, phi_x * b + phi * bx, phi_y * b + phi * by


class GaussianField:
    """exp(-(x - c)^2 / (2 sigma^2)) on the line."""

    def __init__(self, center: float, sigma: float):
        if sigma <= 0:
            raise ValueError(f"Gaussian width must be positive, got {sigma}")
        self.center = (float(center),)
        self.sigma = float(sigma)

    @property
    def dimension(self) -> int:
        return 1

    def value(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-0.5 * ((np.asarray(x, dtype=float) - self.center[0]) / self.sigma) ** 2)

    def value_grad(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        z = (np.asarray(x, dtype=float) - self.center[0]) / self.sigma
        v = np.exp(-0.5 * z * z)
        return v, -z * v / self.sigma

    def support(self) -> Tuple[float, float]:
        c = self.center[0]
        return c - GAUSSIAN_WINDOW * self.sigma, c + GAUSSIAN_WINDOW * self.sigma

    def fourier_energy(self, s: Order) -> float:
        """Integral of |eta|^(2s) |f^(eta)|^2 with the unitary transform sigma exp(-sigma^2 eta^2 / 2)."""
        return self.sigma ** (1.0 - 2.0 * s.s) * gamma(s.s + 0.5)

    def gradient_energy(self) -> float:
        return math.sqrt(math.pi) / (2.0 * self.sigma)


class CutoffField:
    """
    h(x_n) x_n^(-a/2) A(max(y, eps) / x_n), with h = 1 on [0, delta] and a
    smooth fall to 0 over a transition of width delta / smoothness.
    """

    def __init__(self, engine, s: Order, epsilon: float, delta: float, smoothness: int = 1):
        if not 0 < epsilon < delta:
            raise ValueError(f"Need 0 < epsilon < delta, got {epsilon}, {delta}")
        self.engine = engine
        self.s = s
        self.epsilon = float(epsilon)
        self.delta = float(delta)
        self.transition = self.delta / smoothness
        self.profile = engine.build_profile(ProfileKind.A, s)

    @property
    def x_max(self) -> float:
        return self.delta + self.transition

    def cutoff(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        value, derivative = smooth_step((np.asarray(x, dtype=float) - self.delta) / self.transition)
        return value, derivative / self.transition

    def _profile(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        value, first = self.engine.profile_eval(self.profile, np.ravel(t))
        return np.reshape(value, np.shape(t)), np.reshape(first, np.shape(t))

    def scaled_above(self, x: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        x^(a/2 + 1) times (v, v_x, v_y) at y = t x >= eps, i.e. with the
        homogeneous factor of the gradient removed.
        """
        a = self.s.a
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        h, dh = self.cutoff(x)
        value, first = self._profile(t)
        scaled_x = dh * x * value + h * (-0.5 * a * value - t * first)
        return x * h * value, scaled_x, h * first

    def below(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(v, v_x) for y < eps, where v does not depend on y."""
        a = self.s.a
        x = np.asarray(x, dtype=float)
        h, dh = self.cutoff(x)
        tau = self.epsilon / x
        value, first = self._profile(tau)
        v = h * x ** (-a / 2) * value
        vx = x ** (-a / 2 - 1) * (dh * x * value + h * (-0.5 * a * value - tau * first))
        return v, vx
