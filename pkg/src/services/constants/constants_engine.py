"""
Constants Engine - closed-form sharp Hardy constants and the identities between them.
"""

import math
from typing import Dict, Iterable

import numpy as np
import pandas as pd

from ...models.order import ConstantsRow, Order
from ...numerics.special import gamma
from ..base_service import BaseService


class ConstantsEngine(BaseService):
    """
    Sharp-constant calculator.

    Responsibilities:
    - Gamma closed forms of every constant in a ConstantsRow
    - Residuals of the algebraic identities relating them
    - Tabulation over (n, s) grids
    """

    def __init__(self, settings=None):
        super().__init__("ConstantsEngine", settings)

    @staticmethod
    def _check(n: int) -> None:
        if n < 1:
            raise ValueError(f"Dimension must be a positive integer, got {n}")

    def c_ns(self, n: int, s: Order) -> float:
        """Normalization of the integral fractional Laplacian."""
        return (s.s * 2.0 ** (2 * s.s) * gamma((n + 2 * s.s) / 2.0)
                / (gamma(1.0 - s.s) * math.pi ** (n / 2.0)))

    def dbar(self, s: Order) -> float:
        return (2.0 * gamma(1.0 - s.s) * gamma((3.0 + 2 * s.s) / 4.0) ** 2
                / (gamma((3.0 - 2 * s.s) / 4.0) ** 2 * gamma(s.s)))

    def kbar(self, s: Order) -> float:
        return (2.0 ** (1.0 - 2 * s.s) * gamma(s.s + 0.5) ** 2 * gamma(1.0 - s.s)
                / (math.pi * gamma(s.s)))

    def d_spec(self, s: Order) -> float:
        return 2.0 ** (2 * s.s) * gamma((3.0 + 2 * s.s) / 4.0) ** 2 / gamma((3.0 - 2 * s.s) / 4.0) ** 2

    def k_ns(self, n: int, s: Order) -> float:
        return (2.0 ** (1.0 - 2 * s.s) * math.pi ** ((n - 2) / 2.0) * gamma(1.0 - s.s)
                * gamma(s.s + 0.5) ** 2 / (s.s * gamma((n + 2 * s.s) / 2.0)))

    def kappa_ns(self, n: int, s: Order) -> float:
        """Censored constant; negative for some s < 1/2."""
        bracket = 2.0 ** (1.0 - 2 * s.s) * gamma(1.0 - s.s) * gamma(s.s + 0.5) / math.sqrt(math.pi) - 1.0
        return (math.pi ** ((n - 1) / 2.0) * gamma(s.s + 0.5)
                / (s.s * gamma((n + 2 * s.s) / 2.0)) * bracket)

    def gamma_sq_over_pi(self, s: Order) -> float:
        return gamma(s.s + 0.5) ** 2 / math.pi

    def ext_factor(self, s: Order) -> float:
        """Extension energy factor 2^(1-2s) Gamma(1-s) / Gamma(s)."""
        return 2.0 ** (1.0 - 2 * s.s) * gamma(1.0 - s.s) / gamma(s.s)

    def kernel_prefactor(self, n: int, s: Order) -> float:
        """
        Mass of the kernel over the complementary half space:
        integral over xi_n < 0 of |x - xi|^(-n-2s) = prefactor * x_n^(-2s).
        """
        self._check(n)
        return (math.pi ** ((n - 1) / 2.0) * gamma((1.0 + 2 * s.s) / 2.0)
                / (2.0 * s.s * gamma((n + 2 * s.s) / 2.0)))

    def sharp_constants(self, n: int, s: Order) -> ConstantsRow:
        """
        Compute every sharp constant for dimension n and order s.

        Args:
            n: space dimension (n = 1 is flagged extrapolated)
            s: fractional order

        Returns:
            ConstantsRow of Gamma closed forms
        """
        self.log_operation_start("sharp_constants", n=n, s=s.s)
        try:
            self._check(n)
            row = ConstantsRow(
                s=s.s,
                n=n,
                c_ns=self.c_ns(n, s),
                dbar=self.dbar(s),
                kbar=self.kbar(s),
                d_spec=self.d_spec(s),
                k_ns=self.k_ns(n, s),
                kappa_ns=self.kappa_ns(n, s),
                gamma_sq_over_pi=self.gamma_sq_over_pi(s),
                ext_factor=self.ext_factor(s),
                kernel_prefactor=self.kernel_prefactor(n, s),
                extrapolated=n == 1,
            )
            self.log_operation_success("sharp_constants", f"dbar={row.dbar:.12g}")
            return row
        except Exception as e:
            self.log_operation_error("sharp_constants", e)
            raise

    def identity_residuals(self, n: int, s: Order) -> Dict[str, float]:
        """
        Relative residuals |x - y| / max(|x|, |y|, 1) of the constant identities.

        Returns:
            dbar_kbar_trig: dbar against 2 sin^2((2s+1)pi/4) kbar
            dspec_dbar_extension: d_spec * ext_factor against dbar
            kns_kbar: k_ns against kbar pi^(n/2) Gamma(s) / (s Gamma((n+2s)/2))
            kns_cns: k_ns against 2 Gamma^2(s+1/2) / (pi c_ns)
            kappa_split: k_ns - 2 kernel_prefactor against kappa_ns
        """
        self.log_operation_start("identity_residuals", n=n, s=s.s)
        row = self.sharp_constants(n, s)

        def rel(x: float, y: float) -> float:
            return abs(x - y) / max(abs(x), abs(y), 1.0)

        trig = 2.0 * math.sin((2 * s.s + 1.0) * math.pi / 4.0) ** 2
        kbar_link = math.pi ** (n / 2.0) * gamma(s.s) / (s.s * gamma((n + 2 * s.s) / 2.0))
        residuals = {
            "dbar_kbar_trig": rel(row.dbar, trig * row.kbar),
            "dspec_dbar_extension": rel(row.d_spec * row.ext_factor, row.dbar),
            "kns_kbar": rel(row.k_ns, row.kbar * kbar_link),
            "kns_cns": rel(row.k_ns, 2.0 * row.gamma_sq_over_pi / row.c_ns),
            "kappa_split": rel(row.k_ns - 2.0 * row.kernel_prefactor, row.kappa_ns),
        }
        self.log_operation_success("identity_residuals", f"max={max(residuals.values()):.3g}")
        return residuals

    def constants_table(self, n_values: Iterable[int], s_grid: Iterable[float]) -> pd.DataFrame:
        """ConstantsRows for every (n, s) as a DataFrame, one row per pair."""
        rows = [self.sharp_constants(n, Order(s=s)).model_dump()
                for n in n_values for s in s_grid]
        return pd.DataFrame(rows)

    def kernel_mass_quadrature(self, n: int, s: Order, x_n: float = 1.0) -> float:
        """
        Independent check of kernel_prefactor: integrates |x - xi|^(-n-2s) over
        the lower half space at height x_n, by reducing to the distance r to the
        boundary plane (the tangential integral is a Beta function).
        """
        from ...models.numerics import Interval
        from ...numerics.quadrature import integrate

        self._check(n)
        if n == 1:
            tangential = 1.0
        else:
            m = n - 1
            tangential = (math.pi ** (m / 2.0) * gamma((n + 2 * s.s - m) / 2.0)
                          / gamma((n + 2 * s.s) / 2.0))
        # integral over depth of (x_n + depth)^(-1-2s)
        depth = integrate(lambda d: (x_n + d) ** (-1.0 - 2 * s.s), Interval(lo=0.0, hi=np.inf))
        return tangential * depth
