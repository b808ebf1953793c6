"""Special functions, singular quadrature, collocation and eigensolvers."""

from .special import gamma, rgamma, bessel_k, bessel_k_checked, bessel_k_integral
from .hypergeometric import gauss_2f1, gauss_2f1_derivative, hyp2f1_series, hyp2f1_inversion
from .quadrature import (
    integrate,
    integrate_with_estimate,
    quadrature_nodes,
    build_rule,
    gauss_legendre,
    integrate_batch,
    integrate_2d,
)
from .bvp import chebdiff, solve_bvp, evaluate_solution, tau_of_t, truncation_half_width
from .eigen import min_generalized_eig
from .extrapolation import richardson_limit

__all__ = [
    "gamma",
    "rgamma",
    "bessel_k",
    "bessel_k_checked",
    "bessel_k_integral",
    "gauss_2f1",
    "gauss_2f1_derivative",
    "hyp2f1_series",
    "hyp2f1_inversion",
    "integrate",
    "integrate_with_estimate",
    "quadrature_nodes",
    "build_rule",
    "gauss_legendre",
    "integrate_batch",
    "integrate_2d",
    "chebdiff",
    "solve_bvp",
    "evaluate_solution",
    "tau_of_t",
    "truncation_half_width",
    "min_generalized_eig",
    "richardson_limit",
]
