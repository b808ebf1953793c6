"""Data types shared by the numerical kernels."""

import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class QuadratureKind(str, Enum):
    """Quadrature families."""
    TANH_SINH = "tanh_sinh"
    GAUSS_JACOBI = "gauss_jacobi"


class Interval(BaseModel):
    """Integration domain with declared endpoint behaviour."""
    lo: float = Field(..., description="Lower limit, may be -inf")
    hi: float = Field(..., description="Upper limit, may be +inf")
    lo_algebraic_exponent: Optional[float] = Field(default=None, description="f ~ (x-lo)^e near lo")
    hi_algebraic_exponent: Optional[float] = Field(default=None, description="f ~ (hi-x)^e near hi")
    hi_decay: Optional[float] = Field(default=None, description="f ~ x^(-hi_decay) at +inf")

    class Config:
        frozen = True

    @model_validator(mode="after")
    def _check(self) -> "Interval":
        if not self.lo < self.hi:
            raise ValueError(f"Interval needs lo < hi, got [{self.lo}, {self.hi}]")
        for name in ("lo_algebraic_exponent", "hi_algebraic_exponent"):
            value = getattr(self, name)
            if value is not None and value <= -1.0:
                raise ValueError(f"{name} must exceed -1, got {value}")
        return self

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


class QuadratureRule(BaseModel):
    """Abscissae and weights of one quadrature level on one interval."""
    kind: QuadratureKind = Field(default=QuadratureKind.TANH_SINH)
    level: int = Field(default=10, ge=1)
    abscissae: List[float] = Field(default_factory=list)
    weights: List[float] = Field(default_factory=list)

    class Config:
        use_enum_values = True


class QuadratureResult(BaseModel):
    """Integral value with its level-doubling error estimate."""
    value: float
    error: float
    level: int


class BvpSolution(BaseModel):
    """Collocated solution of a two-point problem on the compactified coordinate."""
    nodes: List[float] = Field(..., description="Compactified coordinate in [0, 1]")
    values: List[float] = Field(..., description="Solution at the nodes")
    derivatives: List[float] = Field(..., description="Flux p(x) y'(x) at the nodes")
    residual_norm: float = Field(..., description="Max collocation residual at interior nodes")
    tail_estimate: float = Field(default=0.0, description="Largest trailing Chebyshev coefficient")
    truncation: float = Field(default=0.0, description="Half-width U of the computational variable")
