"""Fractional order and the row of sharp constants."""

from pydantic import BaseModel, Field, computed_field


class Order(BaseModel):
    """Fractional exponent s in (0, 1) with weight exponent a = 1 - 2s."""
    s: float = Field(..., gt=0.0, lt=1.0, description="Fractional order")

    class Config:
        frozen = True

    @computed_field  # type: ignore[misc]
    @property
    def a(self) -> float:
        return 1.0 - 2.0 * self.s

    @classmethod
    def from_a(cls, a: float) -> "Order":
        return cls(s=(1.0 - a) / 2.0)

    def __str__(self) -> str:
        return f"s={self.s:g}"


class ConstantsRow(BaseModel):
    """Closed-form sharp constants for one (n, s)."""
    s: float = Field(..., description="Fractional order")
    n: int = Field(..., ge=1, description="Space dimension")
    c_ns: float = Field(..., description="Normalization of the fractional Laplacian")
    dbar: float = Field(..., description="Trace Hardy constant, first extension")
    kbar: float = Field(..., description="Trace Hardy constant, second extension")
    d_spec: float = Field(..., description="Spectral Hardy constant")
    k_ns: float = Field(..., description="Dirichlet Hardy constant, unnormalized form")
    kappa_ns: float = Field(..., description="Censored Hardy constant (sign not asserted)")
    gamma_sq_over_pi: float = Field(..., description="Gamma(s+1/2)^2 / pi")
    ext_factor: float = Field(..., description="2^(1-2s) Gamma(1-s) / Gamma(s)")
    kernel_prefactor: float = Field(..., description="Complement kernel mass prefactor")
    extrapolated: bool = Field(default=False, description="True when n = 1")
