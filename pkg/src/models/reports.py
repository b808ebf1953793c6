"""Report types produced by the verification engines."""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class QuotientReport(BaseModel):
    """Rayleigh-type quotient measured against a target constant."""
    kind: str = Field(..., description="Check that produced the report")
    s: float
    params: Dict[str, Any] = Field(default_factory=dict)
    numerator: float
    denominator: float
    quotient: float
    target: float
    deficit: float
    tolerance_met: bool
    asserted: bool = Field(default=True, description="False when outside the proven parameter range")
    extra: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def build(
        cls,
        kind: str,
        s: float,
        numerator: float,
        denominator: float,
        target: float,
        tol: float = 1e-9,
        params: Optional[Dict[str, Any]] = None,
        asserted: bool = True,
        upper: Optional[float] = None,
        **extra: Any,
    ) -> "QuotientReport":
        """Form quotient and deficit; the check is quotient >= target - tol
        (and quotient <= upper when given)."""
        quotient = numerator / denominator
        met = quotient >= target - tol
        if upper is not None:
            met = met and quotient <= upper
        return cls(
            kind=kind, s=s, params=params or {}, numerator=numerator, denominator=denominator,
            quotient=quotient, target=target, deficit=quotient - target,
            tolerance_met=bool(met), asserted=asserted, extra=extra,
        )


class LemmaId(str, Enum):
    """Weighted Hardy lemmas with explicit constants."""
    L41 = "L41"
    L42 = "L42"
    L44 = "L44"
    L45 = "L45"
    L46 = "L46"
    L47 = "L47"


class LemmaParams(BaseModel):
    """Exponents of a weighted Hardy lemma."""
    A: float
    B: float
    Gamma_w: float = Field(default=0.0)
    lemma_id: LemmaId
    R_in: Optional[float] = Field(default=None, description="Inner radius, L42 and L46 only")

    class Config:
        use_enum_values = True

    @property
    def gamma_plus(self) -> float:
        return max(0.0, self.Gamma_w)


class LemmaReport(BaseModel):
    """Both sides of one lemma inequality."""
    lhs: float
    rhs: float
    constant_used: float
    margin: float
    params: LemmaParams
    extra: Dict[str, Any] = Field(default_factory=dict)


class HsmReport(BaseModel):
    """Hardy deficit of one test function with its Sobolev terms."""
    family: str
    s: float
    n: int
    energy: float
    hardy_term: float
    deficit: float
    sobolev_term: float
    bulk_sobolev_term: float
    implied_c: float
    implied_c_bulk: float
    remainder: Optional[float] = None
    identity_residual: Optional[float] = None
    params: Dict[str, Any] = Field(default_factory=dict)


class DirichletForms(BaseModel):
    """Full, censored and complement parts of the Dirichlet form."""
    full_form: float
    omega_omega: float
    omega_complement: float
    split_residual: float
    hardy_integral: float
    qmc_full_form: Optional[float] = Field(default=None, description="Sobol estimate of full_form, plane only")
    resolution_error: float = Field(default=0.0, description="Change of full_form under halved resolution")


class DirichletHardyReport(BaseModel):
    """Both normalizations of the Dirichlet Hardy quotient plus the censored one."""
    normalized: QuotientReport
    unnormalized: QuotientReport
    censored: QuotientReport
    ratio_residual: float


class FourierIdentityReport(BaseModel):
    """Fourier side and difference-quotient side of the energy identity."""
    fourier_side: float
    double_integral_side: float
    residual: float
    constant_chain_residual: float
    plancherel_ratio: float


class ExtensionEnergyReport(BaseModel):
    """Closed-form and quadrature extension energies of a spectral expansion."""
    extension_energy: float
    quadrature_energy: float
    identity_residual: float
    truncation_bound: float = 0.0


class CheckResult(BaseModel):
    """One line of a CLI run: a named check, its verdict and the underlying report."""
    check: str = Field(..., description="Check name, e.g. sequence_I")
    s: Optional[float] = None
    n: Optional[int] = None
    passed: bool
    asserted: bool = Field(default=True, description="Failures of unasserted checks do not fail the run")
    value: Optional[float] = Field(default=None, description="Headline number of the check")
    target: Optional[float] = None
    report: Dict[str, Any] = Field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.asserted and not self.passed

    def summary_line(self) -> str:
        status = "PASS" if self.passed else ("FAIL" if self.asserted else "INFO")
        where = " ".join(part for part in (
            f"s={self.s:g}" if self.s is not None else "",
            f"n={self.n}" if self.n is not None else "",
        ) if part)
        numbers = ""
        if self.value is not None:
            numbers = f" value={self.value:.12g}"
            if self.target is not None:
                numbers += f" target={self.target:.12g}"
        return f"[{status}] {self.check} {where}{numbers}".rstrip()
