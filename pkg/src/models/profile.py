"""Extension profiles and points of the extended half space."""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field, PrivateAttr

from .numerics import BvpSolution
from .order import Order


class ProfileKind(str, Enum):
    """The three one-dimensional extension profiles."""
    A = "A"
    B = "B"
    T = "T"


class PhiKind(str, Enum):
    """Extension functions built from profiles A and B."""
    I = "I"
    II = "II"


class ClosedFormCoeffs(BaseModel):
    """Coefficients of the hypergeometric representation of A."""
    C1: float = Field(default=1.0)
    C2_modulus: float = Field(..., description="Second coefficient with its phase folded in (negative)")
    far_coefficient: float = Field(..., description="Coefficient of the t > 1 representation")


class Profile(BaseModel):
    """Evaluable solution of one of the profile boundary-value problems."""
    kind: ProfileKind
    order: Order
    closed_form_coeffs: Optional[ClosedFormCoeffs] = None
    bvp: Optional[BvpSolution] = None
    limit_constant: float = Field(default=0.0)
    limit_error: float = Field(default=0.0)
    energy: float = Field(default=0.0)
    energy_error: float = Field(default=0.0)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    # Interpolators and other evaluation state
    _cache: Dict[str, Any] = PrivateAttr(default_factory=dict)


class ExtensionPoint(BaseModel):
    """Point (x_n or signed distance, y) of the extended half plane."""
    x_n_or_signed_d: float
    y: float = Field(..., gt=0.0)


class PhiValue(BaseModel):
    """Value and gradient of an extension function."""
    value: float
    d_component: float
    y_component: float
