"""Models package for the Hardy constant verification suite."""

from .order import Order, ConstantsRow
from .numerics import Interval, QuadratureKind, QuadratureRule, QuadratureResult, BvpSolution
from .profile import ProfileKind, PhiKind, ClosedFormCoeffs, Profile, ExtensionPoint, PhiValue
from .geometry import (
    QuarterPlaneGrid,
    SequenceParams,
    SpectralBasis,
    TestFamily,
    TestFunctionSpec,
)
from .reports import (
    QuotientReport,
    LemmaId,
    LemmaParams,
    LemmaReport,
    HsmReport,
    DirichletForms,
    DirichletHardyReport,
    FourierIdentityReport,
    ExtensionEnergyReport,
    CheckResult,
)
from .run_config import Command, OutputFormat, RunConfig

__all__ = [
    "Order",
    "ConstantsRow",
    "Interval",
    "QuadratureKind",
    "QuadratureRule",
    "QuadratureResult",
    "BvpSolution",
    "ProfileKind",
    "PhiKind",
    "ClosedFormCoeffs",
    "Profile",
    "ExtensionPoint",
    "PhiValue",
    "QuarterPlaneGrid",
    "SequenceParams",
    "SpectralBasis",
    "TestFamily",
    "TestFunctionSpec",
    "QuotientReport",
    "LemmaId",
    "LemmaParams",
    "LemmaReport",
    "HsmReport",
    "DirichletForms",
    "DirichletHardyReport",
    "FourierIdentityReport",
    "ExtensionEnergyReport",
    "CheckResult",
    "Command",
    "OutputFormat",
    "RunConfig",
]
