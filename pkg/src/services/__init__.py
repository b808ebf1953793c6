"""Services package for the Hardy constant verification suite."""

from .base_service import BaseService
from .constants import ConstantsEngine
from .families import FamilyFactory
from .profiles import ProfileEngine
from .rayleigh import RayleighEngine
from .fracops import FracopsEngine
from .lemmas import LemmaEngine
from .verification import VerificationService


__all__ = [
    "BaseService",
    "ConstantsEngine",
    "FamilyFactory",
    "ProfileEngine",
    "RayleighEngine",
    "FracopsEngine",
    "LemmaEngine",
    "VerificationService",
]
