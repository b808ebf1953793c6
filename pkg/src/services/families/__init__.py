"""
Families services package - test functions for the quotient, form and lemma checks.
"""

from .family_factory import FamilyFactory
from .fields import BumpField, CutoffField, GaussianField, PhiBumpField, smooth_step

__all__ = [
    "FamilyFactory",
    "BumpField",
    "CutoffField",
    "GaussianField",
    "PhiBumpField",
    "smooth_step",
]
