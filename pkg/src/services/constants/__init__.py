"""
Constants services package - closed-form sharp constants and their identities.
"""

from .constants_engine import ConstantsEngine

__all__ = [
    "ConstantsEngine",
]
