"""
Profile services package - extension profiles A, B, T and the functions phi built from them.
"""

from .profile_engine import ProfileEngine

__all__ = ["ProfileEngine"]
