"""
Rayleigh services package - extremizing sequences, discrete bounds and HSM deficits.
"""

from .rayleigh_engine import RayleighEngine

__all__ = ["RayleighEngine"]
