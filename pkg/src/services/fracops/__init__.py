"""
Fracops services package - spectral and Dirichlet fractional forms and their Hardy quotients.
"""

from .fracops_engine import FracopsEngine

__all__ = ["FracopsEngine"]
