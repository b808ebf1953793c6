"""
Lemmas services package - weighted L1 and L2 Hardy lemma checks.
"""

from .lemma_engine import LemmaEngine, log_weight

__all__ = ["LemmaEngine", "log_weight"]
