"""
Verification services package - acceptance checks behind the command line.
"""

from .verification_service import VerificationService, quotient_check

__all__ = ["VerificationService", "quotient_check"]
