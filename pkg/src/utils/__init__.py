"""
Utility functions for the verification suite.
"""

from .error_handling import (
    HardyVerifyError,
    PoleError,
    DomainError,
    InvalidParamsError,
    ParameterDegeneracyError,
    ConvergenceError,
    ExtrapolationError,
    SingularMassError,
    DivergentIntegralError,
    safe_execute,
    create_error_response,
    logged_operation,
)
from .formatting import (
    REPORT_VERSION,
    to_plain,
    flatten,
    reports_to_json,
    reports_to_frame,
    reports_to_csv,
    write_output,
)

__all__ = [
    "HardyVerifyError",
    "PoleError",
    "DomainError",
    "InvalidParamsError",
    "ParameterDegeneracyError",
    "ConvergenceError",
    "ExtrapolationError",
    "SingularMassError",
    "DivergentIntegralError",
    "safe_execute",
    "create_error_response",
    "logged_operation",
    "REPORT_VERSION",
    "to_plain",
    "flatten",
    "reports_to_json",
    "reports_to_frame",
    "reports_to_csv",
    "write_output",
]
