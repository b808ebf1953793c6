"""
Error types and error handling utilities for verification checks.
"""

import logging
from functools import wraps
from typing import Any, Callable, Dict, Optional


class HardyVerifyError(Exception):
    """Base class for all numerical failures raised by the suite."""


class PoleError(HardyVerifyError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class DomainError(HardyVerifyError, ValueError):
    """Argument outside the domain of an operation."""


class InvalidParamsError(HardyVerifyError, ValueError):
    """Parameters violate the validity region of a lemma."""


class ParameterDegeneracyError(HardyVerifyError):
    """Inversion formula hit a Gamma pole because alpha - beta is an integer."""


class ConvergenceError(HardyVerifyError):
    """Quadrature or collocation did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: Optional[float] = None, error: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ExtrapolationError(HardyVerifyError):
    """Richardson table is not monotone."""


class SingularMassError(HardyVerifyError):
    """Mass matrix of a generalized eigenproblem vanishes."""


class DivergentIntegralError(HardyVerifyError):
    """Weight integral diverges at the given parameters."""


def create_error_response(check: str, error: Exception, **context: Any) -> Dict[str, Any]:
    """Create the report row of a check that failed with an exception."""
    return {
        "kind": check,
        "passed": False,
        "error_type": type(error).__name__,
        "error": str(error),
        **context,
    }


def safe_execute(
    operation: Callable[..., Any],
    *args,
    fallback_result: Any = None,
    logger: Optional[logging.Logger] = None,
    operation_name: str = "operation",
    **kwargs
) -> Any:
    """
    Safely execute a check with error handling.

    Args:
        operation: The function to execute
        *args: Positional arguments for the operation
        fallback_result: Value to return if operation fails; callables are
            invoked with the exception
        logger: Logger instance for error reporting
        operation_name: Name for logging purposes
        **kwargs: Keyword arguments for the operation

    Returns:
        Operation result or fallback_result if it fails
    """
    try:
        return operation(*args, **kwargs)
    except HardyVerifyError as e:
        if logger:
            logger.error(f"Error in {operation_name}: {e}")
        return fallback_result(e) if callable(fallback_result) else fallback_result


def logged_operation(operation: str):
    """
    Decorator for service methods: logs start, success and failure through
    the BaseService helpers and re-raises.
    """
    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(func)
        def wrapper(self, *args, **kwargs):
            self.log_operation_start(operation, **{k: v for k, v in kwargs.items() if _is_scalar(v)})
            try:
                result = func(self, *args, **kwargs)
            except Exception as e:
                self.log_operation_error(operation, e)
                raise
            self.log_operation_success(operation, _summary(result))
            return result
        return wrapper
    return decorator


def _is_scalar(value: Any) -> bool:
    return isinstance(value, (int, float, str, bool))


def _summary(result: Any) -> str:
    if isinstance(result, float):
        return f"value={result:.12g}"
    quotient = getattr(result, "quotient", None)
    if quotient is not None:
        return f"quotient={quotient:.12g}"
    return f"result_type={type(result).__name__}"
