"""
Base class shared by the verification engines.
"""

from abc import ABC
from typing import Optional

from ..core.config import Settings, get_settings
from ..core.logging import get_logger


class BaseService(ABC):
    """
    Common plumbing for every engine.

    - Named logger (services.<name>)
    - Settings, either injected or the process-wide instance
    - Tolerance lookup with explicit overrides
    - Debug-level operation tracing
    """

    def __init__(self, service_name: Optional[str] = None, settings: Optional[Settings] = None):
        """
        Args:
            service_name: logger suffix; the class name when omitted
            settings: tolerances and grid sizes; the global settings when omitted
        """
        self.service_name = service_name or self.__class__.__name__
        self.logger = get_logger(f"services.{self.service_name.lower()}")
        self.settings = settings or get_settings()
        self.logger.debug(f"{self.service_name} ready | quad_tol={self.settings.quad_tol:g}")

    def tolerance(self, override: Optional[float] = None, field: str = "quad_tol", floor: float = 0.0) -> float:
        """Explicit tolerance if given, else the settings field, never below floor."""
        value = getattr(self.settings, field) if override is None else override
        return max(float(value), floor)

    def log_operation_start(self, operation: str, **kwargs) -> None:
        context = " | ".join(f"{k}={v}" for k, v in kwargs.items())
        self.logger.debug(f"{operation} started" + (f" | {context}" if context else ""))

    def log_operation_success(self, operation: str, result_info: str = "") -> None:
        self.logger.debug(f"{operation} done" + (f" | {result_info}" if result_info else ""))

    def log_operation_error(self, operation: str, error: Exception) -> None:
        """Errors are logged with their type so report rows can be matched to log lines."""
        self.logger.error(f"{operation} failed: {type(error).__name__}: {error}")
