"""Core configuration, logging and helpers."""

from .config import Settings, settings, get_settings, configure
from .logging import setup_logging, get_logger, performance_logger
from .helpers import parse_float_list, log_grid, relative_difference, format_real

__all__ = [
    "Settings",
    "settings",
    "get_settings",
    "configure",
    "setup_logging",
    "get_logger",
    "performance_logger",
    "parse_float_list",
    "log_grid",
    "relative_difference",
    "format_real",
]
