"""
Logging configuration for the verification suite.
"""
import logging
import sys
import time
from contextlib import contextmanager
from typing import Iterator, Optional, TextIO

import coloredlogs

LOG_FORMAT = '%(asctime)s | %(levelname)-8s | %(name)-20s | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(log_level: str = "INFO", stream: Optional[TextIO] = None) -> None:
    """Setup application logging on stream (stdout by default; the CLI passes stderr)."""
    stream = stream or sys.stdout
    level = getattr(logging, log_level.upper())

    # Configure root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Clear existing handlers
    root_logger.handlers.clear()

    if stream.isatty():
        coloredlogs.install(level=level, logger=root_logger, stream=stream,
                            fmt=LOG_FORMAT, datefmt=DATE_FORMAT)
    else:
        console_handler = logging.StreamHandler(stream)
        console_handler.setLevel(level)
        console_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
        root_logger.addHandler(console_handler)

    # Set specific logger levels
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("numexpr").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance."""
    return logging.getLogger(name)


class PerformanceLogger:
    """Simple performance logger."""

    def __init__(self):
        self.logger = logging.getLogger("performance")

    def log_check_execution(self, check_name: str, execution_time: float, **kwargs):
        """Log check execution metrics."""
        context = " | ".join(f"{k}={v}" for k, v in kwargs.items())
        self.logger.info(f"Check {check_name} executed in {execution_time:.3f}s"
                         + (f" | {context}" if context else ""))

    @contextmanager
    def timed(self, check_name: str, **kwargs) -> Iterator[None]:
        """Time a block and log it on exit."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.log_check_execution(check_name, time.perf_counter() - start, **kwargs)


# Global performance logger
performance_logger = PerformanceLogger()
