"""Utility subpackage."""

from .log import cell_context, get_logger, log_memory_usage, setup_logging

__all__ = [
    "cell_context",
    "get_logger",
    "log_memory_usage",
    "setup_logging",
]
