"""JSON logging for girg_lab runs.

Every record carries the logger name, and inside ``cell_context`` also the
experiment and seed of the cell being analysed, so interleaved output from
concurrent seeds can be told apart.
"""

import logging
import os
import sys
from contextlib import contextmanager
from typing import IO, Iterator, Optional

import psutil
import structlog
from structlog.contextvars import bound_contextvars

PROCESSORS = (
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.format_exc_info,
    structlog.processors.JSONRenderer(sort_keys=True),
)


def setup_logging(level: str = "INFO", stream: Optional[IO[str]] = None):
    """Send JSON records at ``level`` and above to ``stream`` (stdout by default).

    Safe to call again, e.g. once the config's own level is known.
    """
    structlog.configure(
        processors=list(PROCESSORS),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
    logging.basicConfig(format="%(message)s", stream=stream or sys.stdout, level=level.upper(), force=True)


def get_logger(name: str):
    return structlog.get_logger(name)


@contextmanager
def cell_context(experiment: str, seed: int) -> Iterator[None]:
    """Tag every record logged in this thread with the experiment and seed."""
    with bound_contextvars(experiment=experiment, seed=seed):
        yield


def get_memory_usage() -> float:
    """Resident memory of this process in MB."""
    return psutil.Process(os.getpid()).memory_info().rss / 1024 / 1024


def log_memory_usage(stage: str) -> float:
    memory_mb = get_memory_usage()
    get_logger(__name__).debug("memory_usage", stage=stage, memory_mb=round(memory_mb, 1))
    return memory_mb
