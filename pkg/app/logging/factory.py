"""
Logging Factory

Logger creation and the two context tags stamped on every line: the service
(cli, harness, worker, ppo, oco) and the run (experiment/variant/seed-N).
"""

import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from pathlib import Path

from app.logging.config import LogConfig, get_log_config

_run_tag: ContextVar[str] = ContextVar("run_tag", default="-")
_service_tag: ContextVar[str] = ContextVar("service_tag", default="main")
_active_config: LogConfig | None = None


class RunFormatter(logging.Formatter):
    """Formatter that fills %(service_tag)s and %(run_tag)s from the context."""

    def format(self, record):
        record.service_tag = f"[{_service_tag.get()}]"
        record.run_tag = f"[run:{_run_tag.get()}]"
        return super().format(record)


def set_service_tag(service: str):
    _service_tag.set(service)


def get_service_tag() -> str:
    return _service_tag.get()


def get_run_tag() -> str:
    return _run_tag.get()


def get_active_log_config() -> LogConfig:
    """Config the handlers were built from, or the environment default before setup."""
    return _active_config or get_log_config()


@contextmanager
def log_scope(service: str | None = None, run: str | None = None) -> Iterator[None]:
    """Tag every line logged inside the block; the previous tags come back on exit.

    Args:
        service: Service tag for the block, unchanged if None
        run: Run tag for the block, unchanged if None
    """
    tokens = []
    if service is not None:
        tokens.append((_service_tag, _service_tag.set(service)))
    if run is not None:
        tokens.append((_run_tag, _run_tag.set(str(run))))
    try:
        yield
    finally:
        for var, token in reversed(tokens):
            var.reset(token)


def setup_service_logger(service_name: str, config: LogConfig | None = None) -> None:
    """
    Attach handlers to the project logger and set the service tag.

    Call once per process: the CLI at startup, every pool worker in its
    initializer. Later calls only change the service tag.

    Args:
        service_name: Service tag for this process (e.g. "cli", "worker")
        config: Log configuration; defaults to get_log_config()
    """
    global _active_config
    if config is None:
        config = get_log_config()

    logger = logging.getLogger(config.name)
    if logger.handlers:
        set_service_tag(service_name)
        return

    logger.setLevel(getattr(logging, config.level.upper()))
    formatter = RunFormatter(config.format, datefmt=config.date_format)

    if config.file_output:
        log_path = Path(config.file_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if config.console_output:
        stream = sys.stdout if config.console_stream == "stdout" else sys.stderr
        stream_handler = logging.StreamHandler(stream)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    logger.propagate = config.propagate
    _active_config = config
    set_service_tag(service_name)
    logger.info(f"Logger initialized for service: {service_name}")


# ================================ BASE LOGGER ================================
# Handlers are attached by setup_service_logger(); until then records propagate

logging.Formatter.converter = time.gmtime

config = get_log_config()
logger = logging.getLogger(config.name)
