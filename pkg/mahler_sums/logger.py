"""Shared "mahler_sums" logger.

Everything logs to stderr so the report on stdout stays machine-readable.
A command run with --log-dir also appends to <log-dir>/run.log, which
starts each run with the resolved precision, seed and inputs so a report
can be traced back to the run that wrote it.
"""

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from mahler_sums import __version__
from mahler_sums.domain.entities import RunConfig


LOGGER_NAME = "mahler_sums"
LOG_FILE_NAME = "run.log"

logger = logging.getLogger(LOGGER_NAME)
logger.setLevel(logging.DEBUG)

_console_handler = logging.StreamHandler()
_console_handler.setLevel(logging.INFO)
_console_handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
logger.addHandler(_console_handler)


def set_console_level(level: int) -> None:
    """Change the stderr verbosity; run.log always records DEBUG."""
    _console_handler.setLevel(level)


@contextmanager
def run_log(log_dir: Optional[Path]) -> Iterator[Optional[Path]]:
    """Append this run to log_dir/run.log for the duration of the block.

    Yields the log path, or None when log_dir is None.
    """
    if log_dir is None:
        yield None
        return
    log_dir.mkdir(parents=True, exist_ok=True)
    log_path = log_dir / LOG_FILE_NAME
    handler = logging.FileHandler(log_path, mode="a", encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(
        logging.Formatter("%(asctime)s %(levelname)-7s %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
    )
    logger.addHandler(handler)
    logger.debug("--- mahler-sums %s ---", __version__)
    try:
        yield log_path
    finally:
        logger.removeHandler(handler)
        handler.close()


def log_run_config(config: RunConfig) -> None:
    """Record the settings a report was computed with."""
    logger.info(
        "%s: P = %d bits, g = %d guard bits, seed %d, format %s",
        config.command,
        config.bits,
        config.guard_bits,
        config.seed,
        config.output_format.value,
    )
    logger.debug("%s inputs: %s", config.command, json.dumps(config.inputs, sort_keys=True, default=str))
