"""
Utility functions for the commutator equation toolkit.
"""

from __future__ import annotations

import logging

from .exceptions import InputValidationError


def setup_logging(*, verbosity: int = 0, log_file: str | None = None) -> None:
    """Configure logging for a CLI run.

    Args:
        verbosity: Console log level. 0 = WARNING+ only (default), 1 = INFO+, 2+ = DEBUG+.
        log_file: Optional path of a log file that always receives DEBUG+ regardless of verbosity.
    """
    if verbosity >= 2:
        console_level = logging.DEBUG
    elif verbosity == 1:
        console_level = logging.INFO
    else:
        console_level = logging.WARNING

    # Console handler writes to stderr; stdout is reserved for the JSON/CSV payload
    console_handler = logging.StreamHandler()
    console_handler.setLevel(console_level)
    console_handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    handlers: list[logging.Handler] = [console_handler]

    if log_file is not None:
        try:
            file_handler = logging.FileHandler(log_file, mode="a")
        except OSError as e:
            msg = f"Cannot open log file {log_file}: {e}"
            raise InputValidationError(msg) from e
        file_handler.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s"))
        handlers.append(file_handler)

    logging.basicConfig(
        level=logging.DEBUG,
        handlers=handlers,
        force=True,
    )
