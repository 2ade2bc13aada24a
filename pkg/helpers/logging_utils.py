"""
Logging setup for the command line.

The engine only creates module loggers; this installs one RichHandler on
the root logger so every module reports through it.
"""

import logging
import os
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler


DEFAULT_LOG_LEVEL = os.getenv("CASIMIR_LOG_LEVEL", "WARNING")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def resolve_level(level: Optional[Union[str, int]] = None) -> int:
    if level is None:
        level = DEFAULT_LOG_LEVEL
    if isinstance(level, int):
        return level
    name = level.strip().upper()
    if name not in LOG_LEVELS:
        raise ValueError(f"unknown log level {level!r} (known: {', '.join(LOG_LEVELS)})")
    return getattr(logging, name)


def setup_logging(level: Optional[Union[str, int]] = None, console: Optional[Console] = None) -> logging.Logger:
    """
    Route all logging to stderr through rich. Calling it again replaces
    the handler instead of stacking a second one.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(resolve_level(level))
    return root
