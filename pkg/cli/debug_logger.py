"""
debug_logger.py

Coloured `[LEVEL] HH:MM:SS message` lines on standard error for the
command line. Library modules log through the standard logging tree;
this module only formats and installs the handler.
"""

import logging
import sys
import time
from typing import Optional, TextIO

COLOURS = {
    'DEBUG': '\033[90m',
    'INFO': '\033[94m',
    'WARN': '\033[93m',
    'ERROR': '\033[91m',
    'ENDC': '\033[0m',
}

LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARN': logging.WARNING,
    'ERROR': logging.ERROR,
}


def level_name(record: logging.LogRecord) -> str:
    # WARNING is spelt WARN in the output
    return 'WARN' if record.levelno == logging.WARNING else record.levelname


class ColourFormatter(logging.Formatter):
    """Formats records as `[LEVEL] HH:MM:SS message`, optionally coloured."""

    def __init__(self, colour: bool = True) -> None:
        super().__init__()
        self.colour = colour

    def format(self, record: logging.LogRecord) -> str:
        level = level_name(record)
        ts = time.strftime('%H:%M:%S', time.localtime(record.created))
        line = f"[{level}] {ts} {record.getMessage()}"
        colour = COLOURS.get(level, '') if self.colour else ''
        return f"{colour}{line}{COLOURS['ENDC']}" if colour else line


def configure(level: str = 'WARN', stream: Optional[TextIO] = None) -> logging.Handler:
    """
    Installs a single coloured handler on the root logger.

    Colour is used only when the stream is a terminal. Calling again
    replaces the previous handler.
    """
    stream = stream if stream is not None else sys.stderr
    handler = logging.StreamHandler(stream)
    isatty = getattr(stream, 'isatty', None)
    handler.setFormatter(ColourFormatter(colour=bool(isatty and isatty())))
    root = logging.getLogger()
    for old in [h for h in root.handlers if isinstance(h.formatter, ColourFormatter)]:
        root.removeHandler(old)
    root.addHandler(handler)
    root.setLevel(LEVELS.get(level.upper(), logging.WARNING))
    return handler
