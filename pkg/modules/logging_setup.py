"""
Diagnostic logging for the CLI
Level-prefixed messages on stderr, coloured unless no-colour is requested
"""

import logging
import sys

LEVEL_COLORS = {
    "DEBUG": "\033[36m",
    "INFO": "\033[32m",
    "WARNING": "\033[33m",
    "ERROR": "\033[31m",
    "CRITICAL": "\033[35m",
}
RESET = "\033[0m"


class LevelFormatter(logging.Formatter):
    def __init__(self, color: bool):
        super().__init__("%(levelname)s %(name)s: %(message)s")
        self.color = color

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        if not self.color:
            return text
        code = LEVEL_COLORS.get(record.levelname, "")
        return text.replace(record.levelname, f"{code}{record.levelname}{RESET}", 1)


def configure_logging(level: str = "INFO", color: bool = True) -> None:
    """Route all diagnostics to stderr. Safe to call more than once."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(LevelFormatter(color and sys.stderr.isatty()))
    logging.basicConfig(level=getattr(logging, level, logging.INFO), handlers=[handler], force=True)
