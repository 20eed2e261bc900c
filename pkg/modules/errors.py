"""
BMW Chart Errors
Exception hierarchy shared by the word, movie, chart and move modules
"""

from typing import Optional


class BMWError(Exception):
    """Base class for every failure raised by the toolkit."""


class WordError(BMWError):
    pass


class WordParseError(WordError):
    pass


class DegreeError(WordError):
    pass


class RuleError(BMWError):
    """A rule could not be applied to a word."""

    def __init__(self, message: str, tag: Optional[str] = None, position: Optional[int] = None):
        super().__init__(message)
        self.tag = tag
        self.position = position


class MoveScriptError(BMWError):
    def __init__(self, step: int, cause: RuleError):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.cause = cause


class EventError(BMWError):
    """An event does not fit its slice; `clause` names the vertex type."""

    def __init__(self, message: str, clause: str = "", index: Optional[int] = None):
        prefix = f"event {index} " if index is not None else ""
        clause_text = f"[{clause}] " if clause else ""
        super().__init__(f"{prefix}{clause_text}{message}")
        self.clause = clause
        self.index = index
        self.detail = message


class MovieError(BMWError):
    pass


class ChartGraphError(BMWError):
    pass


class SweepError(ChartGraphError):
    pass


class MoveError(BMWError):
    pass


class FormatError(BMWError):
    pass
