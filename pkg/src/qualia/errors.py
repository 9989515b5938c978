"""Exception hierarchy for the simulator."""

from __future__ import annotations


class QualiaError(Exception):
    """Base class for every error raised by this package."""


class InvalidStateError(QualiaError, ValueError):
    pass


class UnknownActionError(QualiaError, KeyError):
    def __str__(self) -> str:  # KeyError repr-quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class PlanError(QualiaError):
    pass


class ConfigError(QualiaError, ValueError):
    def __init__(self, keys: list[str], detail: str = ""):
        self.keys = list(keys)
        msg = "invalid configuration keys: " + ", ".join(self.keys)
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class LifecycleError(QualiaError, RuntimeError):
    pass


class AmbiguousObservationError(QualiaError, ValueError):
    def __init__(self, labels: list[str], confidence: float):
        self.labels = labels
        self.confidence = confidence
        super().__init__(f"ambiguous observation: {', '.join(labels)} tie at {confidence:.4f}")


class ParseError(QualiaError, ValueError):
    """Syntax or semantic error in a line-oriented input file."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
