"""Events injected into the scheduler at stage boundaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from ._lines import fmt_float
from .affect import EMOTIONS, INSTINCTS, EmotionVector
from .perception import Percept


@dataclass(frozen=True)
class PerceptEvent:
    percept: Percept

    def line(self) -> str:
        return self.percept.line()


@dataclass(frozen=True)
class StimulusEvent:
    values: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        for name, v in self.values:
            if name not in EMOTIONS:
                raise ValueError(f"unknown emotion {name!r}")
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"stimulus {name}={v} outside [0, 1]")

    @classmethod
    def of(cls, values: Mapping[str, float]) -> StimulusEvent:
        return cls(tuple(values.items()))

    def vector(self) -> EmotionVector:
        return EmotionVector.from_mapping(dict(self.values))

    def line(self) -> str:
        return "stimulus " + ",".join(f"{k}={fmt_float(v)}" for k, v in self.values)


@dataclass(frozen=True)
class InstinctEvent:
    kind: str
    level: float

    def __post_init__(self) -> None:
        if self.kind not in INSTINCTS:
            raise ValueError(f"unknown instinct {self.kind!r}")
        if not 0.0 <= self.level <= 1.0:
            raise ValueError(f"instinct level {self.level} outside [0, 1]")

    def line(self) -> str:
        return f"instinct {self.kind}={fmt_float(self.level)}"


@dataclass(frozen=True)
class TerminalEvent:
    result: str  # success | failure

    def __post_init__(self) -> None:
        if self.result not in ("success", "failure"):
            raise ValueError(f"terminal result must be success or failure, got {self.result!r}")

    def line(self) -> str:
        return f"terminal {self.result}"


Event = Union[PerceptEvent, StimulusEvent, InstinctEvent, TerminalEvent]
