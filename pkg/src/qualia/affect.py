"""Personality, emotion dynamics, instinct signals and the attribute taxonomy."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Iterable, Mapping

EMOTIONS: tuple[str, ...] = ("fear", "joy", "hope", "anger", "sadness", "surprise")
TRAITS: tuple[str, ...] = ("openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism")
INSTINCTS: tuple[str, ...] = ("pain", "hunger", "fatigue")

# Tie-break order for select_challenge: earlier wins.
INSTINCT_PRIORITY = {kind: rank for rank, kind in enumerate(INSTINCTS)}


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def _check_unit(owner: object, names: Iterable[str]) -> None:
    for name in names:
        value = getattr(owner, name)
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{type(owner).__name__}.{name}={value} outside [0, 1]")


@dataclass(frozen=True)
class PersonalityProfile:
    openness: float = 0.5
    conscientiousness: float = 0.5
    extraversion: float = 0.5
    agreeableness: float = 0.5
    neuroticism: float = 0.5

    def __post_init__(self) -> None:
        _check_unit(self, TRAITS)


@dataclass(frozen=True)
class EmotionVector:
    fear: float = 0.0
    joy: float = 0.0
    hope: float = 0.0
    anger: float = 0.0
    sadness: float = 0.0
    surprise: float = 0.0

    def __post_init__(self) -> None:
        _check_unit(self, EMOTIONS)

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> EmotionVector:
        unknown = sorted(set(values) - set(EMOTIONS))
        if unknown:
            raise ValueError(f"unknown emotion(s): {', '.join(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in EMOTIONS}

    def get(self, name: str) -> float:
        return getattr(self, name)

    def max(self) -> float:
        return max(self.as_dict().values())

    def dominant(self) -> str | None:
        """Name of the strongest component (first in EMOTIONS on ties), None when all zero."""
        values = self.as_dict()
        best = max(EMOTIONS, key=lambda n: values[n])
        return best if values[best] > 0.0 else None

    def merge(self, other: EmotionVector) -> EmotionVector:
        """Component-wise max, used to combine stimuli arriving in one cycle."""
        return EmotionVector(*(max(a, b) for a, b in zip(self.as_tuple(), other.as_tuple())))

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


ZERO_EMOTION = EmotionVector()


@dataclass(frozen=True)
class InstinctSignal:
    kind: str
    level: float = 0.0
    threshold: float = 0.7
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in INSTINCTS:
            raise ValueError(f"unknown instinct {self.kind!r}")
        _check_unit(self, ("level", "threshold"))
        if self.weight < 0:
            raise ValueError("instinct weight must be >= 0")


@dataclass(frozen=True)
class MachineLoad:
    """Machine-side proxy for bodily drives: low battery feeds hunger, process load feeds fatigue."""

    battery: float = 1.0
    process_load: float = 0.0

    def __post_init__(self) -> None:
        _check_unit(self, ("battery", "process_load"))


IDLE_LOAD = MachineLoad()


@dataclass(frozen=True)
class Challenge:
    source: str
    severity: float

    def __post_init__(self) -> None:
        _check_unit(self, ("severity",))


def update_emotion(
    e: EmotionVector,
    stimulus: EmotionVector,
    p: PersonalityProfile,
    dt: float = 1.0,
    decay: float = 0.5,
) -> EmotionVector:
    """Relax each component toward its (personality-scaled) stimulus.

    ``e' = clamp01(decay**dt * e + (1 - decay**dt) * gain * stimulus)``, where the
    gain is ``1 + neuroticism`` for fear and 1 for everything else.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if not 0.0 < decay <= 1.0:
        raise ValueError(f"decay must be in (0, 1], got {decay}")
    keep = decay**dt
    out = {}
    for name in EMOTIONS:
        gain = 1.0 + p.neuroticism if name == "fear" else 1.0
        out[name] = clamp01(keep * e.get(name) + (1.0 - keep) * gain * stimulus.get(name))
    return EmotionVector(**out)


def tick_instincts(
    signals: Iterable[InstinctSignal],
    dt: float,
    load: MachineLoad = IDLE_LOAD,
    rates: Mapping[str, float] | None = None,
) -> tuple[InstinctSignal, ...]:
    """Grow hunger and fatigue linearly in ``dt``; pain only changes when injected."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    rates = rates or {}
    scale = {"hunger": 1.0 + (1.0 - load.battery), "fatigue": 1.0 + load.process_load}
    out = []
    for sig in signals:
        if sig.kind == "pain":
            out.append(sig)
            continue
        growth = rates.get(sig.kind, 0.0) * dt * scale[sig.kind]
        out.append(replace(sig, level=clamp01(sig.level + growth)))
    return tuple(out)


def select_challenge(signals: Iterable[InstinctSignal]) -> Challenge | None:
    live = [s for s in signals if s.level >= s.threshold]
    if not live:
        return None
    best = min(live, key=lambda s: (-s.weight * s.level, INSTINCT_PRIORITY[s.kind]))
    return Challenge(best.kind, best.level)


def expression_mode(e: EmotionVector, p: PersonalityProfile, base: float = 0.8, k: float = 0.2) -> str:
    """'involuntary' once the strongest emotion reaches a neuroticism-lowered threshold."""
    threshold = min(1.0, max(0.5, base - k * p.neuroticism))
    return "involuntary" if e.max() >= threshold else "voluntary"


class Implication(str, Enum):
    DECISION = "D"
    BEHAVIOUR = "B"
    MOTIVATION = "M"


@dataclass(frozen=True)
class AttributeProfile:
    attribute: str
    quality: bool
    state: bool
    instinct: bool
    implications: frozenset[Implication]


def _row(name: str, q: bool, s: bool, i: bool, imps: str) -> AttributeProfile:
    return AttributeProfile(name, q, s, i, frozenset(Implication(c) for c in imps))


ATTRIBUTE_TABLE: tuple[AttributeProfile, ...] = (
    _row("Personality", True, False, False, "DBM"),
    _row("Intelligence", True, False, False, "DB"),
    _row("Creativity", True, False, False, "DB"),
    _row("Knowledge", True, True, False, "DBM"),
    _row("Memory", True, True, False, "DBM"),
    _row("Extra-Sensory Perception", True, True, False, "D"),
    _row("Emotions", False, True, False, "DB"),
    _row("Expression", False, True, False, "B"),
    _row("Motor Control", False, True, False, "B"),
    _row("Pain", False, False, True, "MB"),
    _row("Hunger", False, False, True, "MB"),
    _row("Bodily functions", False, False, True, "MB"),
)
_BY_NAME = {row.attribute.casefold(): row for row in ATTRIBUTE_TABLE}
_BY_NAME["extra-sensory percep."] = _BY_NAME["extra-sensory perception"]


def implications_of(attribute: str) -> AttributeProfile:
    try:
        return _BY_NAME[attribute.strip().casefold()]
    except KeyError:
        raise ValueError(f"unknown attribute {attribute!r}") from None
