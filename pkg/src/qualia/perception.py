"""Symbolic percepts and noisy-or fusion across modalities."""

from __future__ import annotations

import shlex
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._lines import column_of, fmt_float
from .errors import AmbiguousObservationError, ParseError
from .states import MODALITIES


@dataclass(frozen=True)
class Percept:
    modality: str
    label: str
    confidence: float
    tick: int = 0

    def __post_init__(self) -> None:
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def line(self) -> str:
        return f"percept {self.modality} {self.label} conf {fmt_float(self.confidence)}"


@dataclass(frozen=True)
class FusedObservation:
    label: str
    confidence: float
    contributing: frozenset[str]


def fuse(percepts: Iterable[Percept]) -> FusedObservation:
    """Pick the label with the highest noisy-or confidence over agreeing percepts."""
    percepts = list(percepts)
    if not percepts:
        raise ValueError("fuse needs at least one percept")
    if len({p.tick for p in percepts}) > 1:
        raise ValueError("percepts to fuse must share a tick")
    # exact rationals: the result is then order-free and monotone in each input
    miss: dict[str, Fraction] = defaultdict(lambda: Fraction(1))
    modalities: dict[str, set[str]] = defaultdict(set)
    for p in percepts:
        miss[p.label] *= 1 - Fraction(p.confidence)
        modalities[p.label].add(p.modality)
    combined = {label: float(1 - m) for label, m in miss.items()}
    best = max(combined.values())
    winners = sorted(label for label, c in combined.items() if c == best)
    if len(winners) > 1:
        raise AmbiguousObservationError(winners, best)
    label = winners[0]
    return FusedObservation(label, combined[label], frozenset(modalities[label]))


def ingest_percept(raw_line: str, tick: int = 0, lineno: int = 0) -> Percept:
    """Parse ``percept <modality> <label> conf <c>``."""
    try:
        tokens = shlex.split(raw_line, comments=True)
    except ValueError as exc:
        raise ParseError(str(exc), lineno, 1) from None
    if len(tokens) != 5 or tokens[0] != "percept" or tokens[3] != "conf":
        raise ParseError("expected: percept <modality> <label> conf <0..1>", lineno, 1)
    _, modality, label, _, conf_text = tokens
    if modality not in MODALITIES:
        raise ParseError(f"unknown modality {modality!r}", lineno, column_of(raw_line, modality))
    try:
        conf = float(conf_text)
    except ValueError:
        raise ParseError(f"bad confidence {conf_text!r}", lineno, column_of(raw_line, conf_text)) from None
    if not 0.0 <= conf <= 1.0:
        raise ParseError(f"confidence {conf} outside [0, 1]", lineno, column_of(raw_line, conf_text))
    return Percept(modality, label, conf, tick)
