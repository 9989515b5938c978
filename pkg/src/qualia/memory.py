"""Short-term and long-term episodic memory."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .affect import EmotionVector
from .states import StateSeq


@dataclass(frozen=True)
class MemoryRecord:
    id: str
    event: str
    emotion_snapshot: EmotionVector
    states: StateSeq
    salience: float
    tick: int
    long_term: bool = False
    origin: str = "stage"  # stage | challenge | terminal
    goal_id: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.salience <= 1.0:
            raise ValueError(f"salience {self.salience} outside [0, 1]")
        if self.tick < 0:
            raise ValueError("tick must be >= 0")

    def log_line(self) -> str:
        stores = "S,L" if self.long_term else "S"
        states = ",".join(map(str, self.states))
        return f"{self.tick}|{self.salience:.3f}|{stores}|{states}|{self.event}"


@dataclass
class MemoryStores:
    capacity: int = 7
    lt_threshold: float = 0.6
    short_term: deque[MemoryRecord] = field(default_factory=deque)
    long_term: list[MemoryRecord] = field(default_factory=list)
    log: list[MemoryRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("short-term capacity must be >= 1")
        self.short_term = deque(self.short_term, maxlen=self.capacity)

    def __len__(self) -> int:
        return len(self.short_term) + len(self.long_term)

    def snapshot(self) -> MemoryStores:
        return MemoryStores(self.capacity, self.lt_threshold, deque(self.short_term), list(self.long_term), list(self.log))


def record_experience(
    stores: MemoryStores,
    event: str,
    emotion: EmotionVector,
    states: StateSeq,
    tick: int,
    *,
    origin: str = "stage",
    goal_id: str = "",
) -> MemoryStores:
    """Write one experience; it reaches long-term memory only if emotionally salient."""
    salience = emotion.max()
    record = MemoryRecord(
        id=f"m{len(stores.log) + 1}",
        event=event,
        emotion_snapshot=emotion,
        states=tuple(states),
        salience=salience,
        tick=tick,
        long_term=salience >= stores.lt_threshold,
        origin=origin,
        goal_id=goal_id,
    )
    stores.short_term.append(record)  # deque(maxlen) evicts the oldest
    if record.long_term:
        stores.long_term.append(record)
    stores.log.append(record)
    return stores


def _tokens(text: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", text.casefold())


def recall(stores: MemoryStores, query: str, limit: int = 5) -> list[MemoryRecord]:
    """Records whose event text contains every query token, strongest and newest first."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    wanted = _tokens(query)
    seen: set[str] = set()
    hits: list[MemoryRecord] = []
    for rec in (*stores.long_term, *stores.short_term):
        if rec.id in seen:
            continue
        words = set(_tokens(rec.event))
        if all(tok in words for tok in wanted):
            seen.add(rec.id)
            hits.append(rec)
    hits.sort(key=lambda r: (-r.salience, -r.tick))
    return hits[:limit]
