"""Engine configuration: flat ``key=value`` lines with validated defaults."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from ._lines import fmt_float
from .affect import INSTINCTS, TRAITS, InstinctSignal, PersonalityProfile
from .errors import ConfigError, ParseError

# Challenge kind -> nominated states.  Config keys: challenge.<kind>.states=8
DEFAULT_NOMINATIONS = {"pain": (8,), "hunger": (2,), "fatigue": (3,)}


@dataclass(frozen=True)
class EngineConfig:
    personality: PersonalityProfile = field(default_factory=PersonalityProfile)
    emotion_decay: float = 0.5
    instinct_level: Mapping[str, float] = field(default_factory=lambda: {k: 0.0 for k in INSTINCTS})
    instinct_rate: Mapping[str, float] = field(default_factory=lambda: {"pain": 0.0, "hunger": 0.02, "fatigue": 0.03})
    instinct_threshold: Mapping[str, float] = field(default_factory=lambda: {k: 0.7 for k in INSTINCTS})
    instinct_weight: Mapping[str, float] = field(default_factory=lambda: {k: 1.0 for k in INSTINCTS})
    battery: float = 1.0
    process_load: float = 0.0
    memory_capacity: int = 7
    memory_lt_threshold: float = 0.6
    expression_base: float = 0.8
    expression_k: float = 0.2
    thought_steps: int = 8
    thought_alpha: float = 1.0
    thought_beta: float = 1.0
    revisit_factor: float = 0.5
    revisit_floor: float = 0.05
    nominations: Mapping[str, tuple[int, ...]] = field(default_factory=lambda: dict(DEFAULT_NOMINATIONS))

    def instincts(self) -> tuple[InstinctSignal, ...]:
        return tuple(
            InstinctSignal(k, self.instinct_level[k], self.instinct_threshold[k], self.instinct_weight[k])
            for k in INSTINCTS
        )

    def with_overrides(self, overrides: Mapping[str, str]) -> EngineConfig:
        return apply_overrides(self, overrides)

    def to_mapping(self) -> dict[str, str]:
        out = {f"personality.{t}": fmt_float(getattr(self.personality, t)) for t in TRAITS}
        out["emotion.decay"] = fmt_float(self.emotion_decay)
        for k in INSTINCTS:
            out[f"instinct.{k}.level"] = fmt_float(self.instinct_level[k])
            out[f"instinct.{k}.rate"] = fmt_float(self.instinct_rate[k])
            out[f"instinct.{k}.threshold"] = fmt_float(self.instinct_threshold[k])
            out[f"instinct.{k}.weight"] = fmt_float(self.instinct_weight[k])
            out[f"challenge.{k}.states"] = ",".join(map(str, self.nominations[k]))
        for key, (attr, _) in _SCALARS.items():
            out[key] = str(getattr(self, attr)) if attr in _INT_ATTRS else fmt_float(getattr(self, attr))
        return out


# key -> (attribute, (lo, hi)) for scalar settings
_SCALARS: dict[str, tuple[str, tuple[float, float]]] = {
    "machine.battery": ("battery", (0.0, 1.0)),
    "machine.load": ("process_load", (0.0, 1.0)),
    "memory.capacity": ("memory_capacity", (1, 10_000)),
    "memory.lt_threshold": ("memory_lt_threshold", (0.0, 1.0)),
    "expression.base": ("expression_base", (0.0, 1.0)),
    "expression.k": ("expression_k", (0.0, 1.0)),
    "thought.steps": ("thought_steps", (1, 100_000)),
    "thought.alpha": ("thought_alpha", (0.0, float("inf"))),
    "thought.beta": ("thought_beta", (0.0, float("inf"))),
    "goal.revisit_factor": ("revisit_factor", (0.0, 1.0)),
    "goal.revisit_floor": ("revisit_floor", (0.0, 1.0)),
}
_INT_ATTRS = {"memory_capacity", "thought_steps"}
_INSTINCT_FIELDS = {
    "level": ("instinct_level", (0.0, 1.0)),
    "rate": ("instinct_rate", (0.0, 1.0)),
    "threshold": ("instinct_threshold", (0.0, 1.0)),
    "weight": ("instinct_weight", (0.0, float("inf"))),
}


def apply_overrides(cfg: EngineConfig, overrides: Mapping[str, str]) -> EngineConfig:
    """Return a copy of ``cfg`` with ``overrides`` applied; all bad keys are reported together."""
    bad: list[str] = []
    changes: dict[str, object] = {}
    traits = {t: getattr(cfg.personality, t) for t in TRAITS}
    tables = {name: dict(getattr(cfg, name)) for name, _ in _INSTINCT_FIELDS.values()}
    nominations = dict(cfg.nominations)

    def number(key: str, text: str, lo: float, hi: float, integer: bool = False) -> float | int | None:
        try:
            value = int(text) if integer else float(text)
        except ValueError:
            bad.append(key)
            return None
        if not lo <= value <= hi:
            bad.append(key)
            return None
        return value

    for key, text in overrides.items():
        text = str(text).strip()
        parts = key.split(".")
        if parts[0] == "personality" and len(parts) == 2 and parts[1] in TRAITS:
            v = number(key, text, 0.0, 1.0)
            if v is not None:
                traits[parts[1]] = v
        elif key == "emotion.decay":
            v = number(key, text, 0.0, 1.0)
            if v is not None and v == 0.0:
                bad.append(key)
            elif v is not None:
                changes["emotion_decay"] = v
        elif parts[0] == "instinct" and len(parts) == 3 and parts[1] in INSTINCTS and parts[2] in _INSTINCT_FIELDS:
            attr, (lo, hi) = _INSTINCT_FIELDS[parts[2]]
            v = number(key, text, lo, hi)
            if v is not None:
                tables[attr][parts[1]] = v
        elif parts[0] == "challenge" and len(parts) == 3 and parts[1] in INSTINCTS and parts[2] == "states":
            try:
                ids = tuple(int(x) for x in text.split(","))
            except ValueError:
                bad.append(key)
                continue
            if not ids or any(not 1 <= i <= 10 for i in ids) or len(set(ids)) != len(ids):
                bad.append(key)
            else:
                nominations[parts[1]] = ids
        elif key in _SCALARS:
            attr, (lo, hi) = _SCALARS[key]
            v = number(key, text, lo, hi, integer=attr in _INT_ATTRS)
            if v is not None:
                changes[attr] = v
        else:
            bad.append(key)
    if bad:
        raise ConfigError(bad)
    return replace(
        cfg,
        personality=PersonalityProfile(**traits),
        nominations=nominations,
        **tables,
        **changes,
    )


def parse_config(text: str, base: EngineConfig | None = None) -> EngineConfig:
    """Parse ``key=value`` lines (``#`` comments) on top of ``base`` or the defaults."""
    overrides: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected key=value", lineno, 1)
        key, value = (s.strip() for s in line.split("=", 1))
        overrides[key] = value
    return apply_overrides(base or EngineConfig(), overrides)

