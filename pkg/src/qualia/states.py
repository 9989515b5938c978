"""Consciousness-state registry, action descriptors and the state-derivation rule table.

The ten numbered states and the verb rules are data (``data/registry.txt``),
loaded into an immutable :class:`Registry`.  Rules are keyed on the main verb
plus the *set* of modifiers; the output order of each rule is significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Sequence

from ._lines import column_of, iter_statements
from .errors import InvalidStateError, ParseError, UnknownActionError

MIN_STATE = 1
MAX_STATE = 10

VERBS: tuple[str, ...] = (
    "perceive",
    "decide",
    "act",
    "communicate",
    "emote",
    "express",
    "recall",
    "relax",
    "think",
    "observe",
    "wait",
)
MODALITIES: tuple[str, ...] = ("vision", "audio", "touch", "other")

StateSeq = tuple[int, ...]


class Layer(str, Enum):
    PHYSICAL = "physical"
    METAPHYSICAL = "metaphysical"


def check_state_id(state_id: int) -> int:
    if isinstance(state_id, bool) or not isinstance(state_id, int):
        raise InvalidStateError(f"state id must be an integer, got {state_id!r}")
    if not MIN_STATE <= state_id <= MAX_STATE:
        raise InvalidStateError(f"state id {state_id} outside {MIN_STATE}..{MAX_STATE}")
    return state_id


@dataclass(frozen=True)
class StateDescriptor:
    id: int
    name: str
    layer: Layer

    def __post_init__(self) -> None:
        check_state_id(self.id)


@dataclass(frozen=True)
class ActionDescriptor:
    verb: str
    modifiers: frozenset[str] = frozenset()
    channel: str | None = None

    def __post_init__(self) -> None:
        if self.verb not in VERBS:
            raise UnknownActionError(f"unknown verb {self.verb!r}")
        mods = frozenset(self.modifiers)
        bad = sorted(m for m in mods if m not in VERBS)
        if bad:
            raise UnknownActionError(f"unknown modifier(s) {', '.join(bad)}")
        if self.verb in mods:
            raise ValueError(f"modifier set repeats main verb {self.verb!r}")
        if self.channel is not None and self.channel not in MODALITIES:
            raise ValueError(f"unknown channel {self.channel!r}")
        object.__setattr__(self, "modifiers", mods)

    @classmethod
    def parse(cls, text: str, channel: str | None = None) -> ActionDescriptor:
        """Parse ``verb[+modifier...]``; modifier order is kept only for display."""
        verb, *mods = text.split("+")
        return cls(verb, frozenset(mods), channel)

    @property
    def verbs(self) -> frozenset[str]:
        return self.modifiers | {self.verb}

    def key(self) -> str:
        """Canonical ``verb+mod+...`` text with modifiers in vocabulary order."""
        ordered = [v for v in VERBS if v in self.modifiers]
        return "+".join([self.verb, *ordered])


@dataclass(frozen=True)
class TraceStep:
    index: int
    goal_id: str
    label: str
    action: ActionDescriptor
    states: StateSeq
    note: str = ""
    mode: str = "voluntary"
    fear: float = 0.0

    @property
    def is_challenge(self) -> bool:
        return self.label.startswith("!")


@dataclass(frozen=True)
class Finding:
    step: int | None
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def __len__(self) -> int:
        return len(self.findings)


RuleKey = tuple[str, frozenset[str]]


@dataclass(frozen=True)
class Registry:
    states: Mapping[int, StateDescriptor]
    rules: Mapping[RuleKey, StateSeq] = field(default_factory=dict)

    def __post_init__(self) -> None:
        names = [d.name for d in self.states.values()]
        if len(set(names)) != len(names):
            raise ValueError("state names must be unique")
        for seq in self.rules.values():
            for sid in seq:
                if sid not in self.states:
                    raise InvalidStateError(f"rule references undeclared state {sid}")

    def resolve(self, state_id: int) -> StateDescriptor:
        check_state_id(state_id)
        try:
            return self.states[state_id]
        except KeyError:
            raise InvalidStateError(f"state {state_id} not declared in registry") from None

    def derive(self, action: ActionDescriptor) -> StateSeq:
        return derive_states(action, self.rules)


def resolve_state(state_id: int, registry: Registry | None = None) -> StateDescriptor:
    return (registry or default_registry()).resolve(state_id)


def derive_states(action: ActionDescriptor, rules: Mapping[RuleKey, StateSeq] | Registry) -> StateSeq:
    """Ordered states for ``action``.

    An exact ``(verb, modifiers)`` rule wins.  Otherwise the sequence is composed
    from the single-verb rules: the main verb first, then each modifier in
    vocabulary order, dropping repeats.
    """
    if isinstance(rules, Registry):
        rules = rules.rules
    exact = rules.get((action.verb, action.modifiers))
    if exact is not None:
        return exact
    if not action.modifiers:
        raise UnknownActionError(f"no rule for verb {action.verb!r}")
    out: list[int] = []
    for verb in (action.verb, *(v for v in VERBS if v in action.modifiers)):
        base = rules.get((verb, frozenset()))
        if base is None:
            raise UnknownActionError(f"no rule for verb {verb!r}")
        out.extend(s for s in base if s not in out)
    return tuple(out)


def validate_trace(trace: Sequence[TraceStep], registry: Registry | None = None) -> ValidationReport:
    registry = registry or default_registry()
    findings: list[Finding] = []
    seen: set[int] = set()
    prev: int | None = None
    for step in trace:
        if step.index in seen:
            findings.append(Finding(step.index, "duplicate-index", f"index {step.index} repeated"))
        elif prev is not None and step.index <= prev:
            findings.append(Finding(step.index, "ordering", f"index {step.index} follows {prev}"))
        seen.add(step.index)
        prev = step.index if prev is None else max(prev, step.index)
        if not step.states:
            findings.append(Finding(step.index, "empty-states", "step has no states"))
        if len(set(step.states)) != len(step.states):
            findings.append(Finding(step.index, "repeated-state", f"states {list(step.states)} repeat an id"))
        for sid in step.states:
            if sid not in registry.states:
                findings.append(Finding(step.index, "unknown-state", f"state id {sid} not in registry"))
    return ValidationReport(tuple(findings))


def _parse_ids(text: str, lineno: int, raw: str) -> StateSeq:
    try:
        ids = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ParseError(f"bad state list {text!r}", lineno, column_of(raw, text)) from None
    if not ids:
        raise ParseError("empty state list", lineno, column_of(raw, text))
    if len(set(ids)) != len(ids):
        raise ParseError(f"state list {text!r} repeats an id", lineno, column_of(raw, text))
    for sid in ids:
        if not MIN_STATE <= sid <= MAX_STATE:
            raise ParseError(f"state id {sid} outside {MIN_STATE}..{MAX_STATE}", lineno, column_of(raw, text))
    return ids


def parse_state_list(text: str, lineno: int = 0, raw: str = "") -> StateSeq:
    return _parse_ids(text, lineno, raw or text)


def load_registry(text: str) -> Registry:
    """Parse ``state <id> <name> <layer>`` and ``rule <verb>[+mod...] -> <ids>`` lines."""
    states: dict[int, StateDescriptor] = {}
    rules: dict[RuleKey, StateSeq] = {}
    for lineno, raw, tokens in iter_statements(text):
        head = tokens[0]
        if head == "state":
            if len(tokens) != 4:
                raise ParseError("expected: state <id> <name> <physical|metaphysical>", lineno, 1)
            _, sid_text, name, layer_text = tokens
            (sid,) = _parse_ids(sid_text, lineno, raw)
            try:
                layer = Layer(layer_text)
            except ValueError:
                raise ParseError(f"unknown layer {layer_text!r}", lineno, column_of(raw, layer_text)) from None
            if sid in states:
                raise ParseError(f"state {sid} declared twice", lineno, 1)
            states[sid] = StateDescriptor(sid, name, layer)
        elif head == "rule":
            rest = raw.split("#", 1)[0].split(None, 1)[1] if len(tokens) > 1 else ""
            if "->" not in rest:
                raise ParseError("expected: rule <verb>[+modifier...] -> <id>,<id>,...", lineno, 1)
            lhs, rhs = (part.strip() for part in rest.split("->", 1))
            try:
                action = ActionDescriptor.parse(lhs)
            except (UnknownActionError, ValueError) as exc:
                raise ParseError(str(exc), lineno, column_of(raw, lhs)) from None
            key = (action.verb, action.modifiers)
            if key in rules:
                raise ParseError(f"duplicate rule for {action.key()}", lineno, 1)
            rules[key] = _parse_ids(rhs.replace(" ", ""), lineno, raw)
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno, column_of(raw, head))
    try:
        return Registry(states, rules)
    except (ValueError, InvalidStateError) as exc:
        raise ParseError(str(exc)) from None


def dump_registry(registry: Registry) -> str:
    lines = [f'state {d.id} "{d.name}" {d.layer.value}' for d in sorted(registry.states.values(), key=lambda d: d.id)]
    for (verb, mods), seq in registry.rules.items():
        key = ActionDescriptor(verb, mods).key()
        lines.append(f"rule {key} -> {','.join(map(str, seq))}")
    return "\n".join(lines) + "\n"


def bundled_text(name: str) -> str:
    return resources.files("qualia").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_registry() -> Registry:
    return load_registry(bundled_text("registry.txt"))


def state_names(ids: Iterable[int], registry: Registry | None = None) -> list[str]:
    registry = registry or default_registry()
    return [registry.resolve(i).name for i in ids]
