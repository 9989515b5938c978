"""Scenario DSL: parsing, serialization, deterministic replay and trace diffing.

Grammar, one statement per line (``#`` starts a comment)::

    scenario "<name>"
    config <key>=<value>
    node <id> [affect=<emotion>] [rel:<goal>=<0..1>]...
    edge <a> <b> <weight>
    goal <id> "<description>" priority <0..1>
    stage <goal>.<label> <verb>[+modifier...] [channel=<modality>] [memorable=<true|false>] "<note>"
    event at <goal>.<label> percept <modality> <label> conf <0..1>
    event at <goal>.<label> stimulus <emotion>=<0..1>[,...]
    event at <goal>.<label> instinct <pain|hunger|fatigue>=<0..1>
    event at <goal>.<label> terminal <success|failure>
    expect <goal>.<label> states <id>,<id>,...
    halt
"""

from __future__ import annotations

import copy
import json
import re
import shlex
from dataclasses import dataclass, field
from typing import Sequence

from ._lines import column_of, fmt_float, iter_statements, parse_unit_float, quote
from .cognition import Goal, KnowledgeGraph, Stage, Thought, add_graph_statement, dump_graph
from .config import EngineConfig, apply_overrides
from .errors import ConfigError, ParseError, UnknownActionError
from .events import Event, InstinctEvent, PerceptEvent, StimulusEvent, TerminalEvent
from .manager import Expression, Observation, init_agent, post_goal_phase, run_goal
from .memory import MemoryRecord
from .perception import ingest_percept
from .states import MODALITIES, ActionDescriptor, Registry, StateSeq, TraceStep, default_registry, parse_state_list

_IDENT = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_-]*$")


@dataclass
class ScenarioGoal:
    goal: Goal
    stages: list[Stage] = field(default_factory=list)


@dataclass(frozen=True)
class ScheduledEvent:
    goal_id: str
    label: str
    event: Event


@dataclass(frozen=True)
class Expectation:
    goal_id: str
    label: str
    states: StateSeq


@dataclass
class Scenario:
    name: str = ""
    config: dict[str, str] = field(default_factory=dict)
    graph: KnowledgeGraph = field(default_factory=KnowledgeGraph)
    goals: list[ScenarioGoal] = field(default_factory=list)
    events: list[ScheduledEvent] = field(default_factory=list)
    expected: list[Expectation] = field(default_factory=list)
    halt_after: int | None = None  # goals declared after `halt` are never run

    def goal(self, goal_id: str) -> ScenarioGoal:
        return next(g for g in self.goals if g.goal.id == goal_id)

    def events_for(self, goal_id: str) -> dict[str, list[Event]]:
        out: dict[str, list[Event]] = {}
        for ev in self.events:
            if ev.goal_id == goal_id:
                out.setdefault(ev.label, []).append(ev.event)
        return out

    def engine_config(self, base: EngineConfig | None = None) -> EngineConfig:
        return apply_overrides(base or EngineConfig(), self.config)


# -- parsing -----------------------------------------------------------------


def _split_ref(ref: str, lineno: int, raw: str) -> tuple[str, str]:
    goal_id, dot, label = ref.partition(".")
    if not dot or not _IDENT.match(goal_id) or not _IDENT.match(label):
        raise ParseError(f"expected <goal-id>.<label>, got {ref!r}", lineno, column_of(raw, ref))
    return goal_id, label


def parse_event_tokens(tokens: list[str], lineno: int, raw: str) -> Event:
    kind = tokens[0] if tokens else ""
    if kind == "percept":
        return PerceptEvent(ingest_percept(" ".join(tokens), lineno=lineno))
    if kind in ("stimulus", "instinct", "terminal") and len(tokens) != 2:
        raise ParseError(f"{kind}: expected exactly one argument", lineno, column_of(raw, kind))
    if kind == "stimulus":
        values: dict[str, float] = {}
        for part in tokens[1].split(","):
            name, eq, val = part.partition("=")
            if not eq:
                raise ParseError(f"stimulus: expected <emotion>=<x>, got {part!r}", lineno, column_of(raw, part))
            if name in values:
                raise ParseError(f"stimulus: {name} repeated", lineno, column_of(raw, part))
            values[name] = parse_unit_float(val, f"stimulus {name}", lineno, raw)
        try:
            return StimulusEvent.of(values)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, column_of(raw, tokens[1])) from None
    if kind == "instinct":
        name, eq, val = tokens[1].partition("=")
        if not eq:
            raise ParseError("instinct: expected <kind>=<x>", lineno, column_of(raw, tokens[1]))
        level = parse_unit_float(val, f"instinct {name}", lineno, raw)
        try:
            return InstinctEvent(name, level)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, column_of(raw, tokens[1])) from None
    if kind == "terminal":
        try:
            return TerminalEvent(tokens[1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno, column_of(raw, tokens[1])) from None
    raise ParseError(f"unknown event kind {kind!r}", lineno, column_of(raw, kind) if kind else 1)


def parse_stage_tokens(tokens: list[str], lineno: int, raw: str) -> tuple[str, Stage]:
    if len(tokens) < 4:
        raise ParseError('expected: stage <goal>.<label> <verb>[+mod...] [channel=..] [memorable=..] "<note>"', lineno, 1)
    goal_id, label = _split_ref(tokens[1], lineno, raw)
    try:
        action = ActionDescriptor.parse(tokens[2])
    except (UnknownActionError, ValueError) as exc:
        raise ParseError(str(exc), lineno, column_of(raw, tokens[2])) from None
    channel = None
    memorable = None
    *opts, note = tokens[3:]
    for opt in opts:
        key, eq, val = opt.partition("=")
        if key == "channel" and eq:
            if val not in MODALITIES:
                raise ParseError(f"unknown channel {val!r}", lineno, column_of(raw, opt))
            channel = val
        elif key == "memorable" and val in ("true", "false"):
            memorable = val == "true"
        else:
            raise ParseError(f"unexpected stage option {opt!r}", lineno, column_of(raw, opt))
    if channel is not None:
        action = ActionDescriptor(action.verb, action.modifiers, channel)
    return goal_id, Stage(label, action, note, memorable)


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario script; the first error is raised as :class:`ParseError`."""
    sc = Scenario()
    goals: dict[str, ScenarioGoal] = {}
    refs: list[tuple[str, str, int, str]] = []
    seen_name = False
    for lineno, raw, tokens in iter_statements(text):
        head = tokens[0]
        if head == "scenario":
            if len(tokens) != 2 or seen_name:
                raise ParseError('expected a single: scenario "<name>"', lineno, 1)
            sc.name = tokens[1]
            seen_name = True
        elif head == "config":
            if len(tokens) != 2 or "=" not in tokens[1]:
                raise ParseError("expected: config <key>=<value>", lineno, 1)
            key, value = tokens[1].split("=", 1)
            try:
                apply_overrides(EngineConfig(), {key: value})
            except ConfigError as exc:
                raise ParseError(str(exc), lineno, column_of(raw, tokens[1])) from None
            sc.config[key] = value
        elif head in ("node", "edge"):
            add_graph_statement(sc.graph, tokens, lineno, raw)
        elif head == "goal":
            if len(tokens) != 5 or tokens[3] != "priority":
                raise ParseError('expected: goal <id> "<description>" priority <0..1>', lineno, 1)
            goal_id = tokens[1]
            if not _IDENT.match(goal_id):
                raise ParseError(f"bad goal id {goal_id!r}", lineno, column_of(raw, goal_id))
            if goal_id in goals:
                raise ParseError(f"goal {goal_id!r} declared twice", lineno, column_of(raw, goal_id))
            priority = parse_unit_float(tokens[4], "priority", lineno, raw)
            goals[goal_id] = ScenarioGoal(Goal(goal_id, tokens[2], priority))
            sc.goals.append(goals[goal_id])
        elif head == "stage":
            goal_id, stage = parse_stage_tokens(tokens, lineno, raw)
            if goal_id not in goals:
                raise ParseError(f"stage references undeclared goal {goal_id!r}", lineno, column_of(raw, tokens[1]))
            if any(s.label == stage.label for s in goals[goal_id].stages):
                raise ParseError(f"stage {tokens[1]} declared twice", lineno, column_of(raw, tokens[1]))
            goals[goal_id].stages.append(stage)
        elif head == "event":
            if len(tokens) < 4 or tokens[1] != "at":
                raise ParseError("expected: event at <goal>.<label> <event...>", lineno, 1)
            goal_id, label = _split_ref(tokens[2], lineno, raw)
            refs.append((goal_id, label, lineno, raw))
            sc.events.append(ScheduledEvent(goal_id, label, parse_event_tokens(tokens[3:], lineno, raw)))
        elif head == "expect":
            if len(tokens) != 4 or tokens[2] != "states":
                raise ParseError("expected: expect <goal>.<label> states <id>,<id>,...", lineno, 1)
            goal_id, label = _split_ref(tokens[1], lineno, raw)
            refs.append((goal_id, label, lineno, raw))
            sc.expected.append(Expectation(goal_id, label, parse_state_list(tokens[3], lineno, raw)))
        elif head == "halt":
            if len(tokens) != 1 or sc.halt_after is not None:
                raise ParseError("unexpected halt", lineno, 1)
            sc.halt_after = len(sc.goals)
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno, column_of(raw, head))
    for goal_id, label, lineno, raw in refs:
        g = goals.get(goal_id)
        if g is None or not any(s.label == label for s in g.stages):
            raise ParseError(f"reference to undeclared stage {goal_id}.{label}", lineno, column_of(raw, f"{goal_id}.{label}"))
    return sc


def serialize_scenario(sc: Scenario) -> str:
    lines = []
    if sc.name:
        lines.append(f"scenario {quote(sc.name)}")
    lines.extend(f"config {k}={v}" for k, v in sc.config.items())
    lines.extend(dump_graph(sc.graph))
    for pos, sg in enumerate(sc.goals):
        if pos == sc.halt_after:
            lines.append("halt")
        g = sg.goal
        lines.append(f"goal {g.id} {quote(g.description)} priority {fmt_float(g.priority)}")
        for st in sg.stages:
            parts = ["stage", f"{g.id}.{st.label}", st.action.key()]
            if st.action.channel:
                parts.append(f"channel={st.action.channel}")
            if st.memorable is not None:
                parts.append(f"memorable={'true' if st.memorable else 'false'}")
            parts.append(quote(st.note))
            lines.append(" ".join(parts))
    if sc.halt_after is not None and sc.halt_after >= len(sc.goals):
        lines.append("halt")
    lines.extend(f"event at {e.goal_id}.{e.label} {e.event.line()}" for e in sc.events)
    lines.extend(f"expect {x.goal_id}.{x.label} states {','.join(map(str, x.states))}" for x in sc.expected)
    return "\n".join(lines) + "\n"


# -- trace lines ---------------------------------------------------------------

_TRACE_RE = re.compile(
    r'^step (?P<n>\d+) (?P<goal>[^.\s]*)\.(?P<label>\S+) states=\[(?P<states>[\d,]*)\] '
    r'action=(?P<verb>\w+) mode=(?P<mode>vol|invol) fear=(?P<fear>[\d.]+) note=(?P<note>".*")$'
)


def format_step(step: TraceStep) -> str:
    mode = "invol" if step.mode == "involuntary" else "vol"
    states = ",".join(map(str, step.states))
    return (
        f"step {step.index} {step.goal_id}.{step.label} states=[{states}] "
        f"action={step.action.verb} mode={mode} fear={step.fear:.3f} note={quote(step.note)}"
    )


def parse_trace(text: str) -> list[TraceStep]:
    """Read trace lines written by :func:`format_step`; other lines are ignored."""
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.startswith("step "):
            continue
        m = _TRACE_RE.match(raw)
        if m is None:
            raise ParseError("malformed trace line", lineno, 1)
        states = tuple(int(s) for s in m["states"].split(",") if s)
        steps.append(
            TraceStep(
                int(m["n"]),
                m["goal"],
                m["label"],
                ActionDescriptor(m["verb"]),
                states,
                shlex.split(m["note"])[0] if m["note"] != '""' else "",
                "involuntary" if m["mode"] == "invol" else "voluntary",
                float(m["fear"]),
            )
        )
    return steps


# -- diffing -------------------------------------------------------------------


@dataclass(frozen=True)
class TraceDiff:
    mismatches: tuple[tuple[str, StateSeq, StateSeq], ...] = ()
    length_delta: int = 0

    @property
    def equal(self) -> bool:
        return not self.mismatches and self.length_delta == 0

    def lines(self) -> list[str]:
        out = [f"mismatch {label}: expected {list(exp)} got {list(act)}" for label, exp, act in self.mismatches]
        if self.length_delta:
            out.append(f"length delta {self.length_delta:+d}")
        return out


def _labelled(item: TraceStep | Expectation | tuple[str, StateSeq]) -> tuple[str, StateSeq]:
    if isinstance(item, (TraceStep, Expectation)):
        return f"{item.goal_id}.{item.label}", tuple(item.states)
    label, states = item
    return label, tuple(states)


def diff_trace(actual: Sequence, expected: Sequence) -> TraceDiff:
    """Position-by-position comparison of state sequences; order inside a sequence matters."""
    act = [_labelled(x) for x in actual]
    exp = [_labelled(x) for x in expected]
    mismatches = tuple(
        (e_label, e_states, a_states) for (_, a_states), (e_label, e_states) in zip(act, exp) if a_states != e_states
    )
    return TraceDiff(mismatches, len(act) - len(exp))


# -- running -------------------------------------------------------------------


@dataclass
class RunReport:
    scenario: str
    seed: int
    trace: list[TraceStep]
    expressions: list[Expression]
    memory_log: list[MemoryRecord]
    thoughts: list[Thought]
    goal_outcomes: list[tuple[str, str]]
    goal_status: list[tuple[str, str, float]]
    observations: list[Observation]

    def stage_steps(self) -> list[TraceStep]:
        return [s for s in self.trace if not s.is_challenge]

    def summary(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "steps": len(self.trace),
            "challenge_steps": sum(s.is_challenge for s in self.trace),
            "expressions": len(self.expressions),
            "memory_writes": len(self.memory_log),
            "long_term_writes": sum(r.long_term for r in self.memory_log),
            "thoughts": len(self.thoughts),
            "outcomes": dict(self.goal_outcomes),
            "goals": {gid: {"status": status, "priority": prio} for gid, status, prio in self.goal_status},
        }

    def to_text(self, include_thoughts: bool = True) -> str:
        # without thoughts the text is seed-independent, so the seed is left out
        lines = [f"# run {self.scenario} seed={self.seed}" if include_thoughts else f"# run {self.scenario}"]
        lines.extend(format_step(s) for s in self.trace)
        lines.extend(e.line() for e in self.expressions)
        lines.extend(o.line() for o in self.observations)
        lines.extend("memory " + r.log_line() for r in self.memory_log)
        if include_thoughts:
            lines.extend(f"thought {t.trigger} {'>'.join(t.path)}" for t in self.thoughts)
        lines.extend(f"outcome {gid} {res}" for gid, res in self.goal_outcomes)
        summary = self.summary()
        if not include_thoughts:
            summary.pop("seed")
        lines.append("summary " + json.dumps(summary, sort_keys=True))
        return "\n".join(lines) + "\n"


def run_scenario(scenario: Scenario, seed: int = 0, registry: Registry | None = None) -> RunReport:
    """Replay ``scenario``; the result depends only on ``(scenario, seed)``."""
    agent = init_agent(scenario.engine_config(), scenario.graph, registry or default_registry(), seed)
    outcomes: list[tuple[str, str]] = []
    goals = [copy.deepcopy(sg.goal) for sg in scenario.goals]
    runnable = len(goals) if scenario.halt_after is None else scenario.halt_after
    agent.goals.extend(goals)
    for goal, sg in zip(goals[:runnable], scenario.goals):
        agent, outcome, _ = run_goal(agent, goal, sg.stages, scenario.events_for(goal.id))
        outcomes.append((outcome.goal_id, outcome.result))
        agent, _ = post_goal_phase(agent)
    agent.alive = False
    return RunReport(
        scenario=scenario.name,
        seed=seed,
        trace=list(agent.trace),
        expressions=list(agent.expressions),
        memory_log=list(agent.stores.log),
        thoughts=list(agent.thoughts),
        goal_outcomes=outcomes,
        goal_status=[(g.id, g.status, g.priority) for g in agent.goals],
        observations=list(agent.observations),
    )


def check_expected(report: RunReport, scenario: Scenario) -> TraceDiff:
    return diff_trace(report.stage_steps(), scenario.expected)


def bundled_scenario(name: str) -> str:
    from .states import bundled_text

    return bundled_text(name if name.endswith(".qs") else name + ".qs")


def load_bundled(name: str) -> Scenario:
    return parse_scenario(bundled_scenario(name))

