"""The qualia manager: the root scheduler that walks an agent through its goals.

One *cycle* is the unit of time.  Each cycle grows the bodily drives, checks
for a challenge and either attends to it (the plan stage stays pending) or
executes the next plan stage.  Goals end in a scripted success or failure,
each followed by an expression and a terminal memory write.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .affect import (
    EmotionVector,
    InstinctSignal,
    MachineLoad,
    PersonalityProfile,
    expression_mode,
    select_challenge,
    tick_instincts,
    update_emotion,
    ZERO_EMOTION,
)
from .cognition import Goal, KnowledgeGraph, Means, Plan, PlanStage, Thought, generate_thoughts, plan_goal, revisit_failed
from .config import EngineConfig, apply_overrides
from .errors import AmbiguousObservationError, LifecycleError, PlanError, QualiaError
from .events import Event, InstinctEvent, PerceptEvent, StimulusEvent, TerminalEvent
from .memory import MemoryStores, record_experience
from .perception import FusedObservation, fuse
from .states import ActionDescriptor, Registry, TraceStep, default_registry

log = logging.getLogger(__name__)

EXPRESSION_KINDS = ("action", "gesture", "emotion")

# Attending a challenge: which verb labels the step and which emotion it stirs.
CHALLENGE_ACTION = {"pain": "emote", "hunger": "decide", "fatigue": "relax"}
CHALLENGE_EMOTION = {"pain": "fear", "hunger": "anger", "fatigue": "sadness"}


class ScenarioRuntimeError(QualiaError):
    def __init__(self, where: str, cause: Exception):
        self.where = where
        self.cause = cause
        super().__init__(f"{where}: {cause}")


@dataclass(frozen=True)
class Expression:
    kind: str
    mode: str
    payload: str
    tick: int
    goal_id: str = ""

    def __post_init__(self) -> None:
        if self.kind not in EXPRESSION_KINDS:
            raise ValueError(f"unknown expression kind {self.kind!r}")

    def line(self) -> str:
        return f"express {self.kind} mode={self.mode} payload={self.payload} tick={self.tick} goal={self.goal_id}"


@dataclass(frozen=True)
class Observation:
    tick: int
    where: str
    fused: FusedObservation | None  # None: modalities tied, re-perception needed

    def line(self) -> str:
        if self.fused is None:
            return f"observe {self.where} tick={self.tick} ambiguous"
        mods = ",".join(sorted(self.fused.contributing))
        return f"observe {self.where} tick={self.tick} label={self.fused.label} conf={self.fused.confidence:.3f} via={mods}"


@dataclass(frozen=True)
class Outcome:
    goal_id: str
    result: str  # success | failure
    trace: tuple[TraceStep, ...]


@dataclass
class AgentState:
    config: EngineConfig
    personality: PersonalityProfile
    emotion: EmotionVector
    instincts: tuple[InstinctSignal, ...]
    stores: MemoryStores
    graph: KnowledgeGraph
    registry: Registry
    goals: list[Goal] = field(default_factory=list)
    active_plan: Plan | None = None
    tick: int = 0
    seed: int = 0
    alive: bool = True
    rng: random.Random = field(default_factory=random.Random)
    # run history
    trace: list[TraceStep] = field(default_factory=list)
    expressions: list[Expression] = field(default_factory=list)
    thoughts: list[Thought] = field(default_factory=list)
    observations: list[Observation] = field(default_factory=list)
    last_goal: str | None = None
    refractory: bool = False

    @property
    def load(self) -> MachineLoad:
        return MachineLoad(self.config.battery, self.config.process_load)

    def instinct(self, kind: str) -> InstinctSignal:
        return next(s for s in self.instincts if s.kind == kind)

    def set_instinct(self, kind: str, level: float) -> None:
        self.instincts = tuple(replace(s, level=level) if s.kind == kind else s for s in self.instincts)


@dataclass(frozen=True)
class CycleResult:
    step: TraceStep | None
    expressions: tuple[Expression, ...] = ()
    consumed: bool = False
    challenge: str | None = None


def init_agent(
    config: EngineConfig | Mapping[str, str] | None = None,
    graph: KnowledgeGraph | None = None,
    registry: Registry | None = None,
    seed: int = 0,
) -> AgentState:
    """Fresh agent: empty memories, calm emotions, configured drives."""
    if config is None:
        config = EngineConfig()
    elif not isinstance(config, EngineConfig):
        config = apply_overrides(EngineConfig(), config)
    return AgentState(
        config=config,
        personality=config.personality,
        emotion=ZERO_EMOTION,
        instincts=config.instincts(),
        stores=MemoryStores(config.memory_capacity, config.memory_lt_threshold),
        graph=graph if graph is not None else KnowledgeGraph(),
        registry=registry or default_registry(),
        seed=seed,
        rng=random.Random(seed),
    )


def think(agent: AgentState, goal_tag: str | None) -> list[Thought]:
    start = agent.graph.most_relevant(goal_tag)
    if start is None:
        return []
    cfg = agent.config
    thoughts = generate_thoughts(
        agent.graph, start, goal_tag, agent.emotion, cfg.thought_steps, cfg.thought_alpha, cfg.thought_beta, agent.rng
    )
    agent.thoughts.extend(thoughts)
    return thoughts


def _emit(agent: AgentState, step: TraceStep) -> TraceStep:
    agent.trace.append(step)
    return step


def qualia_cycle(agent: AgentState, stage: PlanStage | None, injected: Sequence[Event] = (), goal_id: str = "") -> CycleResult:
    """Run one scheduler cycle.

    Instinct injections land first, then drives grow and a challenge, if any,
    preempts ``stage``.  Stimuli and percepts belong to the stage and only take
    effect when it executes.  After attending a challenge the next cycle runs
    the pending stage uninterrupted, so a plan always makes progress.
    """
    if not agent.alive:
        raise LifecycleError("cycle on a halted agent")
    cfg = agent.config
    p = agent.personality
    for ev in injected:
        if isinstance(ev, InstinctEvent):
            agent.set_instinct(ev.kind, ev.level)
    agent.instincts = tick_instincts(agent.instincts, 1.0, agent.load, cfg.instinct_rate)
    challenge = None if agent.refractory else select_challenge(agent.instincts)
    agent.tick += 1
    index = len(agent.trace) + 1
    label_goal = goal_id or (agent.active_plan.goal_id if agent.active_plan else "")

    if challenge is not None:
        kind = challenge.source
        stimulus = EmotionVector.from_mapping({CHALLENGE_EMOTION[kind]: challenge.severity})
        agent.emotion = update_emotion(agent.emotion, stimulus, p, 1.0, cfg.emotion_decay)
        agent.set_instinct(kind, 0.0)
        agent.refractory = True
        states = tuple(cfg.nominations[kind])
        step = _emit(
            agent,
            TraceStep(
                index,
                label_goal,
                "!" + kind,
                ActionDescriptor(CHALLENGE_ACTION[kind]),
                states,
                f"attend to {kind} ({challenge.severity:.2f})",
                expression_mode(agent.emotion, p, cfg.expression_base, cfg.expression_k),
                agent.emotion.fear,
            ),
        )
        record_experience(
            agent.stores, f"challenge {kind}", agent.emotion, states, agent.tick, origin="challenge", goal_id=label_goal
        )
        log.debug("tick %d: challenge %s preempts stage", agent.tick, kind)
        return CycleResult(step, consumed=False, challenge=kind)

    agent.refractory = False
    stimulus = ZERO_EMOTION
    percepts = []
    for ev in injected:
        if isinstance(ev, StimulusEvent):
            stimulus = stimulus.merge(ev.vector())
        elif isinstance(ev, PerceptEvent):
            percepts.append(replace(ev.percept, tick=agent.tick))
    agent.emotion = update_emotion(agent.emotion, stimulus, p, 1.0, cfg.emotion_decay)
    if stage is None:
        return CycleResult(None)

    where = f"{label_goal}.{stage.label}"
    if percepts:
        try:
            fused = fuse(percepts)
        except AmbiguousObservationError:
            fused = None
        agent.observations.append(Observation(agent.tick, where, fused))

    mode = expression_mode(agent.emotion, p, cfg.expression_base, cfg.expression_k)
    action = stage.stage.action
    step = _emit(
        agent,
        TraceStep(index, label_goal, stage.label, action, stage.states, stage.stage.note, mode, agent.emotion.fear),
    )
    expressions: list[Expression] = []
    if "express" in action.verbs:
        payload = agent.emotion.dominant() or "neutral"
        expressions.append(Expression("emotion", mode, payload, agent.tick, label_goal))
    if "think" in action.verbs:
        think(agent, label_goal)
    if stage.stage.is_memorable:
        record_experience(agent.stores, stage.stage.note or where, agent.emotion, stage.states, agent.tick, goal_id=label_goal)
    agent.expressions.extend(expressions)
    return CycleResult(step, tuple(expressions), consumed=True)


def _terminal(agent: AgentState, goal: Goal, result: str, trace: Sequence[TraceStep]) -> Expression:
    cfg = agent.config
    mode = expression_mode(agent.emotion, agent.personality, cfg.expression_base, cfg.expression_k)
    dominant = agent.emotion.dominant()
    if dominant is not None:
        expr = Expression("emotion", mode, dominant, agent.tick, goal.id)
    elif result == "success":
        expr = Expression("action", mode, "goal-reached", agent.tick, goal.id)
    else:
        expr = Expression("gesture", mode, "goal-abandoned", agent.tick, goal.id)
    agent.expressions.append(expr)
    states = trace[-1].states if trace else ()
    event = f"goal {goal.id} {result}"
    if goal.description:
        event += f": {goal.description}"
    record_experience(agent.stores, event, agent.emotion, states, agent.tick, origin="terminal", goal_id=goal.id)
    goal.status = "achieved" if result == "success" else "failed"
    agent.active_plan = None
    agent.last_goal = goal.id
    return expr


def run_goal(
    agent: AgentState,
    goal: Goal,
    means: Means,
    events: Mapping[str, Sequence[Event]] | None = None,
) -> tuple[AgentState, Outcome, list[Expression]]:
    """Drive one goal to a terminal outcome.

    ``events`` maps stage labels to the events injected when that stage is
    next in line.  A ``terminal`` event ends the goal right after its stage.
    """
    if not agent.alive:
        raise LifecycleError("run_goal on a halted agent")
    if goal.status != "pending":
        raise LifecycleError(f"goal {goal.id!r} is {goal.status}, expected pending")
    if goal not in agent.goals:
        agent.goals.append(goal)
    start_expr = len(agent.expressions)
    try:
        plan = plan_goal(goal, means, agent.registry)
    except PlanError:
        _terminal(agent, goal, "failure", ())
        return agent, Outcome(goal.id, "failure", ()), agent.expressions[start_expr:]
    except QualiaError as exc:
        raise ScenarioRuntimeError(goal.id, exc) from exc

    agent.active_plan = plan
    pending = {label: list(evs) for label, evs in (events or {}).items()}
    trace: list[TraceStep] = []
    result = "success"
    i = 0
    while i < len(plan.stages):
        ps = plan.stages[i]
        evs = pending.get(ps.label, [])
        try:
            res = qualia_cycle(agent, ps, evs, goal.id)
        except QualiaError as exc:
            raise ScenarioRuntimeError(f"{goal.id}.{ps.label}", exc) from exc
        # instinct injections fire once, even if the stage was preempted
        pending[ps.label] = [e for e in evs if not isinstance(e, InstinctEvent)]
        if res.step is not None:
            trace.append(res.step)
        if not res.consumed:
            continue
        i += 1
        terminal = [e for e in evs if isinstance(e, TerminalEvent)]
        if terminal:
            result = terminal[-1].result
            break
    _terminal(agent, goal, result, trace)
    return agent, Outcome(goal.id, result, tuple(trace)), agent.expressions[start_expr:]


def post_goal_phase(agent: AgentState) -> tuple[AgentState, list[Thought]]:
    """Free thinking after a goal, then failed goals go back on the queue."""
    if agent.active_plan is not None:
        raise LifecycleError("post-goal phase with a plan still active")
    thoughts = think(agent, agent.last_goal)
    revisit_failed(agent.goals, agent.config.revisit_factor, agent.config.revisit_floor)
    return agent, thoughts
