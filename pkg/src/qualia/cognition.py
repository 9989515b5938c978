"""Knowledge graph, biased random-walk thoughts, plans and failed-goal revisiting."""

from __future__ import annotations

import bisect
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Mapping, Sequence

from ._lines import column_of, fmt_float, iter_statements, parse_unit_float
from .affect import EMOTIONS, EmotionVector
from .errors import ParseError, PlanError
from .states import ActionDescriptor, Registry, StateSeq, default_registry, derive_states

GOAL_STATUSES = ("pending", "active", "achieved", "failed")
TRIGGERS = ("idle", "emotion", "goal")


@dataclass
class KnowledgeGraph:
    """Undirected weighted graph of concepts.

    ``relevance[node][goal_tag]`` biases walks toward goal-related concepts and
    ``affect_link[node]`` names the emotion whose intensity attracts the walk.
    """

    nodes: list[str] = field(default_factory=list)
    edges: dict[frozenset[str], float] = field(default_factory=dict)
    relevance: dict[str, dict[str, float]] = field(default_factory=dict)
    affect_link: dict[str, str] = field(default_factory=dict)

    def add_node(self, node: str, affect: str | None = None, relevance: Mapping[str, float] | None = None) -> None:
        if node in self.nodes:
            raise ValueError(f"node {node!r} declared twice")
        if affect is not None and affect not in EMOTIONS:
            raise ValueError(f"unknown emotion {affect!r}")
        for tag, rel in (relevance or {}).items():
            if not 0.0 <= rel <= 1.0:
                raise ValueError(f"relevance {tag}={rel} outside [0, 1]")
        self.nodes.append(node)
        if affect is not None:
            self.affect_link[node] = affect
        if relevance:
            self.relevance[node] = dict(relevance)

    def add_edge(self, a: str, b: str, weight: float = 1.0) -> None:
        for n in (a, b):
            if n not in self.nodes:
                raise ValueError(f"edge references undeclared node {n!r}")
        if a == b:
            raise ValueError("self-loops are not allowed")
        if not weight > 0:
            raise ValueError(f"edge weight must be > 0, got {weight}")
        key = frozenset((a, b))
        if key in self.edges:
            raise ValueError(f"edge {a}-{b} declared twice")
        self.edges[key] = float(weight)

    def neighbours(self, node: str) -> list[tuple[str, float]]:
        out = []
        for other in self.nodes:
            w = self.edges.get(frozenset((node, other)))
            if w is not None and other != node:
                out.append((other, w))
        return out

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def rel(self, node: str, goal_tag: str | None) -> float:
        if goal_tag is None:
            return 0.0
        return self.relevance.get(node, {}).get(goal_tag, 0.0)

    def most_relevant(self, goal_tag: str | None) -> str | None:
        if not self.nodes:
            return None
        return max(self.nodes, key=lambda n: self.rel(n, goal_tag))  # first declared wins ties


def node_bias(g: KnowledgeGraph, node: str, goal_tag: str | None, e: EmotionVector, alpha: float, beta: float) -> float:
    link = g.affect_link.get(node)
    affect = e.get(link) if link else 0.0
    return 1.0 + alpha * g.rel(node, goal_tag) + beta * affect


def transition_probabilities(
    g: KnowledgeGraph,
    u: str,
    goal_tag: str | None,
    e: EmotionVector,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> dict[str, float]:
    """P(v | u) proportional to w(u, v) times the bias of v."""
    raw = {v: w * node_bias(g, v, goal_tag, e, alpha, beta) for v, w in g.neighbours(u)}
    total = sum(raw.values())
    return {v: x / total for v, x in raw.items()}


@dataclass(frozen=True)
class Thought:
    path: tuple[str, ...]
    trigger: str = "idle"


def generate_thoughts(
    g: KnowledgeGraph,
    start: str,
    goal_tag: str | None,
    e: EmotionVector,
    n: int,
    alpha: float = 1.0,
    beta: float = 1.0,
    seed: int | random.Random | None = 0,
) -> list[Thought]:
    """One ``n``-step biased walk from ``start``, returned as a single Thought."""
    if start not in g.nodes:
        raise ValueError(f"start node {start!r} not in graph")
    if n < 1:
        raise ValueError("n must be >= 1")
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be >= 0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)

    # per-node (targets, cumulative weights, total, last index), built lazily
    tables: dict[str, tuple[list[str], list[float], float, int]] = {}
    path = [start]
    u = start
    draw, bisect_right, push = rng.random, bisect.bisect_right, path.append
    for _ in range(n):
        table = tables.get(u)
        if table is None:
            nbrs = g.neighbours(u)
            targets = [v for v, _ in nbrs]
            cum = list(accumulate(w * node_bias(g, v, goal_tag, e, alpha, beta) for v, w in nbrs))
            table = tables[u] = (targets, cum, cum[-1] if cum else 0.0, len(targets) - 1)
        targets, cum, total, last = table
        if not targets:
            break
        i = bisect_right(cum, draw() * total)
        u = targets[i if i < last else last]
        push(u)

    visits = Counter(path[1:])
    goal_term = sum(k * alpha * g.rel(v, goal_tag) for v, k in visits.items())
    emo_term = sum(k * beta * e.get(g.affect_link[v]) for v, k in visits.items() if v in g.affect_link)
    if goal_term == 0 and emo_term == 0:
        trigger = "idle"
    else:
        trigger = "goal" if goal_term >= emo_term else "emotion"
    return [Thought(tuple(path), trigger)]


def parse_graph(text: str) -> KnowledgeGraph:
    g = KnowledgeGraph()
    for lineno, raw, tokens in iter_statements(text):
        add_graph_statement(g, tokens, lineno, raw)
    return g


def add_graph_statement(g: KnowledgeGraph, tokens: Sequence[str], lineno: int, raw: str) -> None:
    head = tokens[0]
    try:
        if head == "node":
            if len(tokens) < 2:
                raise ParseError("expected: node <id> [affect=<emotion>] [rel:<tag>=<x>]...", lineno, 1)
            affect = None
            relevance: dict[str, float] = {}
            for tok in tokens[2:]:
                if tok.startswith("affect="):
                    affect = tok.split("=", 1)[1]
                    if affect not in EMOTIONS:
                        raise ParseError(f"unknown emotion {affect!r}", lineno, column_of(raw, tok))
                elif tok.startswith("rel:") and "=" in tok:
                    tag, val = tok[4:].split("=", 1)
                    relevance[tag] = parse_unit_float(val, f"relevance {tag}", lineno, raw)
                else:
                    raise ParseError(f"unexpected node attribute {tok!r}", lineno, column_of(raw, tok))
            g.add_node(tokens[1], affect, relevance)
        elif head == "edge":
            if len(tokens) != 4:
                raise ParseError("expected: edge <a> <b> <weight>", lineno, 1)
            try:
                weight = float(tokens[3])
            except ValueError:
                raise ParseError(f"bad weight {tokens[3]!r}", lineno, column_of(raw, tokens[3])) from None
            g.add_edge(tokens[1], tokens[2], weight)
        else:
            raise ParseError(f"unknown keyword {head!r}", lineno, column_of(raw, head))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), lineno, 1) from None


def dump_graph(g: KnowledgeGraph) -> list[str]:
    lines = []
    for node in g.nodes:
        parts = ["node", node]
        if node in g.affect_link:
            parts.append(f"affect={g.affect_link[node]}")
        parts.extend(f"rel:{tag}={fmt_float(v)}" for tag, v in g.relevance.get(node, {}).items())
        lines.append(" ".join(parts))
    for key, w in g.edges.items():
        a, b = sorted(key, key=g.nodes.index)
        lines.append(f"edge {a} {b} {fmt_float(w)}")
    return lines


# -- goals and plans ---------------------------------------------------------


@dataclass
class Goal:
    id: str
    description: str = ""
    priority: float = 1.0
    status: str = "pending"

    def __post_init__(self) -> None:
        if not 0.0 <= self.priority <= 1.0:
            raise ValueError(f"goal priority {self.priority} outside [0, 1]")
        if self.status not in GOAL_STATUSES:
            raise ValueError(f"unknown goal status {self.status!r}")


@dataclass(frozen=True)
class Stage:
    """One declared means step: an action plus its scenario note."""

    label: str
    action: ActionDescriptor
    note: str = ""
    memorable: bool | None = None  # None -> default rule

    @property
    def is_memorable(self) -> bool:
        if self.memorable is not None:
            return self.memorable
        return bool({"emote", "recall"} & self.action.verbs)


Means = Sequence[Stage]


@dataclass(frozen=True)
class PlanStage:
    stage: Stage
    states: StateSeq

    @property
    def label(self) -> str:
        return self.stage.label


@dataclass(frozen=True)
class Plan:
    goal_id: str
    stages: tuple[PlanStage, ...]


def plan_goal(goal: Goal, means: Means, registry: Registry | None = None) -> Plan:
    """Pair each declared step with its derived states; the goal becomes active."""
    if not means:
        raise PlanError(f"goal {goal.id!r} has no means")
    rules = (registry or default_registry()).rules
    stages = tuple(PlanStage(step, derive_states(step.action, rules)) for step in means)
    goal.status = "active"
    return Plan(goal.id, stages)


def revisit_failed(goals: Iterable[Goal], factor: float = 0.5, floor: float = 0.05) -> list[Goal]:
    """Re-queue failed goals as pending at reduced priority (never below ``floor``)."""
    goals = list(goals)
    for goal in goals:
        if goal.status == "failed":
            goal.priority = min(1.0, max(floor, goal.priority * factor))
            goal.status = "pending"
    return goals
