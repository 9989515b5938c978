"""Deterministic simulator of an affective, goal-driven model of machine consciousness."""

from .affect import (
    ATTRIBUTE_TABLE,
    AttributeProfile,
    Challenge,
    EmotionVector,
    InstinctSignal,
    MachineLoad,
    PersonalityProfile,
    expression_mode,
    implications_of,
    select_challenge,
    tick_instincts,
    update_emotion,
)
from .cognition import Goal, KnowledgeGraph, Plan, Stage, Thought, generate_thoughts, parse_graph, plan_goal, revisit_failed
from .config import EngineConfig, parse_config
from .manager import AgentState, Expression, Outcome, init_agent, post_goal_phase, qualia_cycle, run_goal
from .memory import MemoryRecord, MemoryStores, recall, record_experience
from .perception import FusedObservation, Percept, fuse, ingest_percept
from .scenario import RunReport, Scenario, TraceDiff, diff_trace, load_bundled, parse_scenario, run_scenario, serialize_scenario
from .states import (
    ActionDescriptor,
    Registry,
    StateDescriptor,
    TraceStep,
    default_registry,
    derive_states,
    load_registry,
    resolve_state,
    validate_trace,
)

__version__ = "0.1.0"
