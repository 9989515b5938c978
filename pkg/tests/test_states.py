import pytest
from hypothesis import given, strategies as st

from qualia.errors import InvalidStateError, ParseError, UnknownActionError
from qualia.states import (
    VERBS,
    ActionDescriptor,
    Layer,
    TraceStep,
    default_registry,
    derive_states,
    dump_registry,
    load_registry,
    resolve_state,
    validate_trace,
)

REG = default_registry()


def test_registry_has_ten_named_states():
    assert sorted(REG.states) == list(range(1, 11))
    assert len({d.name for d in REG.states.values()}) == 10


def test_resolve_emotional_state():
    d = resolve_state(8)
    assert d.name == "emotional state"
    assert d.layer is Layer.METAPHYSICAL


def test_resolve_motor_control():
    d = resolve_state(5)
    assert d.name == "motor control"
    assert d.layer is Layer.PHYSICAL


@pytest.mark.parametrize("bad", [0, 11, -3])
def test_resolve_out_of_range(bad):
    with pytest.raises(InvalidStateError):
        resolve_state(bad)


@pytest.mark.parametrize(
    "action, channel, expected",
    [
        ("perceive+decide", "vision", (2, 6)),
        ("communicate+emote+act+express", None, (2, 5, 8, 10)),
        ("recall+relax", None, (2, 9, 3)),
    ],
)
def test_derive_worked_examples(action, channel, expected):
    assert derive_states(ActionDescriptor.parse(action, channel), REG) == expected


def test_modifier_order_is_irrelevant():
    a = ActionDescriptor.parse("communicate+express+act+emote")
    assert derive_states(a, REG) == (2, 5, 8, 10)


def test_uncovered_combination_composes_single_verb_rules():
    # observe -> 1, then modifiers in vocabulary order: decide -> 2, recall -> 9
    assert derive_states(ActionDescriptor.parse("observe+recall+decide"), REG) == (1, 2, 9)


def test_unknown_verb_in_rule_table():
    rules = {("act", frozenset()): (5,)}
    with pytest.raises(UnknownActionError):
        derive_states(ActionDescriptor("think"), rules)
    with pytest.raises(UnknownActionError):
        derive_states(ActionDescriptor.parse("act+think"), rules)


def test_action_descriptor_rejects_bad_input():
    with pytest.raises(UnknownActionError):
        ActionDescriptor("fly")
    with pytest.raises(ValueError):
        ActionDescriptor("act", frozenset({"act"}))


def _step(i, states):
    return TraceStep(i, "g", f"s{i}", ActionDescriptor("act"), tuple(states))


def test_validate_well_formed():
    assert validate_trace([_step(1, [2, 6]), _step(2, [5])]).ok


def test_validate_unknown_state():
    rep = validate_trace([_step(1, [2]), _step(2, [11])])
    assert [(f.step, f.kind) for f in rep.findings] == [(2, "unknown-state")]


def test_validate_ordering():
    rep = validate_trace([_step(2, [2]), _step(1, [5])])
    assert [f.kind for f in rep.findings] == ["ordering"]


def test_validate_duplicates_and_empty():
    rep = validate_trace([_step(1, [2]), _step(1, [])])
    assert {f.kind for f in rep.findings} == {"duplicate-index", "empty-states"}


def test_registry_round_trip():
    assert load_registry(dump_registry(REG)) == REG


def test_registry_file_errors():
    with pytest.raises(ParseError) as exc:
        load_registry('state 1 "a" physical\nbogus line\n')
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        load_registry('state 1 "a" spiritual\n')
    with pytest.raises(ParseError):
        load_registry('state 1 "a" physical\nrule act -> 1,1\n')
    with pytest.raises(ParseError):
        load_registry('state 1 "a" physical\nrule act -> 1\nrule act -> 1\n')
    with pytest.raises(ParseError):
        load_registry('state 1 "a" physical\nrule act -> 2\n')  # undeclared state


def test_registry_is_data_driven():
    reg = load_registry('state 1 "only" physical  # comment\nrule act -> 1\n')
    assert reg.resolve(1).name == "only"
    assert reg.derive(ActionDescriptor("act")) == (1,)


actions = st.builds(
    lambda verb, mods: ActionDescriptor(verb, frozenset(m for m in mods if m != verb)),
    st.sampled_from(VERBS),
    st.sets(st.sampled_from(VERBS)),
)


@given(actions)
def test_derive_is_pure_and_resolvable(action):
    first = derive_states(action, REG)
    assert first == derive_states(action, REG)
    assert first and len(set(first)) == len(first)
    for sid in first:
        resolve_state(sid)
