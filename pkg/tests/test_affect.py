import pytest
from hypothesis import given, strategies as st

from qualia.affect import (
    ATTRIBUTE_TABLE,
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

P = PersonalityProfile()
unit = st.floats(0.0, 1.0)
emotions = st.builds(EmotionVector, unit, unit, unit, unit, unit, unit)
personalities = st.builds(PersonalityProfile, unit, unit, unit, unit, unit)


def test_decay_halves_fear():
    e = update_emotion(EmotionVector(fear=0.8), EmotionVector(), P, dt=1, decay=0.5)
    assert e.fear == pytest.approx(0.4)


def test_unit_decay_is_identity():
    e = EmotionVector(fear=0.3, joy=0.7)
    assert update_emotion(e, EmotionVector(fear=1, joy=0, hope=1), P, dt=1, decay=1.0) == e


def test_neurotic_fear_clamps():
    e = update_emotion(EmotionVector(), EmotionVector(fear=1.0), PersonalityProfile(neuroticism=1.0), 1, 0.5)
    assert e.fear == 1.0


def test_gain_applies_to_fear_only():
    e = update_emotion(EmotionVector(), EmotionVector(fear=0.4, joy=0.4), PersonalityProfile(neuroticism=1.0), 1, 0.5)
    assert e.fear == pytest.approx(0.4)
    assert e.joy == pytest.approx(0.2)


def test_dt_must_be_positive():
    with pytest.raises(ValueError):
        update_emotion(EmotionVector(), EmotionVector(), P, dt=0)


def test_emotion_vector_bounds():
    with pytest.raises(ValueError):
        EmotionVector(fear=1.2)
    with pytest.raises(ValueError):
        EmotionVector.from_mapping({"boredom": 0.1})


def test_hunger_grows_linearly():
    (h,) = tick_instincts([InstinctSignal("hunger", 0.2)], 1.0, rates={"hunger": 0.1})
    assert h.level == pytest.approx(0.3)


def test_fatigue_clamps():
    (f,) = tick_instincts([InstinctSignal("fatigue", 0.95)], 1.0, rates={"fatigue": 0.1})
    assert f.level == 1.0


def test_pain_unchanged_and_small_dt_limit():
    pain, hunger = tick_instincts([InstinctSignal("pain", 0.4), InstinctSignal("hunger", 0.2)], 1e-9, rates={"hunger": 0.1, "pain": 0.5})
    assert pain.level == 0.4
    assert hunger.level == pytest.approx(0.2)


def test_machine_load_speeds_up_drives():
    sigs = [InstinctSignal("hunger", 0.0), InstinctSignal("fatigue", 0.0)]
    rates = {"hunger": 0.1, "fatigue": 0.1}
    idle = tick_instincts(sigs, 1.0, MachineLoad(), rates)
    busy = tick_instincts(sigs, 1.0, MachineLoad(battery=0.2, process_load=0.9), rates)
    assert busy[0].level == pytest.approx(0.18)
    assert busy[1].level == pytest.approx(0.19)
    assert all(b.level > i.level for b, i in zip(busy, idle))


def test_no_challenge_below_threshold():
    assert select_challenge([InstinctSignal("pain", 0.5), InstinctSignal("hunger", 0.6)]) is None


def test_strongest_challenge_wins():
    sigs = [InstinctSignal("pain", 0.9, 0.7, 1.0), InstinctSignal("hunger", 0.8, 0.6, 1.0)]
    assert select_challenge(sigs) == Challenge("pain", 0.9)


def test_challenge_tie_break():
    sigs = [InstinctSignal("hunger", 0.8), InstinctSignal("fatigue", 0.8), InstinctSignal("pain", 0.8)]
    assert select_challenge(sigs).source == "pain"
    assert select_challenge(sigs[:2]).source == "hunger"


def test_weight_scales_competition():
    sigs = [InstinctSignal("pain", 0.75, weight=0.5), InstinctSignal("fatigue", 0.72, weight=1.0)]
    assert select_challenge(sigs) == Challenge("fatigue", 0.72)


signals = st.lists(
    st.builds(InstinctSignal, st.sampled_from(["pain", "hunger", "fatigue"]), unit, unit, st.floats(0, 3)),
    max_size=5,
)


@given(signals, st.randoms())
def test_select_challenge_order_independent(sigs, rnd):
    shuffled = list(sigs)
    rnd.shuffle(shuffled)
    assert select_challenge(sigs) == select_challenge(shuffled)


# Attribute table transcribed row by row: (quality, state, instinct, implications)
ATTRIBUTE_ROWS = {
    "Personality": (True, False, False, "DBM"),
    "Intelligence": (True, False, False, "DB"),
    "Creativity": (True, False, False, "DB"),
    "Knowledge": (True, True, False, "DBM"),
    "Memory": (True, True, False, "DBM"),
    "Extra-Sensory Percep.": (True, True, False, "D"),
    "Emotions": (False, True, False, "DB"),
    "Expression": (False, True, False, "B"),
    "Motor Control": (False, True, False, "B"),
    "Pain": (False, False, True, "MB"),
    "Hunger": (False, False, True, "MB"),
    "Bodily functions": (False, False, True, "MB"),
}


@pytest.mark.parametrize("name", sorted(ATTRIBUTE_ROWS))
def test_table_rows(name):
    q, s, i, imps = ATTRIBUTE_ROWS[name]
    row = implications_of(name)
    assert (row.quality, row.state, row.instinct) == (q, s, i)
    assert {x.value for x in row.implications} == set(imps)


def test_table_has_twelve_rows():
    assert len(ATTRIBUTE_TABLE) == 12
    assert all(row.implications for row in ATTRIBUTE_TABLE)


def test_unknown_attribute():
    with pytest.raises(ValueError):
        implications_of("Charisma")


def test_expression_mode_examples():
    assert expression_mode(EmotionVector(), P) == "voluntary"
    for n in (0.0, 0.5, 1.0):
        assert expression_mode(EmotionVector(fear=1.0), PersonalityProfile(neuroticism=n)) == "involuntary"
    assert expression_mode(EmotionVector(fear=0.7), PersonalityProfile(neuroticism=1.0)) == "involuntary"
    assert expression_mode(EmotionVector(fear=0.7), PersonalityProfile(neuroticism=0.0)) == "voluntary"


@given(emotions, st.lists(emotions, max_size=20), personalities, st.floats(0.01, 1.0), st.floats(0.01, 5.0))
def test_update_stays_in_bounds(e, stimuli, p, decay, dt):
    for s in stimuli:
        e = update_emotion(e, s, p, dt, decay)
        assert all(0.0 <= v <= 1.0 for v in e.as_tuple())


@given(emotions, personalities)
def test_zero_stimulus_decays_to_zero(e, p):
    prev = e
    for _ in range(80):
        nxt = update_emotion(prev, EmotionVector(), p, 1.0, 0.5)
        assert all(b <= a for a, b in zip(prev.as_tuple(), nxt.as_tuple()))
        prev = nxt
    assert prev.max() < 1e-20


@given(unit, unit, unit, unit)
def test_fear_monotone_in_neuroticism(fear, stim, n1, n2):
    lo, hi = sorted((n1, n2))
    a = update_emotion(EmotionVector(fear=fear), EmotionVector(fear=stim), PersonalityProfile(neuroticism=lo))
    b = update_emotion(EmotionVector(fear=fear), EmotionVector(fear=stim), PersonalityProfile(neuroticism=hi))
    assert a.fear <= b.fear


def test_dominant_emotion():
    assert EmotionVector().dominant() is None
    assert EmotionVector(joy=0.5, hope=0.5).dominant() == "joy"
