import pytest

from qualia.config import EngineConfig, apply_overrides, parse_config
from qualia.errors import ConfigError, ParseError


def test_defaults():
    cfg = EngineConfig()
    assert cfg.emotion_decay == 0.5
    assert cfg.instinct_rate["hunger"] == 0.02 and cfg.instinct_rate["fatigue"] == 0.03
    assert all(t == 0.7 for t in cfg.instinct_threshold.values())
    assert cfg.memory_capacity == 7 and cfg.memory_lt_threshold == 0.6
    assert dict(cfg.nominations) == {"pain": (8,), "hunger": (2,), "fatigue": (3,)}


def test_parse_key_values():
    cfg = parse_config(
        """
        # affect block
        emotion.decay=0.25
        instinct.hunger.rate = 0.1
        instinct.pain.threshold=0.5
        challenge.pain.states=8,10
        memory.capacity=3
        """
    )
    assert cfg.emotion_decay == 0.25
    assert cfg.instinct_rate["hunger"] == 0.1
    assert cfg.instinct_threshold["pain"] == 0.5
    assert cfg.nominations["pain"] == (8, 10)
    assert cfg.memory_capacity == 3


def test_bad_keys_all_reported():
    with pytest.raises(ConfigError) as exc:
        apply_overrides(EngineConfig(), {"personality.neuroticism": "1.3", "nonsense": "1", "emotion.decay": "0.5"})
    assert exc.value.keys == ["personality.neuroticism", "nonsense"]


@pytest.mark.parametrize(
    "key, value",
    [("emotion.decay", "0"), ("memory.capacity", "0"), ("instinct.hunger.rate", "x"), ("challenge.pain.states", "11")],
)
def test_rejects_out_of_range(key, value):
    with pytest.raises(ConfigError):
        apply_overrides(EngineConfig(), {key: value})


def test_missing_equals_is_parse_error():
    with pytest.raises(ParseError):
        parse_config("emotion.decay 0.5\n")


def test_mapping_round_trip():
    cfg = parse_config("personality.openness=0.1\nthought.steps=12\n")
    assert apply_overrides(EngineConfig(), cfg.to_mapping()) == cfg
