import json

import pytest

from wastive.config import (
    RuntimeConfig,
    apply_override,
    config_from_dict,
    config_to_dict,
    load_config,
)
from wastive.errors import ConfigError


def test_empty_document_is_full_defaults():
    cfg = load_config("")
    assert cfg == RuntimeConfig().validate()
    assert cfg.tick_hz == 30.0
    assert cfg.n_regions == 4
    assert cfg.m_panels == 8
    assert len(cfg.servos) == 8
    assert cfg.transport.kind == "loopback"


def test_whitespace_document_is_defaults():
    assert load_config("  \n ") == load_config("")


def test_partial_document_merges_defaults():
    cfg = load_config(json.dumps({"wave": {"rise_rate": 0.5}}))
    assert cfg.wave.rise_rate == 0.5
    assert cfg.wave.decay_rate == 0.15  # untouched default


def test_tick_hz_range_names_field():
    with pytest.raises(ConfigError, match="tick_hz"):
        load_config(json.dumps({"tick_hz": 500}))


def test_servo_length_mismatch_rejected():
    doc = {"m_panels": 4, "servos": [{} for _ in range(8)], "n_regions": 2}
    with pytest.raises(ConfigError, match="servos"):
        load_config(json.dumps(doc))


def test_unknown_top_level_key_rejected():
    with pytest.raises(ConfigError, match="unknown key rise_rate"):
        load_config(json.dumps({"rise_rate": 1.0}))


def test_unknown_nested_key_names_path():
    with pytest.raises(ConfigError, match="wave.rise"):
        load_config(json.dumps({"wave": {"rise": 1.0}}))


def test_parse_error_reports_line():
    with pytest.raises(ConfigError, match="line 2"):
        load_config('{\n  "tick_hz": ,\n}')


def test_invalid_sub_value_names_section():
    with pytest.raises(ConfigError, match="vision"):
        load_config(json.dumps({"vision": {"alpha": 2.0}}))


def test_stability_checked_at_load():
    with pytest.raises(ConfigError, match="coupling"):
        load_config(json.dumps({"tick_hz": 10, "wave": {"coupling": 6.0}}))


def test_m_panels_must_cover_regions():
    with pytest.raises(ConfigError, match="m_panels"):
        load_config(json.dumps({"n_regions": 6, "m_panels": 4, "servos": [{}] * 4}))


def test_transport_spec():
    cfg = load_config(json.dumps({"transport": {"type": "serial", "path": "/dev/ttyUSB0", "baud": 57600}}))
    assert cfg.transport.kind == "serial"
    assert cfg.transport.baud == 57600
    with pytest.raises(ConfigError, match="transport"):
        load_config(json.dumps({"transport": {"type": "carrier-pigeon"}}))
    with pytest.raises(ConfigError, match="path"):
        load_config(json.dumps({"transport": {"type": "file"}}))


def test_round_trip_through_dict():
    cfg = load_config(json.dumps({"tick_hz": 60, "wave": {"coupling": 0.4}}))
    again = config_from_dict(config_to_dict(cfg))
    assert again == cfg


def test_schema_version_checked():
    with pytest.raises(ConfigError, match="schema_version"):
        load_config(json.dumps({"schema_version": 99}))


def test_rest_pulses_are_height_zero():
    cfg = load_config("")
    assert cfg.rest_pulses() == [1000] * 8


class TestApplyOverride:
    def test_updates_one_field(self):
        cfg = load_config("")
        out = apply_override(cfg, "wave.rise_rate", 0.75)
        assert out.wave.rise_rate == 0.75
        assert cfg.wave.rise_rate == 0.25  # original untouched

    def test_occupancy_and_vision_reachable(self):
        cfg = load_config("")
        assert apply_override(cfg, "occupancy.debounce_ms", 450.0).occupancy.debounce_ms == 450.0
        assert apply_override(cfg, "vision.diff_threshold", 33.0).vision.diff_threshold == 33.0

    def test_unknown_name_rejected(self):
        cfg = load_config("")
        with pytest.raises(ConfigError):
            apply_override(cfg, "wave.bogus", 1.0)
        with pytest.raises(ConfigError):
            apply_override(cfg, "servos.0.pulse_min", 900)

    def test_invariant_violations_rejected(self):
        cfg = load_config("")
        with pytest.raises(ConfigError):
            apply_override(cfg, "wave.rise_rate", -1.0)
        with pytest.raises(ConfigError):
            apply_override(cfg, "wave.coupling", 100.0)  # unstable at 30 Hz
