"""Acceptance gate: the behavioral contract, one test per criterion.

A conftest hook prints one ACCEPTANCE <criterion>: PASS/FAIL line per
test here, visible in any pytest run.
"""

import random
import time

import numpy as np
import pytest

from wastive import protocol
from wastive.config import load_config
from wastive.simulator import Scenario, export_trace, run_scenario
from wastive.vision import detect_presence, init_background
from wastive.wave import WaveParams, WaveState, step_wave

CFG = load_config("")

REGION_WALK = Scenario(duration_s=11.0, events=((0.0, 0.375), (5.0, 0.375), (6.0, 0.625)))


def test_region_transition_reproduction():
    """Region-transition choreography: the occupied region's wave peaks,
    then lowers after the visitor moves on while the new region's rises."""
    t0 = time.perf_counter()
    rows = run_scenario(REGION_WALK, CFG)
    elapsed = time.perf_counter() - t0

    at_5 = rows[150]
    at_11 = rows[330]
    assert at_5.t_s == pytest.approx(5.0) and at_11.t_s == pytest.approx(11.0)
    assert all(at_5.base[1] > at_5.base[i] for i in (0, 2, 3)), "region 1 not max at t=5"
    assert all(at_11.base[2] > at_11.base[i] for i in (0, 1, 3)), "region 2 not max at t=11"
    assert at_11.base[1] < at_5.base[1], "region 1 did not lower"
    assert elapsed < 5.0, f"scenario took {elapsed:.2f}s"


def test_dwell_monotonicity():
    """Longer dwell in a region yields a strictly higher wave peak.

    Rates are overridden (slow rise, no coupling) so neither run clamps
    at full height; the comparison is exact, no tolerance.
    """
    overrides = {"wave.rise_rate": 0.1, "wave.coupling": 0.0}
    short = Scenario(
        duration_s=12.0,
        events=((0.0, 0.375), (2.0, None)),
        param_overrides=overrides,
    )
    long = Scenario(
        duration_s=14.0,
        events=((0.0, 0.375), (4.0, None)),
        param_overrides=overrides,
    )
    peak_short = max(r.base[1] for r in run_scenario(short, CFG))
    peak_long = max(r.base[1] for r in run_scenario(long, CFG))
    assert peak_short < 1.0 and peak_long < 1.0, "saturated; comparison meaningless"
    assert peak_long > peak_short


def test_bounds_and_safety_sweep():
    """10,000 random wave steps stay in [0, 1]; commanded angles stay in
    calibration and per-tick deltas respect the slew bound exactly."""
    rng = random.Random(4242)
    state = WaveState.zeros(5)
    params = WaveParams(rise_rate=0.9, decay_rate=0.4, coupling=2.5)
    dt = 1 / 30
    for _ in range(10_000):
        occupied = rng.choice([None, 0, 1, 2, 3, 4])
        state = step_wave(state, occupied, dt, params)
        assert all(0.0 <= b <= 1.0 for b in state.base)

    # frantic visitor: every second a new random position or absence
    events = []
    t = 0.0
    for _ in range(20):
        events.append((t, rng.choice([None, rng.random()])))
        t += 1.0
    wild = Scenario(duration_s=t, events=tuple(events))
    rows = run_scenario(wild, CFG)
    step = CFG.limits.max_speed * CFG.dt
    prev = None
    for r in rows:
        for h in r.base + r.panels:
            assert 0.0 <= h <= 1.0
        for a, cal in zip(r.angles, CFG.servos):
            assert cal.angle_min <= a <= cal.angle_max
        if prev is not None:
            for a, b in zip(prev, r.angles):
                assert abs(b - a) <= step
        prev = r.angles


def test_vision_oracle_equivalence():
    """detect_presence equals a brute-force double loop on 1,000 random
    frame/background pairs up to 32x32, to 1e-9."""
    rng = np.random.default_rng(31337)
    from wastive.vision import Frame

    for _ in range(1_000):
        w = int(rng.integers(8, 33))
        h = int(rng.integers(8, 33))
        bg_px = rng.integers(0, 256, size=w * h)
        fg_px = rng.integers(0, 256, size=w * h)
        thr = float(rng.uniform(1, 200))
        min_act = float(rng.uniform(0.005, 0.5))
        model = init_background(
            Frame(width=w, height=h, pixels=bg_px.astype(np.uint8), timestamp=0.0)
        )
        obs = detect_presence(
            model,
            Frame(width=w, height=h, pixels=fg_px.astype(np.uint8), timestamp=1.0),
            thr,
            min_act,
        )

        n_fg = 0
        col_sum = 0.0
        for r in range(h):
            for c in range(w):
                i = r * w + c
                if abs(float(fg_px[i]) - float(model.mean[i])) > thr:
                    n_fg += 1
                    col_sum += c + 0.5
        activity = n_fg / (w * h)
        assert abs(obs.activity_ratio - activity) <= 1e-9
        assert obs.occupied == (activity >= min_act)
        if obs.occupied:
            assert abs(obs.centroid_x - col_sum / (n_fg * w)) <= 1e-9


def _clean_frame(seq: int, pulses) -> bytes:
    pulses = list(pulses)
    while True:  # the CRC byte may itself come out 0xAA; nudge a pulse
        frame = protocol.encode(
            protocol.MSG_SET_TARGETS, seq, protocol.pack_pulses(pulses)
        )
        if 0xAA not in frame[1:]:
            return frame
        pulses[-1] += 1


def test_protocol_fuzz():
    """Round trips are exact; corrupted frames are never accepted and the
    parser re-finds valid frames after every corruption."""
    crc_ref = 0
    for byte in b"123456789":
        crc_ref ^= byte
        for _ in range(8):
            crc_ref = ((crc_ref << 1) ^ 0x07) & 0xFF if crc_ref & 0x80 else (crc_ref << 1) & 0xFF
    assert protocol.crc8(b"123456789") == crc_ref == 0xF4

    rng = random.Random(808)
    for _ in range(10_000):
        msg_type = rng.choice(list(protocol.KNOWN_TYPES))
        seq = rng.randrange(256)
        if msg_type == protocol.MSG_SET_TARGETS:
            payload = protocol.pack_pulses(
                [rng.randrange(0, 65536) for _ in range(rng.randrange(0, 33))]
            )
        else:
            payload = bytes([rng.randrange(256)]) if rng.random() < 0.5 else b""
        raw = protocol.encode(msg_type, seq, payload)
        msgs, consumed, skipped = protocol.decode(raw)
        assert msgs == [protocol.DeviceFrame(msg_type, seq, payload)]
        assert consumed == len(raw) and skipped == 0

    # corruption fuzz: corrupt(A) | B | B2 | C with 0xAA-free interiors.
    # C starts beyond the longest parse any corrupted anchor could claim
    # (anchor <= 36, max span 69 bytes), so it is provably reachable.
    def pulse_pool():
        return [p for p in range(900, 2100) if 0xAA not in p.to_bytes(2, "little")]

    pool = pulse_pool()
    false_accepts = 0
    sentinel_missed = 0
    for _ in range(10_000):
        frames = [
            _clean_frame(s, [rng.choice(pool) for _ in range(16)])
            for s in (rng.randrange(0, 80), 81, 82, 83)
        ]
        f_a, f_b, f_b2, f_c = frames
        pos = rng.randrange(len(f_a))
        val = rng.randrange(256)
        while val == f_a[pos]:
            val = rng.randrange(256)
        corrupted = bytearray(f_a)
        corrupted[pos] = val
        stream = bytes(corrupted) + f_b + f_b2 + f_c
        msgs, _, _ = protocol.decode(stream)
        triples = [(m.msg_type, m.seq, m.payload) for m in msgs]

        # a parser that ignored the CRC would read this triple at offset 0;
        # if its CRC really fails it must never be decoded (a corrupted
        # length byte can carve out a shorter span whose CRC happens to
        # validate; that is a legitimate frame by construction, and the
        # sentinel check below still proves the stream recovers)
        if len(corrupted) >= 5 and corrupted[0] == 0xAA:
            ln = corrupted[3]
            if 5 + ln <= len(corrupted):
                body = bytes(corrupted[1 : 4 + ln])
                stored_crc = corrupted[4 + ln]
                if protocol.crc8(body) != stored_crc:
                    mis = (corrupted[1], corrupted[2], bytes(corrupted[4 : 4 + ln]))
                    if mis in triples:
                        false_accepts += 1
        original = (f_a[1], f_a[2], bytes(f_a[4 : 4 + f_a[3]]))
        if original in triples:
            false_accepts += 1
        if (f_c[1], f_c[2], bytes(f_c[4 : 4 + f_c[3]])) not in triples:
            sentinel_missed += 1

    assert false_accepts == 0, f"{false_accepts} corrupted frames accepted"
    assert sentinel_missed == 0, f"resync failed to reach the next frame {sentinel_missed} times"


def test_failsafe_timing():
    """Silence engages the failsafe on the first tick past the timeout,
    with exactly one notification per engagement."""
    dt_ms = 1000.0 / 30.0
    model = protocol.DeviceModel(rest_pulses=[1000] * 8, failsafe_timeout_ms=500.0)
    protocol.device_step(
        model, protocol.encode(protocol.MSG_SET_TARGETS, 0, protocol.pack_pulses([1600] * 8)), 0.0
    )
    fired = []
    engaged_at = None
    for tick in range(1, 120):
        now = tick * dt_ms
        _, tx = protocol.device_step(model, b"", now)
        msgs, _, _ = protocol.decode(tx)
        fired += [m for m in msgs if m.msg_type == protocol.MSG_FAILSAFE_TRIGGERED]
        if model.failsafe_engaged and engaged_at is None:
            engaged_at = now
        if now <= 500.0:
            assert not model.failsafe_engaged, "engaged before the timeout elapsed"
    assert engaged_at is not None
    assert engaged_at <= 500.0 + dt_ms, "engaged later than one tick past the timeout"
    assert model.current_pulses == [1000] * 8
    assert len(fired) == 1

    # second engagement produces exactly one more
    protocol.device_step(model, protocol.encode(protocol.MSG_HEARTBEAT, 1), 5000.0)
    for tick in range(1, 40):
        _, tx = protocol.device_step(model, b"", 5000.0 + tick * dt_ms)
        msgs, _, _ = protocol.decode(tx)
        fired += [m for m in msgs if m.msg_type == protocol.MSG_FAILSAFE_TRIGGERED]
    assert len(fired) == 2


def test_determinism():
    """Identical scenario and config produce byte-identical traces."""
    first = export_trace(run_scenario(REGION_WALK, CFG))
    second = export_trace(run_scenario(REGION_WALK, CFG))
    assert first == second
    assert first.encode("utf-8") == second.encode("utf-8")


def test_desk_scale_performance():
    """Full pipeline on 160x120 synthetic frames sustains >= 300 ticks/s
    single-threaded."""
    walk = Scenario(
        duration_s=20.0,
        events=tuple((float(t), (t % 10) / 10.0) for t in range(0, 20, 2)),
    )
    t0 = time.perf_counter()
    rows = run_scenario(walk, CFG)
    elapsed = time.perf_counter() - t0
    rate = len(rows) / elapsed
    assert rate >= 300.0, f"only {rate:.0f} ticks/s"
    print(f"sustained {rate:.0f} ticks/s")
