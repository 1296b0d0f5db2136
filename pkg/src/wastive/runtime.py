"""Live orchestration: fixed-rate control loop, frame delivery, control
messages, telemetry snapshots.

Concurrency contract: the loop thread owns all pipeline state. A frame
producer fills a capacity-1 mailbox (latest frame wins; a slow camera can
never stall the loop). Control messages queue up and are drained once per
tick, so a parameter change is either fully visible at a tick or not at
all. Telemetry goes out as immutable snapshots.

Tick timing uses the scheduled tick instants (start + k/hz), not wall
readings, so simulated-clock runs are bit-reproducible against the
simulator.
"""

from __future__ import annotations

import queue
import threading
import time
from dataclasses import asdict, dataclass

from .config import RuntimeConfig, apply_override
from .errors import ConfigError
from .pipeline import PipelineEngine, TraceRow
from .simulator import Scenario, synthesize_frame
from .transport import BackoffRetry
from .vision import Frame

MODE_LIVE = "live"
MODE_VIRTUAL = "virtual"


@dataclass(frozen=True)
class TelemetrySnapshot:
    tick: int
    t_s: float
    mode: str
    occupied: bool
    centroid_x: float | None
    activity_ratio: float
    region: int | None
    dwell_ms: float
    base: tuple[float, ...]
    panels: tuple[float, ...]
    angles: tuple[float, ...]
    link_ok: bool
    failsafe: bool

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["type"] = "snapshot"
        d["base"] = list(self.base)
        d["panels"] = list(self.panels)
        d["angles"] = list(self.angles)
        return d


class RealClock:
    def now_ms(self) -> float:
        return time.monotonic() * 1000.0

    def sleep_until(self, t_ms: float) -> None:
        delay = (t_ms - self.now_ms()) / 1000.0
        if delay > 0:
            time.sleep(delay)


class SimulatedClock:
    """Externally stepped clock; sleep_until just jumps time forward."""

    def __init__(self, start_ms: float = 0.0):
        self._now = start_ms

    def now_ms(self) -> float:
        return self._now

    def sleep_until(self, t_ms: float) -> None:
        if t_ms > self._now:
            self._now = t_ms


class FrameMailbox:
    """Capacity-1 frame slot: producers overwrite, the loop takes latest."""

    def __init__(self):
        self._lock = threading.Lock()
        self._frame: Frame | None = None

    def offer(self, frame: Frame) -> None:
        with self._lock:
            self._frame = frame

    def take(self, now_ms: float) -> Frame | None:
        with self._lock:
            frame, self._frame = self._frame, None
            return frame


class ScenarioFrameSource:
    """Deterministic frame source rendering a scenario's visitor; used to
    drive the live loop with exactly the simulator's inputs."""

    def __init__(self, scenario: Scenario, config: RuntimeConfig):
        self._scenario = scenario
        self._config = config

    def take(self, now_ms: float) -> Frame:
        return synthesize_frame(
            self._scenario.visitor_at(now_ms / 1000.0),
            self._config.frame_width,
            self._config.frame_height,
            timestamp=now_ms,
        )


class _LoopState:
    def __init__(self, config: RuntimeConfig, mode: str):
        self.config = config
        self.mode = mode
        self.virtual_x: float | None = None
        self.stopping = False


def _apply_control(msg: dict, state: _LoopState, engine: PipelineEngine, errors: list):
    kind = msg.get("type")
    if kind == "set_param":
        try:
            new_cfg = apply_override(state.config, msg.get("name", ""), msg.get("value"))
            engine.update_config(new_cfg)
            state.config = new_cfg
        except (ConfigError, ValueError) as exc:
            errors.append(str(exc))
    elif kind == "virtual_visitor":
        x = msg.get("x")
        if x is None or 0.0 <= float(x) <= 1.0:
            state.virtual_x = None if x is None else float(x)
        else:
            errors.append(f"virtual_visitor x {x} outside [0, 1]")
    elif kind == "mode":
        mode = msg.get("mode")
        if mode in (MODE_LIVE, MODE_VIRTUAL):
            state.mode = mode
        else:
            errors.append(f"unknown mode {mode!r}")
    elif kind == "stop":
        state.stopping = True
    else:
        errors.append(f"unknown control message type {kind!r}")


def control_loop(
    config: RuntimeConfig,
    frame_source,
    transport,
    control_channel: "queue.Queue[dict] | None" = None,
    *,
    clock=None,
    stop: threading.Event | None = None,
    max_ticks: int | None = None,
    snapshot_sink=None,
    trace_sink=None,
    prime_frame: Frame | None = None,
    mode: str = MODE_LIVE,
) -> int:
    """Run the pipeline at config.tick_hz until stopped.

    frame_source may be None (dormant loop), a FrameMailbox, or anything
    with take(now_ms) -> Frame | None. Returns the number of ticks
    processed; the last wire frame sent is always the rest pose.
    """
    config.validate()
    clock = clock or RealClock()
    state = _LoopState(config, mode)
    engine = PipelineEngine(config)
    if prime_frame is not None:
        engine.prime_background(prime_frame)
    transport = BackoffRetry(transport)  # pass-through until a write fails

    period_ms = 1000.0 / config.tick_hz
    start_ms = clock.now_ms()
    tick = 0
    errors: list[str] = []

    while True:
        if stop is not None and stop.is_set():
            break
        if state.stopping or (max_ticks is not None and tick >= max_ticks):
            break

        now_ms = start_ms + tick * period_ms

        if control_channel is not None:
            while True:
                try:
                    msg = control_channel.get_nowait()
                except queue.Empty:
                    break
                _apply_control(msg, state, engine, errors)
            if state.stopping:
                break

        if state.mode == MODE_VIRTUAL:
            cfg = state.config
            frame = synthesize_frame(
                state.virtual_x, cfg.frame_width, cfg.frame_height, timestamp=now_ms
            )
        elif frame_source is not None:
            frame = frame_source.take(now_ms)
        else:
            frame = None

        row = engine.tick(frame, now_ms, transport)
        if trace_sink is not None:
            trace_sink(row)
        if snapshot_sink is not None:
            snapshot_sink(_snapshot(row, engine, state))

        tick += 1
        clock.sleep_until(start_ms + tick * period_ms)

    engine.send_rest_pose(transport, start_ms + tick * period_ms)
    return tick


def _snapshot(row: TraceRow, engine: PipelineEngine, state: _LoopState) -> TelemetrySnapshot:
    obs = engine.last_obs
    return TelemetrySnapshot(
        tick=row.tick,
        t_s=row.t_s,
        mode=state.mode,
        occupied=row.occupied,
        centroid_x=row.centroid_x,
        activity_ratio=obs.activity_ratio if obs is not None else 0.0,
        region=row.region,
        dwell_ms=row.dwell_ms,
        base=row.base,
        panels=row.panels,
        angles=row.angles,
        link_ok=engine.link_ok,
        failsafe=row.failsafe,
    )
