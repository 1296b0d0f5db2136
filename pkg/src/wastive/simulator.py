"""Deterministic end-to-end simulation from scripted visitor trajectories.

A Scenario is a keyframed walk in front of the installation: waypoints of
(time, normalized x or absent), position linearly interpolated between
consecutive present positions and held after the last one. Each tick the
visitor is rendered into a synthetic frame, pushed through the whole
pipeline against the in-process device model, and logged as one TraceRow.
Identical scenario + config means byte-identical exported traces.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field, replace

import numpy as np

from .config import RuntimeConfig, apply_override
from .errors import ConfigError
from .pipeline import PipelineEngine, TraceRow
from .transport import LoopbackTransport
from .vision import Frame

SCENARIO_SCHEMA_VERSION = 1

BG_LUMA = 30
BLOB_LUMA = 220
BLOB_WIDTH_FRAC = 0.15


@dataclass(frozen=True)
class Scenario:
    duration_s: float
    tick_hz: float = 30.0
    events: tuple[tuple[float, float | None], ...] = ()
    param_overrides: dict = field(default_factory=dict)
    seed: int = 0
    noise_luma: int = 0  # uniform +-noise injected per pixel when > 0

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError(f"duration_s must be > 0, got {self.duration_s}")
        last_t = None
        for t, x in self.events:
            if last_t is not None and t <= last_t:
                raise ValueError(f"event times must be strictly increasing (t={t})")
            last_t = t
            if x is not None and not 0.0 <= x <= 1.0:
                raise ValueError(f"event position {x} outside [0, 1]")
        if self.noise_luma < 0:
            raise ValueError("noise_luma must be >= 0")

    def visitor_at(self, t: float) -> float | None:
        """Position at time t: absent before the first waypoint, linear
        between consecutive present positions, held after the last."""
        events = self.events
        if not events or t < events[0][0]:
            return None
        for i, (t_i, x_i) in enumerate(events):
            is_last = i == len(events) - 1
            if is_last or t < events[i + 1][0]:
                if t < t_i:  # pragma: no cover - guarded by the scan order
                    return None
                if x_i is None:
                    return None
                if is_last:
                    return x_i
                t_next, x_next = events[i + 1]
                if x_next is None:
                    return x_i
                frac = (t - t_i) / (t_next - t_i)
                return x_i + frac * (x_next - x_i)
        return None


def load_scenario(document: str) -> Scenario:
    """Parse the JSON scenario format (see README for the schema)."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"scenario parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(data, dict):
        raise ConfigError("scenario document must be a JSON object")
    data = dict(data)
    version = data.pop("schema_version", SCENARIO_SCHEMA_VERSION)
    if version != SCENARIO_SCHEMA_VERSION:
        raise ConfigError(f"unsupported scenario schema_version {version}")
    allowed = {"duration_s", "tick_hz", "events", "param_overrides", "seed", "noise_luma"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"unknown scenario key {key}")
    events = []
    for i, entry in enumerate(data.get("events", [])):
        if not isinstance(entry, dict) or "t" not in entry:
            raise ConfigError(f"events[{i}] must be an object with a 't' field")
        extra = set(entry) - {"t", "x"}
        if extra:
            raise ConfigError(f"unknown key events[{i}].{extra.pop()}")
        events.append((float(entry["t"]), entry.get("x")))
    try:
        return Scenario(
            duration_s=data["duration_s"],
            tick_hz=data.get("tick_hz", 30.0),
            events=tuple(events),
            param_overrides=data.get("param_overrides", {}),
            seed=data.get("seed", 0),
            noise_luma=data.get("noise_luma", 0),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"incomplete scenario: {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def synthesize_frame(
    visitor: float | None,
    width: int,
    height: int,
    timestamp: float = 0.0,
    rng: random.Random | None = None,
    noise_luma: int = 0,
) -> Frame:
    """Flat background with, when present, a bright band centered at x.

    The band is 15% of the frame width, full height, clipped at the
    edges; deterministic unless noise is requested.
    """
    if visitor is not None and not 0.0 <= visitor <= 1.0:
        raise ValueError(f"visitor position {visitor} outside [0, 1]")
    pixels = np.full(height * width, BG_LUMA, dtype=np.uint8)
    if visitor is not None:
        half = max(1, round(BLOB_WIDTH_FRAC * width / 2))
        center = visitor * width
        lo = max(0, int(round(center - half)))
        hi = min(width, int(round(center + half)))
        if hi > lo:
            img = pixels.reshape(height, width)
            img[:, lo:hi] = BLOB_LUMA
    if noise_luma > 0 and rng is not None:
        noise = np.array(
            [rng.randint(-noise_luma, noise_luma) for _ in range(pixels.size)],
            dtype=np.int16,
        )
        pixels = np.clip(pixels.astype(np.int16) + noise, 0, 255).astype(np.uint8)
    return Frame(width=width, height=height, pixels=pixels, timestamp=timestamp)


def apply_scenario_overrides(config: RuntimeConfig, scenario: Scenario) -> RuntimeConfig:
    cfg = replace(config, tick_hz=scenario.tick_hz).validate()
    for name, value in scenario.param_overrides.items():
        cfg = apply_override(cfg, name, value)
    return cfg


def run_scenario(scenario: Scenario, config: RuntimeConfig) -> list[TraceRow]:
    """Execute the full pipeline over the loopback device, one row per tick.

    Rows cover t = 0 .. duration_s inclusive at the scenario's tick rate.
    The background model is primed with an empty-scene frame, the state
    the installation would calibrate at power-on.
    """
    cfg = apply_scenario_overrides(config, scenario)
    period_ms = 1000.0 / cfg.tick_hz

    engine = PipelineEngine(cfg)
    engine.prime_background(
        synthesize_frame(None, cfg.frame_width, cfg.frame_height, timestamp=0.0)
    )
    transport = LoopbackTransport(cfg.rest_pulses())
    rng = random.Random(scenario.seed) if scenario.noise_luma > 0 else None

    n_ticks = int(scenario.duration_s * cfg.tick_hz) + 1
    rows: list[TraceRow] = []
    for tick in range(n_ticks):
        now_ms = tick * period_ms
        frame = synthesize_frame(
            scenario.visitor_at(now_ms / 1000.0),
            cfg.frame_width,
            cfg.frame_height,
            timestamp=now_ms,
            rng=rng,
            noise_luma=scenario.noise_luma,
        )
        rows.append(engine.tick(frame, now_ms, transport))
    return rows


# -- trace CSV ---------------------------------------------------------------


def _trace_header(n_regions: int, m_panels: int) -> list[str]:
    return (
        ["tick", "t_s", "occupied", "centroid_x", "region", "dwell_ms"]
        + [f"base_{i}" for i in range(n_regions)]
        + [f"panel_{j}" for j in range(m_panels)]
        + [f"angle_{j}" for j in range(m_panels)]
        + ["tx_bytes", "failsafe"]
    )


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def export_trace(rows: list[TraceRow]) -> str:
    """Render rows as CSV: fixed column order, 6-decimal reals, one line
    per tick. Empty cells stand for absent centroid/region."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    if not rows:
        writer.writerow(_trace_header(0, 0))
        return buf.getvalue()
    writer.writerow(_trace_header(len(rows[0].base), len(rows[0].panels)))
    for r in rows:
        writer.writerow(
            [
                r.tick,
                _fmt(r.t_s),
                int(r.occupied),
                _fmt(r.centroid_x) if r.centroid_x is not None else "",
                r.region if r.region is not None else "",
                _fmt(r.dwell_ms),
            ]
            + [_fmt(b) for b in r.base]
            + [_fmt(p) for p in r.panels]
            + [_fmt(a) for a in r.angles]
            + [r.tx_bytes, int(r.failsafe)]
        )
    return buf.getvalue()


def parse_trace(text: str) -> list[TraceRow]:
    """Read an exported trace back; values round-trip to 1e-6."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty trace document") from None
    n = sum(1 for h in header if h.startswith("base_"))
    m = sum(1 for h in header if h.startswith("panel_"))
    rows = []
    for rec in reader:
        if not rec:
            continue
        fixed = rec[:6]
        base = tuple(float(v) for v in rec[6 : 6 + n])
        panels = tuple(float(v) for v in rec[6 + n : 6 + n + m])
        angles = tuple(float(v) for v in rec[6 + n + m : 6 + n + 2 * m])
        tx_bytes, failsafe = rec[6 + n + 2 * m :]
        rows.append(
            TraceRow(
                tick=int(fixed[0]),
                t_s=float(fixed[1]),
                occupied=bool(int(fixed[2])),
                centroid_x=float(fixed[3]) if fixed[3] else None,
                region=int(fixed[4]) if fixed[4] else None,
                dwell_ms=float(fixed[5]),
                base=base,
                panels=panels,
                angles=angles,
                tx_bytes=int(tx_bytes),
                failsafe=bool(int(failsafe)),
            )
        )
    return rows
