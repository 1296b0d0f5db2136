"""The per-tick sensing-to-serial pipeline, shared by simulator and runtime.

One PipelineEngine.tick() is the whole host-side story for one timestep:
frame -> presence -> debounced region/dwell -> wave step -> panel render ->
angles (slewed) -> pulses -> one wire frame out, device replies in. The
simulator drives it from a scripted clock and the live loop drives it
from a real one; both therefore agree field-for-field on identical input,
which is what makes the loopback trace a trustworthy stand-in for the
physical installation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import protocol, vision
from .actuation import angle_to_pulse, height_to_angle, slew_limit
from .config import RuntimeConfig
from .occupancy import VACANT, OccupancyState, update_occupancy
from .vision import BackgroundModel, Frame, PresenceObservation
from .wave import WaveState, render_profile, step_wave

# angles closer than this to the last transmitted set are "unchanged" and
# only a heartbeat is sent to keep the device watchdog fed
IDLE_ANGLE_EPS = 0.1


@dataclass(frozen=True)
class TraceRow:
    tick: int
    t_s: float
    occupied: bool
    centroid_x: float | None
    region: int | None
    dwell_ms: float
    base: tuple[float, ...]
    panels: tuple[float, ...]
    angles: tuple[float, ...]
    tx_bytes: int
    failsafe: bool


class PipelineEngine:
    """Mutable per-installation pipeline state plus the tick step."""

    def __init__(self, config: RuntimeConfig):
        self.config = config
        self.background: BackgroundModel | None = None
        self.occ: OccupancyState = VACANT
        self.wave: WaveState = WaveState.zeros(config.n_regions)
        self.prev_angles: list[float] = config.rest_angles()
        self.last_sent_angles: list[float] | None = None
        self.seq = 0
        self.tick_count = 0
        self.link_ok = True
        self.device_failsafe = False
        self.last_obs: PresenceObservation | None = None
        self._rx_buffer = b""

    def prime_background(self, frame: Frame) -> None:
        """Seed the background model, normally with an empty-scene frame."""
        self.background = vision.init_background(frame)

    def update_config(self, config: RuntimeConfig) -> None:
        """Swap tunable parameters between ticks (structure must not change)."""
        if (
            config.n_regions != self.config.n_regions
            or config.m_panels != self.config.m_panels
        ):
            raise ValueError("n_regions/m_panels cannot change on a running pipeline")
        self.config = config

    def _observe(self, frame: Frame | None, now_ms: float) -> PresenceObservation:
        if frame is None:
            return PresenceObservation(
                occupied=False, centroid_x=None, activity_ratio=0.0, timestamp=now_ms
            )
        if self.background is None:
            self.prime_background(frame)
        v = self.config.vision
        obs = vision.detect_presence(
            self.background, frame, v.diff_threshold, v.min_activity
        )
        self.background = vision.update_background(self.background, frame, v.alpha)
        return obs

    def _next_seq(self) -> int:
        s = self.seq
        self.seq = (self.seq + 1) & 0xFF
        return s

    def tick(self, frame: Frame | None, now_ms: float, transport) -> TraceRow:
        cfg = self.config
        dt = cfg.dt

        obs = self._observe(frame, now_ms)
        self.last_obs = obs
        region = (
            vision.quantize_region(obs.centroid_x, cfg.n_regions)
            if obs.occupied
            else None
        )
        self.occ = update_occupancy(self.occ, obs.occupied, region, now_ms, cfg.occupancy)
        self.wave = step_wave(self.wave, self.occ.current_region, dt, cfg.wave)
        panels = render_profile(self.wave, cfg.m_panels, cfg.wave)

        targets = [height_to_angle(h, c) for h, c in zip(panels, cfg.servos)]
        angles = slew_limit(self.prev_angles, targets, dt, cfg.limits)
        self.prev_angles = angles

        if self.last_sent_angles is not None and all(
            abs(a - s) <= IDLE_ANGLE_EPS for a, s in zip(angles, self.last_sent_angles)
        ):
            data = protocol.encode(protocol.MSG_HEARTBEAT, self._next_seq())
        else:
            pulses = [angle_to_pulse(a, c) for a, c in zip(angles, cfg.servos)]
            data = protocol.encode(
                protocol.MSG_SET_TARGETS, self._next_seq(), protocol.pack_pulses(pulses)
            )
            self.last_sent_angles = list(angles)

        self.link_ok = bool(transport.write(data, now_ms))
        self._ingest(transport.poll(now_ms))

        tick = self.tick_count
        self.tick_count += 1
        return TraceRow(
            tick=tick,
            t_s=now_ms / 1000.0,
            occupied=obs.occupied,
            centroid_x=obs.centroid_x,
            region=self.occ.current_region,
            dwell_ms=self.occ.dwell_ms,
            base=self.wave.base,
            panels=panels,
            angles=tuple(angles),
            tx_bytes=len(data),
            failsafe=self.device_failsafe,
        )

    def _ingest(self, rx: bytes) -> None:
        if rx:
            self._rx_buffer += rx
        frames, consumed, _ = protocol.decode(self._rx_buffer)
        self._rx_buffer = self._rx_buffer[consumed:]
        for f in frames:
            if f.msg_type == protocol.MSG_ACK:
                self.device_failsafe = False
            elif f.msg_type == protocol.MSG_FAILSAFE_TRIGGERED:
                self.device_failsafe = True

    def send_rest_pose(self, transport, now_ms: float) -> None:
        """Command the fully lowered pose; the loop calls this on shutdown."""
        data = protocol.encode(
            protocol.MSG_SET_TARGETS,
            self._next_seq(),
            protocol.pack_pulses(self.config.rest_pulses()),
        )
        transport.write(data, now_ms)
        self.last_sent_angles = self.config.rest_angles()
