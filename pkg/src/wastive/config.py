"""Runtime configuration: JSON text in, validated dataclasses out.

The config document is plain JSON so a typo fails loudly: unknown keys
are rejected with their full dotted path, and every invariant violation
names the offending field. An empty document yields the full defaults.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .actuation import ActuatorLimits, ServoCalibration
from .errors import ConfigError
from .occupancy import OccupancyParams
from .wave import WaveParams

SCHEMA_VERSION = 1

TICK_HZ_MIN = 10
TICK_HZ_MAX = 120


@dataclass(frozen=True)
class VisionParams:
    # alpha absorbs a still visitor into the background over ~2-4 s; the
    # threshold must sit low enough that absorption does not out-race the
    # occupancy vacancy timeout during a normal gallery dwell
    alpha: float = 0.02  # background learning rate per frame, at 30 Hz
    diff_threshold: float = 20.0
    min_activity: float = 0.02

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"vision.alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.diff_threshold < 255.0:
            raise ValueError(
                f"vision.diff_threshold must lie in (0, 255), got {self.diff_threshold}"
            )
        if not 0.0 < self.min_activity < 1.0:
            raise ValueError(
                f"vision.min_activity must lie in (0, 1), got {self.min_activity}"
            )


@dataclass(frozen=True)
class TransportSpec:
    kind: str = "loopback"  # loopback | serial | file
    path: str = ""
    baud: int = 115200


@dataclass(frozen=True)
class TelemetrySpec:
    host: str = "127.0.0.1"
    port: int = 8765


@dataclass(frozen=True)
class RuntimeConfig:
    tick_hz: float = 30.0
    n_regions: int = 4
    m_panels: int = 8
    frame_width: int = 160
    frame_height: int = 120
    vision: VisionParams = field(default_factory=VisionParams)
    occupancy: OccupancyParams = field(default_factory=OccupancyParams)
    wave: WaveParams = field(default_factory=WaveParams)
    servos: tuple[ServoCalibration, ...] = ()
    limits: ActuatorLimits = field(default_factory=ActuatorLimits)
    transport: TransportSpec = field(default_factory=TransportSpec)
    telemetry: TelemetrySpec = field(default_factory=TelemetrySpec)

    def __post_init__(self):
        if not self.servos:
            object.__setattr__(
                self, "servos", tuple(ServoCalibration() for _ in range(self.m_panels))
            )

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_hz

    def validate(self) -> "RuntimeConfig":
        if not TICK_HZ_MIN <= self.tick_hz <= TICK_HZ_MAX:
            raise ConfigError(
                f"tick_hz must lie in [{TICK_HZ_MIN}, {TICK_HZ_MAX}], got {self.tick_hz}"
            )
        if self.n_regions < 2:
            raise ConfigError(f"n_regions must be >= 2, got {self.n_regions}")
        if self.m_panels < self.n_regions:
            raise ConfigError(
                f"m_panels ({self.m_panels}) must be >= n_regions ({self.n_regions})"
            )
        if self.frame_width < 8 or self.frame_height < 8:
            raise ConfigError(
                f"frame size must be at least 8x8, got "
                f"{self.frame_width}x{self.frame_height}"
            )
        if len(self.servos) != self.m_panels:
            raise ConfigError(
                f"servos list has {len(self.servos)} entries, m_panels is {self.m_panels}"
            )
        if self.transport.kind not in ("loopback", "serial", "file"):
            raise ConfigError(
                f"transport.type must be loopback|serial|file, got {self.transport.kind!r}"
            )
        if self.transport.kind in ("serial", "file") and not self.transport.path:
            raise ConfigError(f"transport.path required for {self.transport.kind}")
        try:
            self.wave.check_stability(self.dt)
        except ConfigError as exc:
            raise ConfigError(f"wave.coupling: {exc}") from None
        return self

    def rest_pulses(self) -> list[int]:
        """Pulse widths of the fully lowered panel (height 0 on every servo)."""
        from .actuation import angle_to_pulse, height_to_angle

        return [angle_to_pulse(height_to_angle(0.0, c), c) for c in self.servos]

    def rest_angles(self) -> list[float]:
        from .actuation import height_to_angle

        return [height_to_angle(0.0, c) for c in self.servos]


def _section(cls, data, path, renames=None):
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must be an object")
    renames = renames or {}
    fields = {f.name for f in cls.__dataclass_fields__.values()}
    kwargs = {}
    for key, value in data.items():
        name = renames.get(key, key)
        if name not in fields:
            raise ConfigError(f"unknown key {path}.{key}")
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def load_config(document: str) -> RuntimeConfig:
    """Parse and validate a JSON config document.

    Omitted fields take defaults; an empty or whitespace-only document is
    the all-defaults config. Unknown keys anywhere are an error.
    """
    text = document.strip()
    if not text:
        data = {}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    return config_from_dict(data)


def config_from_dict(data: dict) -> RuntimeConfig:
    data = dict(data)
    version = data.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")

    top_fields = {
        "tick_hz", "n_regions", "m_panels", "frame_width", "frame_height",
        "vision", "occupancy", "wave", "servos", "limits", "transport", "telemetry",
    }
    for key in data:
        if key not in top_fields:
            raise ConfigError(f"unknown key {key}")

    kwargs: dict = {}
    for key in ("tick_hz", "n_regions", "m_panels", "frame_width", "frame_height"):
        if key in data:
            kwargs[key] = data[key]
    if "vision" in data:
        kwargs["vision"] = _section(VisionParams, data["vision"], "vision")
    if "occupancy" in data:
        kwargs["occupancy"] = _section(OccupancyParams, data["occupancy"], "occupancy")
    if "wave" in data:
        kwargs["wave"] = _section(WaveParams, data["wave"], "wave")
    if "limits" in data:
        kwargs["limits"] = _section(ActuatorLimits, data["limits"], "limits")
    if "transport" in data:
        kwargs["transport"] = _section(
            TransportSpec, data["transport"], "transport", renames={"type": "kind"}
        )
    if "telemetry" in data:
        kwargs["telemetry"] = _section(TelemetrySpec, data["telemetry"], "telemetry")
    if "servos" in data:
        if not isinstance(data["servos"], list):
            raise ConfigError("servos must be a list")
        kwargs["servos"] = tuple(
            _section(ServoCalibration, entry, f"servos[{i}]")
            for i, entry in enumerate(data["servos"])
        )

    try:
        config = RuntimeConfig(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    return config.validate()


def apply_override(config: RuntimeConfig, name: str, value) -> RuntimeConfig:
    """Set one dotted parameter (e.g. "wave.rise_rate") on a config copy.

    Only the live-tunable sections are reachable. Raises ConfigError for
    unknown names or invariant-violating values, leaving the input as-is.
    """
    parts = name.split(".")
    sections = {"wave": WaveParams, "occupancy": OccupancyParams, "vision": VisionParams}
    if len(parts) != 2 or parts[0] not in sections:
        raise ConfigError(f"unknown parameter {name!r}")
    section, fname = parts
    cls = sections[section]
    if fname not in cls.__dataclass_fields__:
        raise ConfigError(f"unknown parameter {name!r}")
    try:
        updated = replace(getattr(config, section), **{fname: value})
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{name}: {exc}") from None
    return replace(config, **{section: updated}).validate()


def config_to_dict(config: RuntimeConfig) -> dict:
    """Round-trippable plain-dict form (used by `calibrate` output and docs)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "tick_hz": config.tick_hz,
        "n_regions": config.n_regions,
        "m_panels": config.m_panels,
        "frame_width": config.frame_width,
        "frame_height": config.frame_height,
        "vision": vars(config.vision).copy(),
        "occupancy": vars(config.occupancy).copy(),
        "wave": vars(config.wave).copy(),
        "servos": [vars(s).copy() for s in config.servos],
        "limits": vars(config.limits).copy(),
        "transport": {
            "type": config.transport.kind,
            "path": config.transport.path,
            "baud": config.transport.baud,
        },
        "telemetry": vars(config.telemetry).copy(),
    }
