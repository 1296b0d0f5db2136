"""Panel heights to servo angles and pulse widths.

The living-hinge lift is approximated as linear in height over a
calibrated angle window; the calibration endpoints absorb the real
mechanism's nonlinearity. Slew limiting protects the hinge from step
commands, and every pulse is clamped into the calibrated range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

PULSE_FLOOR = 500  # us, absolute servo safety bounds
PULSE_CEIL = 2500


@dataclass(frozen=True)
class ServoCalibration:
    angle_min: float = 0.0  # degrees at height 0 (unless inverted)
    angle_max: float = 60.0
    pulse_min: int = 1000  # us at angle_min
    pulse_max: int = 2000  # us at angle_max
    inverted: bool = False

    def __post_init__(self):
        if not self.angle_min < self.angle_max:
            raise ValueError(
                f"angle_min {self.angle_min} must be < angle_max {self.angle_max}"
            )
        if self.pulse_min == self.pulse_max:
            raise ValueError("pulse_min and pulse_max must differ")
        for p in (self.pulse_min, self.pulse_max):
            if not PULSE_FLOOR <= p <= PULSE_CEIL:
                raise ValueError(
                    f"pulse {p} outside safe range [{PULSE_FLOOR}, {PULSE_CEIL}] us"
                )


@dataclass(frozen=True)
class ActuatorLimits:
    max_speed: float = 120.0  # degrees per second

    def __post_init__(self):
        if self.max_speed <= 0:
            raise ValueError(f"max_speed must be > 0, got {self.max_speed}")


def height_to_angle(h: float, calib: ServoCalibration) -> float:
    """Linear map of a [0, 1] height into the calibrated angle window."""
    if not 0.0 <= h <= 1.0:
        raise ValueError(f"height must lie in [0, 1], got {h}")
    span = calib.angle_max - calib.angle_min
    if calib.inverted:
        return calib.angle_max - h * span
    return calib.angle_min + h * span


def slew_limit(
    prev: Sequence[float],
    target: Sequence[float],
    dt: float,
    limits: ActuatorLimits,
) -> list[float]:
    """Move each angle toward its target, at most max_speed * dt per step."""
    if len(prev) != len(target):
        raise ValueError(f"length mismatch: {len(prev)} vs {len(target)}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    step = limits.max_speed * dt
    out = []
    for p, t in zip(prev, target):
        delta = t - p
        if delta > step:
            delta = step
        elif delta < -step:
            delta = -step
        out.append(p + delta)
    return out


def angle_to_pulse(angle: float, calib: ServoCalibration) -> int:
    """Linear map of a calibrated angle to a pulse width in microseconds.

    Rounds half-up so the mapping is deterministic across platforms, then
    clamps into the calibrated pulse interval (which may be inverted).
    """
    if not calib.angle_min <= angle <= calib.angle_max:
        raise ValueError(
            f"angle {angle} outside calibrated range "
            f"[{calib.angle_min}, {calib.angle_max}]"
        )
    frac = (angle - calib.angle_min) / (calib.angle_max - calib.angle_min)
    pulse = calib.pulse_min + frac * (calib.pulse_max - calib.pulse_min)
    rounded = math.floor(pulse + 0.5)
    lo = min(calib.pulse_min, calib.pulse_max)
    hi = max(calib.pulse_min, calib.pulse_max)
    return max(lo, min(hi, rounded))
