"""Per-region wave dynamics and panel-height rendering.

Each region holds a slow "base" height in [0, 1]. Dwell in front of a
region ramps its base up, absence ramps every base down, and an explicit
nearest-neighbor diffusion term lets motion spread sideways so a region
transition reads as a travelling swell rather than a toggle. A render-time
sinusoid (the ripple) modulates panel heights multiplicatively, so the
surface ebbs and flows while anyone is present and is perfectly still
when the base is zero.

The diffusion stencil is explicit, so coupling * dt must stay <= 0.5 or
the update is unstable; that is validated both at config load and at every
step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WaveParams:
    rise_rate: float = 0.25  # height units / s while a region is occupied
    decay_rate: float = 0.15  # height units / s toward dormancy
    coupling: float = 0.8  # 1/s neighbor diffusion coefficient
    ripple_amplitude: float = 0.15
    ripple_frequency: float = 0.4  # Hz
    ripple_wavenumber: float = 0.8  # radians per panel

    def __post_init__(self):
        if self.rise_rate <= 0:
            raise ValueError(f"rise_rate must be > 0, got {self.rise_rate}")
        for name in ("decay_rate", "coupling", "ripple_amplitude",
                     "ripple_frequency", "ripple_wavenumber"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def check_stability(self, dt: float) -> None:
        if self.coupling * dt > 0.5:
            raise ConfigError(
                f"coupling * dt = {self.coupling * dt:.4f} exceeds 0.5; "
                "explicit diffusion would be unstable"
            )


@dataclass(frozen=True)
class WaveState:
    base: tuple[float, ...]  # per-region heights, each in [0, 1]
    phase: float = 0.0  # ripple oscillator phase, [0, 2*pi)
    tick: int = 0

    @staticmethod
    def zeros(n_regions: int) -> "WaveState":
        if n_regions < 2:
            raise ValueError(f"need at least 2 regions, got {n_regions}")
        return WaveState(base=(0.0,) * n_regions)

    @property
    def n_regions(self) -> int:
        return len(self.base)


def step_wave(
    state: WaveState,
    occupied: int | None,
    dt: float,
    params: WaveParams,
) -> WaveState:
    """Advance the base heights by one fixed timestep.

    Update order is fixed: rise the occupied region, decay the rest,
    diffuse with reflective boundaries, clamp. The ripple phase advances
    independently of occupancy.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    params.check_stability(dt)
    n = state.n_regions
    if occupied is not None and not 0 <= occupied < n:
        raise ValueError(f"occupied region {occupied} out of range 0..{n - 1}")

    b = list(state.base)
    for i in range(n):
        if i == occupied:
            b[i] = min(1.0, b[i] + params.rise_rate * dt)
        else:
            b[i] = max(0.0, b[i] - params.decay_rate * dt)

    # explicit diffusion on a snapshot, reflective ends (b[-1]=b[0], b[n]=b[n-1])
    c = params.coupling * dt
    if c > 0.0:
        snap = b[:]
        for i in range(n):
            left = snap[i - 1] if i > 0 else snap[0]
            right = snap[i + 1] if i < n - 1 else snap[n - 1]
            b[i] = snap[i] + c * (left + right - 2.0 * snap[i])

    b = [min(1.0, max(0.0, v)) for v in b]
    phase = math.fmod(state.phase + TWO_PI * params.ripple_frequency * dt, TWO_PI)
    return WaveState(base=tuple(b), phase=phase, tick=state.tick + 1)


def render_profile(state: WaveState, m_panels: int, params: WaveParams) -> tuple[float, ...]:
    """Sample base heights onto m panel positions and add the ripple.

    Base heights live at region centers (i + 0.5) / n; panels sample at
    (j + 0.5) / m by piecewise-linear interpolation (edge values held
    beyond the outermost centers). The ripple scales with the local base,
    so an all-zero base renders an all-zero, dormant profile.
    """
    n = state.n_regions
    if m_panels < n:
        raise ValueError(f"m_panels {m_panels} must be >= n_regions {n}")

    centers = (np.arange(n) + 0.5) / n
    positions = (np.arange(m_panels) + 0.5) / m_panels
    local = np.interp(positions, centers, np.asarray(state.base))

    j = np.arange(m_panels)
    heights = local + params.ripple_amplitude * local * np.sin(
        state.phase + params.ripple_wavenumber * j
    )
    heights = np.clip(heights, 0.0, 1.0)
    return tuple(float(h) for h in heights)
