"""Debounced region occupancy and dwell accounting.

Raw per-frame observations flicker at region borders and drop out when a
still visitor fades into the background model. This module turns them
into a stable signal: a region switch commits only after the same new
region has been the candidate for debounce_ms, and presence is cleared
only after vacancy_timeout_ms without an occupied observation.

Dwell grows by the time between consecutive occupied observations of the
current region. A short unoccupied gap (below the vacancy timeout) does
not clear the region, and the gap is credited to dwell once the visitor
is seen again: the mask flickered, the visitor never left.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class OccupancyParams:
    debounce_ms: float = 300.0
    vacancy_timeout_ms: float = 1500.0

    def __post_init__(self):
        if self.debounce_ms <= 0:
            raise ValueError(f"debounce_ms must be > 0, got {self.debounce_ms}")
        if self.vacancy_timeout_ms <= 0:
            raise ValueError(
                f"vacancy_timeout_ms must be > 0, got {self.vacancy_timeout_ms}"
            )


@dataclass(frozen=True)
class OccupancyState:
    current_region: int | None = None
    dwell_ms: float = 0.0
    candidate_region: int | None = None
    candidate_since_ms: float = 0.0
    last_occupied_ms: float = 0.0


VACANT = OccupancyState()


def update_occupancy(
    state: OccupancyState,
    occupied: bool,
    region: int | None,
    now: float,
    params: OccupancyParams,
) -> OccupancyState:
    """Advance the occupancy state by one observation.

    `region` must be present whenever `occupied` is true (it is the
    quantized centroid). `now` must not run backwards relative to the
    timestamps already in the state.
    """
    if now < state.last_occupied_ms or (
        state.candidate_region is not None and now < state.candidate_since_ms
    ):
        raise ValueError(f"non-monotonic timestamp {now}")

    if not occupied:
        if now - state.last_occupied_ms >= params.vacancy_timeout_ms:
            return VACANT
        return state

    if region is None:
        raise ValueError("occupied observation without a region")

    if region == state.current_region:
        dwell = state.dwell_ms + (now - state.last_occupied_ms)
        return replace(
            state,
            dwell_ms=dwell,
            candidate_region=None,
            last_occupied_ms=now,
        )

    if state.candidate_region == region:
        if now - state.candidate_since_ms >= params.debounce_ms:
            return OccupancyState(
                current_region=region,
                dwell_ms=0.0,
                candidate_region=None,
                candidate_since_ms=0.0,
                last_occupied_ms=now,
            )
        return replace(state, last_occupied_ms=now)

    # A differing region restarts the debounce window.
    return replace(
        state,
        candidate_region=region,
        candidate_since_ms=now,
        last_occupied_ms=now,
    )
