"""Presence sensing from grayscale frames.

A running per-pixel background model (exponential moving average) plus
frame differencing yields an occupied/vacant flag and the normalized
horizontal centroid of whatever differs from the background. The centroid
is then quantized into one of n horizontal regions; region 1 is the
second region from the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIN_DIM = 8


@dataclass(frozen=True)
class Frame:
    """One grayscale camera frame, row-major, luma 0..255."""

    width: int
    height: int
    pixels: np.ndarray  # uint8, flat, length width*height
    timestamp: float  # ms, monotonic within a stream

    def __post_init__(self):
        if self.width < MIN_DIM or self.height < MIN_DIM:
            raise ValueError(
                f"frame must be at least {MIN_DIM}x{MIN_DIM}, got {self.width}x{self.height}"
            )
        px = np.asarray(self.pixels)
        if px.size != self.width * self.height:
            raise ValueError(
                f"pixel count {px.size} != width*height {self.width * self.height}"
            )
        if px.dtype != np.uint8:
            if np.any((px < 0) | (px > 255)):
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px.reshape(-1))
        if self.timestamp < 0:
            raise ValueError("timestamp must be non-negative")


@dataclass
class BackgroundModel:
    """Per-pixel running mean of the scene without an audience."""

    width: int
    height: int
    mean: np.ndarray  # float64, flat, values in [0, 255]
    alpha: float = 0.02

    def copy(self) -> "BackgroundModel":
        return BackgroundModel(self.width, self.height, self.mean.copy(), self.alpha)


@dataclass(frozen=True)
class PresenceObservation:
    """The spatial data handed downstream: occupancy plus where."""

    occupied: bool
    centroid_x: float | None  # in [0, 1], None when vacant
    activity_ratio: float
    timestamp: float

    def __post_init__(self):
        if self.occupied and not (
            self.centroid_x is not None and 0.0 <= self.centroid_x <= 1.0
        ):
            raise ValueError("occupied observation needs centroid_x in [0, 1]")
        if not 0.0 <= self.activity_ratio <= 1.0:
            raise ValueError("activity_ratio must lie in [0, 1]")


def init_background(frame: Frame) -> BackgroundModel:
    """Start the background model as an exact copy of one frame."""
    return BackgroundModel(
        width=frame.width,
        height=frame.height,
        mean=frame.pixels.astype(np.float64),
    )


def update_background(model: BackgroundModel, frame: Frame, alpha: float) -> BackgroundModel:
    """Blend one frame into the model: mean' = (1-alpha)*mean + alpha*pixel."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if (frame.width, frame.height) != (model.width, model.height):
        raise ValueError(
            f"frame {frame.width}x{frame.height} does not match model "
            f"{model.width}x{model.height}"
        )
    mean = (1.0 - alpha) * model.mean + alpha * frame.pixels.astype(np.float64)
    return BackgroundModel(model.width, model.height, mean, alpha)


def detect_presence(
    model: BackgroundModel,
    frame: Frame,
    diff_threshold: float,
    min_activity: float,
) -> PresenceObservation:
    """Threshold |frame - background| and report occupancy and centroid.

    Foreground mask: pixels whose absolute difference from the model mean
    strictly exceeds diff_threshold. activity_ratio is the mask fraction;
    the frame counts as occupied when it reaches min_activity. The
    centroid uses pixel centers (col + 0.5) so a symmetric blob maps to
    its geometric middle.
    """
    if not 0.0 < diff_threshold < 255.0:
        raise ValueError(f"diff_threshold must lie in (0, 255), got {diff_threshold}")
    if not 0.0 < min_activity < 1.0:
        raise ValueError(f"min_activity must lie in (0, 1), got {min_activity}")
    if (frame.width, frame.height) != (model.width, model.height):
        raise ValueError(
            f"frame {frame.width}x{frame.height} does not match model "
            f"{model.width}x{model.height}"
        )

    diff = np.abs(frame.pixels.astype(np.float64) - model.mean)
    mask = diff > diff_threshold
    n_fg = int(np.count_nonzero(mask))
    total = model.width * model.height
    activity = n_fg / total

    occupied = activity >= min_activity
    centroid = None
    if occupied:
        # column index of each flat pixel; sum over mask only
        per_col = mask.reshape(model.height, model.width).sum(axis=0)
        cols = np.arange(model.width, dtype=np.float64) + 0.5
        centroid = float(np.dot(per_col, cols) / (n_fg * model.width))
    return PresenceObservation(
        occupied=occupied,
        centroid_x=centroid,
        activity_ratio=activity,
        timestamp=frame.timestamp,
    )


def quantize_region(centroid_x: float, n_regions: int) -> int:
    """Map a normalized x position to a 0-based region index.

    Index 1 is the second region from the left; x = 1.0 clamps into the
    last region.
    """
    if not 0.0 <= centroid_x <= 1.0:
        raise ValueError(f"centroid_x must lie in [0, 1], got {centroid_x}")
    if n_regions < 2:
        raise ValueError(f"n_regions must be >= 2, got {n_regions}")
    return min(int(centroid_x * n_regions), n_regions - 1)


# -- PGM fixture I/O ---------------------------------------------------------
# Binary portable graymap (P5, maxval 255) is the on-disk frame format for
# test fixtures and the `run --frames` source.


def write_pgm(path, frame: Frame) -> None:
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(frame.pixels.tobytes())


def read_pgm(path, timestamp: float = 0.0) -> Frame:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    # header = magic, width, height, maxval; whitespace separated with
    # optional '#' comment lines
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    width, height, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 supported, got {maxval}")
    pixels = np.frombuffer(data[pos : pos + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise ValueError(f"{path}: truncated pixel data")
    return Frame(width=width, height=height, pixels=pixels.copy(), timestamp=timestamp)
