"""Region-of-interest selection and per-frame channel statistics.

Three ROI modes: a caller-supplied fixed box, a centered fraction of the
frame, and a skin-color segmentation that boxes the skin pixels. The CLI
string forms are "box:x,y,w,h", "center:0.5" and "auto" (skin).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import TimeSeries
from .errors import FrameError
from .frameio import Frame, FrameSequence

# Explicit RGB skin rule; a pixel is skin when all hold.
SKIN_R_MIN = 95
SKIN_G_MIN = 40
SKIN_B_MIN = 20
SKIN_SPREAD_MIN = 15

# Fraction of skin pixels the segmented box must contain; realized by
# trimming (1 - coverage) / 4 from each side of each axis, so the joint
# coverage is at least `coverage` by the union bound.
SKIN_BOX_COVERAGE = 0.90

# Below this fraction of skin pixels, segmentation falls back to center:0.5.
SKIN_MIN_FRACTION = 0.02


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1 or self.x < 0 or self.y < 0:
            raise FrameError("roi out of bounds")


@dataclass(frozen=True)
class ChannelStats:
    """Per-channel mean and population std over a pixel region (0-255 scale)."""

    mean_r: float
    mean_g: float
    mean_b: float
    std_r: float
    std_g: float
    std_b: float


def parse_roi_mode(mode: str):
    """Parse the CLI mode syntax: "auto", "center:F", "box:x,y,w,h"."""
    if mode == "auto":
        return ("skin",)
    if mode.startswith("center:"):
        try:
            f = float(mode.split(":", 1)[1])
        except ValueError:
            raise FrameError(f"bad center fraction in '{mode}'") from None
        if not 0 < f <= 1:
            raise FrameError("center fraction must be in (0, 1]")
        return ("center", f)
    if mode.startswith("box:"):
        parts = mode.split(":", 1)[1].split(",")
        if len(parts) != 4:
            raise FrameError("box mode needs x,y,w,h")
        try:
            x, y, w, h = (int(p) for p in parts)
        except ValueError:
            raise FrameError(f"bad box coordinates in '{mode}'") from None
        return ("box", BoundingBox(x, y, w, h))
    raise FrameError(f"unknown roi mode '{mode}'")


def _center_box(frame: Frame, fraction: float) -> BoundingBox:
    w = max(1, round(frame.width * fraction))
    h = max(1, round(frame.height * fraction))
    x = (frame.width - w) // 2
    y = (frame.height - h) // 2
    return BoundingBox(x, y, w, h)


def _clip_box(frame: Frame, box: BoundingBox) -> BoundingBox:
    if box.x >= frame.width or box.y >= frame.height:
        raise FrameError("roi out of bounds")
    w = min(box.w, frame.width - box.x)
    h = min(box.h, frame.height - box.y)
    return BoundingBox(box.x, box.y, w, h)


def skin_mask(frame: Frame) -> np.ndarray:
    """Boolean (h, w) mask of pixels passing the RGB skin rule."""
    px = frame.pixels.astype(np.int16)
    r, g, b = px[:, :, 0], px[:, :, 1], px[:, :, 2]
    spread = px.max(axis=2) - px.min(axis=2)
    return (
        (r > SKIN_R_MIN)
        & (g > SKIN_G_MIN)
        & (b > SKIN_B_MIN)
        & (r > g)
        & (r > b)
        & (spread > SKIN_SPREAD_MIN)
    )


def _skin_box(frame: Frame) -> BoundingBox:
    mask = skin_mask(frame)
    total = mask.size
    ys, xs = np.nonzero(mask)
    if xs.size < SKIN_MIN_FRACTION * total:
        return _center_box(frame, 0.5)
    trim = 100.0 * (1.0 - SKIN_BOX_COVERAGE) / 4.0
    x_lo = int(np.floor(np.percentile(xs, trim)))
    x_hi = int(np.ceil(np.percentile(xs, 100.0 - trim)))
    y_lo = int(np.floor(np.percentile(ys, trim)))
    y_hi = int(np.ceil(np.percentile(ys, 100.0 - trim)))
    return BoundingBox(x_lo, y_lo, x_hi - x_lo + 1, y_hi - y_lo + 1)


def detect_roi(frame: Frame, mode) -> BoundingBox:
    """Resolve an ROI mode against a frame.

    ``mode`` may be a BoundingBox (fixed box, clipped to the frame), a mode
    string per parse_roi_mode, or an already-parsed tuple.
    """
    if isinstance(mode, BoundingBox):
        return _clip_box(frame, mode)
    if isinstance(mode, str):
        mode = parse_roi_mode(mode)
    kind = mode[0]
    if kind == "box":
        return _clip_box(frame, mode[1])
    if kind == "center":
        return _center_box(frame, mode[1])
    if kind == "skin":
        return _skin_box(frame)
    raise FrameError(f"unknown roi mode '{kind}'")


def channel_stats(frame: Frame, box: BoundingBox) -> ChannelStats:
    """Mean and population std of each channel over exactly the box's pixels."""
    if box.x + box.w > frame.width or box.y + box.h > frame.height:
        raise FrameError("roi out of bounds")
    region = frame.pixels[box.y : box.y + box.h, box.x : box.x + box.w].astype(np.float64)
    means = region.mean(axis=(0, 1))
    stds = region.std(axis=(0, 1))
    return ChannelStats(
        mean_r=float(means[0]),
        mean_g=float(means[1]),
        mean_b=float(means[2]),
        std_r=float(stds[0]),
        std_g=float(stds[1]),
        std_b=float(stds[2]),
    )


def extract_series(seq: FrameSequence, mode, channel: str) -> TimeSeries:
    """Per-frame ROI mean of one channel as a TimeSeries at the sequence fps.

    The ROI is detected on frame 0 and held fixed for the whole sequence.
    """
    channels = {"r": 0, "g": 1, "b": 2}
    if channel not in channels:
        raise FrameError(f"unknown channel '{channel}'")
    c = channels[channel]
    box = detect_roi(seq.frames[0], mode)
    values = np.empty(len(seq.frames))
    for i, frame in enumerate(seq.frames):
        region = frame.pixels[box.y : box.y + box.h, box.x : box.x + box.w, c]
        values[i] = region.mean(dtype=np.float64)
    return TimeSeries(values, seq.fps)
