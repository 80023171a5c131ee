"""The three camera-based estimators and normal-range classification.

Heart rate comes from the green-channel ROI mean (detrended, normalized,
bandpassed, peak-picked). Respiratory rate tracks the mean intensity of the
sharpest 16x16 block over sliding windows and fuses the per-window dominant
frequencies as the average of their running mean and running max. SpO2 is
the ratio-of-ratios estimate ``A - B * ((std_r/mean_r)/(std_b/mean_b))``
with the red/blue statistics taken per frame after a resize to 320x240,
aggregated by the median.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dsp, roi
from .dsp import TimeSeries
from .errors import EstimationError, SignalError
from .frameio import FrameSequence, resize_bilinear

HR_BAND = (0.75, 4.0)
RR_BAND = (0.1, 0.7)
NORMAL_RANGES = {
    "hr_bpm": (60.0, 100.0),
    "rr_brpm": (12.0, 20.0),
    "spo2_pct": (95.0, 100.0),
}

# Side of the square template block used by the respiratory pipeline.
RR_TEMPLATE_SIDE = 16

SPO2_RESIZE = (320, 240)
SPO2_MIN_FRAMES = 30


@dataclass(frozen=True)
class Spo2Calibration:
    """Intercept/slope pair of the ratio-of-ratios oximetry line."""

    A: float = 100.0
    B: float = 5.0

    def __post_init__(self):
        if not (80 <= self.A <= 110):
            raise EstimationError("calibration intercept out of range [80, 110]")
        if not (0 <= self.B <= 40):
            raise EstimationError("calibration slope out of range [0, 40]")


DEFAULT_CALIBRATION = Spo2Calibration()


def classify(field_name: str, value: float) -> str:
    """Map a vitals value to below_normal / normal / above_normal.

    Boundary values are normal: resting HR 60-100 bpm, RR 12-20 breaths/min,
    SpO2 95-100 percent.
    """
    if field_name not in NORMAL_RANGES:
        raise EstimationError(f"unknown vitals field '{field_name}'")
    if not np.isfinite(value):
        raise EstimationError("value must be finite")
    lo, hi = NORMAL_RANGES[field_name]
    if value < lo:
        return "below_normal"
    if value > hi:
        return "above_normal"
    return "normal"


@dataclass
class VitalsReport:
    """Estimates with per-field confidence and normal-range flag.

    Absent vitals are None and omitted from the serialized form.
    """

    hr_bpm: float | None = None
    rr_brpm: float | None = None
    spo2_pct: float | None = None
    confidence: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {}
        for name in ("hr_bpm", "rr_brpm", "spo2_pct"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        if self.confidence:
            out["confidence"] = dict(self.confidence)
        if self.flags:
            out["flags"] = dict(self.flags)
        return out

    @classmethod
    def single(cls, name: str, value: float, confidence: float) -> "VitalsReport":
        report = cls(confidence={name: confidence}, flags={name: classify(name, value)})
        setattr(report, name, value)
        return report


def estimate_hr(
    seq: FrameSequence,
    roi_mode="auto",
    *,
    detrend_lambda: float | None = None,
    band: tuple[float, float] = HR_BAND,
    window: str = "hamming",
) -> VitalsReport:
    """Heart rate in bpm from the green-channel ROI mean.

    Needs at least 10 s of video and a frame rate covering the band
    (fps >= 2 * band_hi). The smoothing weight defaults to 300 at 30 fps
    and scales proportionally with the frame rate.
    """
    if seq.duration < 10.0:
        raise EstimationError("sequence too short")
    if seq.fps < 2 * band[1]:
        raise EstimationError("frame rate too low for the requested band")
    if detrend_lambda is None:
        detrend_lambda = 300.0 * (seq.fps / 30.0)
    series = roi.extract_series(seq, roi_mode, "g")
    series = dsp.detrend(series, detrend_lambda)
    series = dsp.normalize(series)
    series = dsp.bandpass(series, band[0], band[1])
    try:
        freq, confidence = dsp.dominant_frequency(series, band[0], band[1], window)
    except SignalError as exc:
        raise EstimationError(str(exc)) from exc
    return VitalsReport.single("hr_bpm", 60.0 * freq, confidence)


@dataclass
class RrFusionState:
    """Running mean/max fusion of per-window dominant frequencies."""

    window_len: int
    freqs: list = field(default_factory=list)

    def add(self, freq: float) -> None:
        self.freqs.append(freq)

    @property
    def running_mean(self) -> float:
        return float(np.mean(self.freqs)) if self.freqs else 0.0

    @property
    def running_max(self) -> float:
        return float(np.max(self.freqs)) if self.freqs else 0.0

    @property
    def fused_freq(self) -> float:
        return 0.5 * (self.running_mean + self.running_max)


def _sharpest_block(seq: FrameSequence, side: int) -> tuple[int, int, int]:
    """Top-left corner and side of the frame-0 block with max Laplacian variance.

    Blocks lie on the non-overlapping side x side grid anchored at (0, 0);
    ties go to the first block in row-major order. Frames smaller than one
    block fall back to the whole frame.
    """
    gray = seq.frames[0].pixels.mean(axis=2)
    h, w = gray.shape
    if h < side or w < side:
        return 0, 0, min(h, w)
    lap = (
        -4 * gray[1:-1, 1:-1]
        + gray[:-2, 1:-1]
        + gray[2:, 1:-1]
        + gray[1:-1, :-2]
        + gray[1:-1, 2:]
    )
    padded = np.zeros_like(gray)
    padded[1:-1, 1:-1] = lap
    best = (0, 0)
    best_var = -1.0
    for by in range(0, h - side + 1, side):
        for bx in range(0, w - side + 1, side):
            v = padded[by : by + side, bx : bx + side].var()
            if v > best_var + 1e-12:
                best_var = v
                best = (bx, by)
    return best[0], best[1], side


def estimate_rr(
    seq: FrameSequence,
    *,
    band: tuple[float, float] = RR_BAND,
    window_len_s: float = 10.0,
    hop_s: float = 5.0,
) -> VitalsReport:
    """Respiratory rate in breaths/min from template-block intensity.

    The per-window series is mean/std normalized before the spectrum so the
    DC level cannot leak into the low end of the breathing band.
    """
    if seq.duration < 2 * window_len_s:
        raise EstimationError("sequence too short")
    bx, by, side = _sharpest_block(seq, RR_TEMPLATE_SIDE)
    values = np.empty(len(seq.frames))
    for i, frame in enumerate(seq.frames):
        block = frame.pixels[by : by + side, bx : bx + side]
        values[i] = block.mean(dtype=np.float64)

    n_win = int(round(window_len_s * seq.fps))
    n_hop = max(1, int(round(hop_s * seq.fps)))
    fusion = RrFusionState(window_len=n_win)
    confidences = []
    for start in range(0, values.size - n_win + 1, n_hop):
        chunk = TimeSeries(values[start : start + n_win], seq.fps)
        chunk = dsp.normalize(chunk)
        try:
            freq, conf = dsp.dominant_frequency(chunk, band[0], band[1])
        except SignalError as exc:
            raise EstimationError(str(exc)) from exc
        fusion.add(freq)
        confidences.append(conf)
    rr = 60.0 * fusion.fused_freq
    report = VitalsReport.single("rr_brpm", rr, float(np.mean(confidences)))
    report.fusion = fusion
    return report


def estimate_spo2(seq: FrameSequence, cal: Spo2Calibration = DEFAULT_CALIBRATION) -> VitalsReport:
    """Blood oxygen percentage via the red/blue ratio of ratios.

    Every frame is resized to 320x240, per-frame R is
    (std_r/mean_r)/(std_b/mean_b), the per-frame estimates A - B*R are
    aggregated by the median, and the confidence shrinks with their
    interquartile range.
    """
    if len(seq.frames) < SPO2_MIN_FRAMES:
        raise EstimationError("sequence too short")
    ratios = []
    flat_blue = 0
    for frame in seq.frames:
        frame = resize_bilinear(frame, SPO2_RESIZE[0], SPO2_RESIZE[1])
        stats = roi.channel_stats(frame, roi.BoundingBox(0, 0, frame.width, frame.height))
        if stats.mean_r < 1 or stats.mean_b < 1:
            raise EstimationError("channel too dark")
        if stats.std_b / stats.mean_b < 1e-9:
            flat_blue += 1
            ratios.append(None)
            continue
        ratios.append((stats.std_r / stats.mean_r) / (stats.std_b / stats.mean_b))
    if flat_blue > 0.5 * len(seq.frames):
        raise EstimationError("insufficient AC signal")
    per_frame = np.array([cal.A - cal.B * r for r in ratios if r is not None])
    spo2 = float(np.clip(np.median(per_frame), 0.0, 100.0))
    iqr = float(np.percentile(per_frame, 75) - np.percentile(per_frame, 25))
    confidence = 1.0 - min(1.0, iqr / 5.0)
    return VitalsReport.single("spo2_pct", spo2, confidence)
