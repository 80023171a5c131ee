"""Synthetic frame sequences with known embedded vitals.

These sequences are the ground-truth oracle for the estimators: a sine on
the green channel at the pulse frequency, a sine on all channels at the
breathing frequency, optional linear brightness drift, optional Gaussian
pixel noise, and (for oximetry) red/blue two-level tilings whose population
std/mean ratio quotient is an exact rational.

Reproducibility contract
------------------------
The noise stream is xoshiro256** seeded via splitmix64, with doubles taken
as ``(word >> 11) * 2**-53`` and Gaussians via Box-Muller on consecutive
doubles: ``r = sqrt(-2*log(1 - u1))``, outputs ``r*cos(2*pi*u2)`` then
``r*sin(2*pi*u2)``. One Gaussian per pixel per frame, row-major, frames in
order, all from a single stream. Any implementation of that recipe
reproduces these sequences byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from .errors import SynthError
from .frameio import Frame, FrameSequence

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_MASK64 = 0xFFFFFFFFFFFFFFFF
_DOUBLE_SCALE = 1.0 / 9007199254740992.0  # 2**-53

# Base level shared by the red/blue oximetry tilings; amplitudes are scaled
# integer multiples of the target ratio's numerator/denominator so the
# std/mean quotient is exact in real arithmetic.
_TILE_BASE = 100


def _splitmix64_init(seed: int) -> np.ndarray:
    """Expand a 64-bit seed into the four xoshiro256** state words."""
    s = seed & _MASK64
    state = np.empty(4, dtype=np.uint64)
    for i in range(4):
        s = (s + 0x9E3779B97F4A7C15) & _MASK64
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        state[i] = z ^ (z >> 31)
    return state


def _fill_gaussians_py(state: np.ndarray, out: np.ndarray) -> None:
    s0, s1, s2, s3 = (int(x) for x in state)
    n = out.size
    i = 0
    while i < n:
        pair = []
        for _ in range(2):
            result = ((s1 * 5) & _MASK64)
            result = (((result << 7) | (result >> 57)) & _MASK64)
            result = (result * 9) & _MASK64
            t = (s1 << 17) & _MASK64
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
            pair.append((result >> 11) * _DOUBLE_SCALE)
        u1, u2 = pair
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        out[i] = r * math.cos(2.0 * math.pi * u2)
        if i + 1 < n:
            out[i + 1] = r * math.sin(2.0 * math.pi * u2)
        i += 2
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3


if _HAVE_NUMBA:

    @njit(cache=True)
    def _fill_gaussians_jit(state, out):  # pragma: no cover - exercised via wrapper
        s0, s1, s2, s3 = state[0], state[1], state[2], state[3]
        n = out.size
        i = 0
        while i < n:
            u = np.empty(2)
            for j in range(2):
                result = s1 * np.uint64(5)
                result = (result << np.uint64(7)) | (result >> np.uint64(57))
                result = result * np.uint64(9)
                t = s1 << np.uint64(17)
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
                u[j] = np.float64(result >> np.uint64(11)) * _DOUBLE_SCALE
            r = math.sqrt(-2.0 * math.log(1.0 - u[0]))
            out[i] = r * math.cos(2.0 * math.pi * u[1])
            if i + 1 < n:
                out[i + 1] = r * math.sin(2.0 * math.pi * u[1])
            i += 2
        state[0], state[1], state[2], state[3] = s0, s1, s2, s3


class GaussianStream:
    """Deterministic standard-normal stream (xoshiro256** + Box-Muller)."""

    def __init__(self, seed: int):
        self._state = _splitmix64_init(seed)

    def draw(self, n: int) -> np.ndarray:
        out = np.empty(n)
        if n == 0:
            return out
        if _HAVE_NUMBA:
            _fill_gaussians_jit(self._state, out)
        else:
            _fill_gaussians_py(self._state, out)
        return out


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic sequence; absent signals are None."""

    width: int
    height: int
    fps: float
    duration: float
    hr_freq: float | None = None
    hr_amp: float = 0.0
    rr_freq: float | None = None
    rr_amp: float = 0.0
    spo2_ratio_R: float | None = None
    base_color: tuple[int, int, int] = (128, 128, 128)
    noise_sigma: float = 0.0
    drift_per_s: float = 0.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise SynthError("frame dimensions must be at least 1x1")
        if self.fps <= 0:
            raise SynthError("fps must be positive")
        if self.fps * self.duration < 4:
            raise SynthError("sequence must span at least 4 frames")
        if self.hr_freq is not None and not (0.5 < self.hr_freq < 4.5):
            raise SynthError("pulse frequency must lie in (0.5, 4.5) Hz")
        if self.rr_freq is not None and not (0.05 < self.rr_freq < 1.0):
            raise SynthError("breathing frequency must lie in (0.05, 1.0) Hz")
        if self.hr_amp < 0 or self.rr_amp < 0 or self.noise_sigma < 0:
            raise SynthError("amplitudes must be nonnegative")
        object.__setattr__(self, "base_color", tuple(int(c) for c in self.base_color))

    @property
    def n_frames(self) -> int:
        return int(round(self.fps * self.duration))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["base_color"] = list(self.base_color)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SynthSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise SynthError(f"unknown spec fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "SynthSpec":
        return cls.from_dict(json.loads(text))


def _ratio_tilings(ratio: float, n_pixels: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat red/blue pixel fields whose std/mean ratio quotient is `ratio`.

    Each field is two-level (half the pixels at base-d, half at base+d) so
    mean = base and population std = d exactly; the quotient then reduces
    to d_red/d_blue, realized as an integer rationalization of the target.
    """
    if ratio <= 0:
        raise SynthError("oximetry ratio must be positive")
    if n_pixels % 2 != 0:
        raise SynthError("oximetry tiling needs an even pixel count")
    frac = Fraction(ratio).limit_denominator(1000)
    p, q = frac.numerator, frac.denominator
    scale = min(_TILE_BASE, 255 - _TILE_BASE) // max(p, q)
    if scale < 1:
        raise SynthError("oximetry ratio not representable in 8-bit levels")
    d_red, d_blue = p * scale, q * scale

    def field(d: int) -> np.ndarray:
        vals = np.full(n_pixels, _TILE_BASE, dtype=np.float64)
        vals[1::2] += d
        vals[0::2] -= d
        return vals

    return field(d_red), field(d_blue)


def generate(spec: SynthSpec, seed: int) -> FrameSequence:
    """Render the sequence described by `spec`, deterministically in `seed`."""
    n = spec.n_frames
    h, w = spec.height, spec.width
    times = np.arange(n) / spec.fps
    hr_wave = spec.hr_amp * np.sin(2 * np.pi * spec.hr_freq * times) if spec.hr_freq else np.zeros(n)
    rr_wave = spec.rr_amp * np.sin(2 * np.pi * spec.rr_freq * times) if spec.rr_freq else np.zeros(n)
    drift = spec.drift_per_s * times
    base = np.asarray(spec.base_color, dtype=np.float64)

    noise = None
    if spec.noise_sigma > 0:
        stream = GaussianStream(seed)
        noise = spec.noise_sigma * stream.draw(n * h * w).reshape(n, h, w)

    tile_red = tile_blue = None
    if spec.spo2_ratio_R is not None:
        tile_red, tile_blue = _ratio_tilings(spec.spo2_ratio_R, h * w)
        tile_red = tile_red.reshape(h, w)
        tile_blue = tile_blue.reshape(h, w)

    frames = []
    clipped = 0
    for i in range(n):
        values = np.empty((h, w, 3))
        values[:, :] = base
        values[:, :, 1] += hr_wave[i]
        values += rr_wave[i] + drift[i]
        if noise is not None:
            values += noise[i][:, :, np.newaxis]
        if tile_red is not None:
            values[:, :, 0] = tile_red
            values[:, :, 2] = tile_blue
        rounded = np.floor(values + 0.5)
        clipped += int(np.count_nonzero((rounded < 0) | (rounded > 255)))
        frames.append(Frame(np.clip(rounded, 0, 255).astype(np.uint8)))

    if clipped > 0.01 * n * h * w * 3:
        raise SynthError("amplitude too large for base color")
    return FrameSequence(tuple(frames), spec.fps, source_id=f"synth-{seed}")


def ground_truth(spec: SynthSpec, cal=None) -> dict:
    """Expected estimator outputs for `spec`.

    `cal` is anything with A and B attributes (an oximetry calibration);
    when given and `spec` carries an oximetry ratio, the expected SpO2 is
    included using the exact rational realization of that ratio.
    """
    truth = {}
    if spec.hr_freq is not None:
        truth["hr_bpm"] = 60.0 * spec.hr_freq
    if spec.rr_freq is not None:
        truth["rr_brpm"] = 60.0 * spec.rr_freq
    if spec.spo2_ratio_R is not None and cal is not None:
        realized = Fraction(spec.spo2_ratio_R).limit_denominator(1000)
        truth["spo2_pct"] = float(cal.A - cal.B * float(realized))
    return truth
