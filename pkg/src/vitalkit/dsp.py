"""One-dimensional signal operations for the vitals pipelines.

detrend() implements smoothness-priors detrending: the trend t minimizes
``||x - t||^2 + lambda^2 * ||D2 t||^2`` with D2 the second-difference
operator, so the residual keeps the oscillatory content and drops drift.
Spectra are plain windowed DFT magnitudes; dominant_frequency() refines the
in-band peak with parabolic interpolation on log magnitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .errors import SignalError

WINDOWS = ("rectangular", "hamming")

# Magnitudes below this floor count as "no signal" for band searches.
SILENCE_FLOOR = 1e-12


@dataclass(frozen=True)
class TimeSeries:
    """A uniformly sampled real signal with its sample rate in Hz."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1 or s.size < 4:
            raise SignalError("series needs at least 4 samples")
        if self.fs <= 0:
            raise SignalError("sample rate must be positive")
        s = np.ascontiguousarray(s)
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.fs


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum: freqs[k] = k * fs / N for k = 0..N//2."""

    freqs: np.ndarray
    mags: np.ndarray

    def __post_init__(self):
        f = np.ascontiguousarray(np.asarray(self.freqs, dtype=np.float64))
        m = np.ascontiguousarray(np.asarray(self.mags, dtype=np.float64))
        if f.shape != m.shape:
            raise SignalError("freqs and mags must align")
        f.flags.writeable = False
        m.flags.writeable = False
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "mags", m)


def _window(name: str, n: int) -> np.ndarray:
    if name == "rectangular":
        return np.ones(n)
    if name == "hamming":
        return np.hamming(n)
    raise SignalError(f"unknown window '{name}'")


def detrend(x: TimeSeries, lam: float) -> TimeSeries:
    """Remove a smoothness-priors trend, then the residual mean.

    Parameters
    ----------
    x : TimeSeries
        Input signal, length >= 4.
    lam : float
        Smoothing weight; at 0 the trend is the signal itself and the
        residual is zero. Larger values leave faster oscillations in the
        residual and absorb slower drift into the trend.
    """
    if lam < 0:
        raise SignalError("smoothing weight must be nonnegative")
    s = x.samples
    n = s.size
    if lam == 0:
        trend = s
        residual = np.zeros(n)
    else:
        d2 = sparse.diags_array(
            [np.ones(n - 2), -2 * np.ones(n - 2), np.ones(n - 2)],
            offsets=[0, 1, 2],
            shape=(n - 2, n),
        )
        a = sparse.eye_array(n, format="csc") + (lam * lam) * (d2.T @ d2)
        trend = spsolve(a.tocsc(), s)
        residual = s - trend
    residual = residual - residual.mean()
    return TimeSeries(residual, x.fs)


def normalize(x: TimeSeries) -> TimeSeries:
    """Zero-mean, unit population-std scaling; constant input maps to zeros."""
    s = x.samples
    mu = s.mean()
    sd = s.std()  # population convention throughout the package
    if sd < 1e-12:
        return TimeSeries(np.zeros(s.size), x.fs)
    return TimeSeries((s - mu) / sd, x.fs)


def magnitude_spectrum(x: TimeSeries, window: str = "hamming") -> Spectrum:
    """Windowed DFT magnitude over bins k = 0..N//2."""
    s = x.samples
    n = s.size
    w = _window(window, n)
    mags = np.abs(np.fft.rfft(w * s))
    freqs = np.arange(mags.size) * (x.fs / n)
    return Spectrum(freqs, mags)


def _band_indices(freqs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    eps = 1e-9 * max(freqs[-1], 1.0)
    return np.nonzero((freqs >= lo - eps) & (freqs <= hi + eps))[0]


def _parabolic_offset(mags: np.ndarray, k: int) -> float:
    """Sub-bin peak offset from a log-magnitude parabola through k-1, k, k+1."""
    if k <= 0 or k >= mags.size - 1:
        return 0.0
    a, b, c = mags[k - 1], mags[k], mags[k + 1]
    if a <= SILENCE_FLOOR or b <= SILENCE_FLOOR or c <= SILENCE_FLOOR:
        return 0.0
    la, lb, lc = np.log(a), np.log(b), np.log(c)
    denom = la - 2 * lb + lc
    if abs(denom) < 1e-12:
        return 0.0
    return float(np.clip(0.5 * (la - lc) / denom, -0.5, 0.5))


def dominant_frequency(
    x: TimeSeries, band_lo: float, band_hi: float, window: str = "hamming"
) -> tuple[float, float]:
    """Locate the strongest spectral peak inside [band_lo, band_hi].

    Returns ``(freq_hz, confidence)`` where the frequency is the in-band
    argmax bin refined by parabolic interpolation and confidence is the
    peak magnitude divided by the total in-band magnitude.
    """
    if not (0 <= band_lo < band_hi <= x.fs / 2):
        raise SignalError("band must satisfy 0 <= lo < hi <= fs/2")
    spec = magnitude_spectrum(x, window)
    idx = _band_indices(spec.freqs, band_lo, band_hi)
    if idx.size < 3:
        raise SignalError("band too narrow")
    band_mags = spec.mags[idx]
    if np.all(band_mags < SILENCE_FLOOR):
        raise SignalError("no signal in band")
    k = int(idx[np.argmax(band_mags)])
    delta = _parabolic_offset(spec.mags, k)
    freq = (k + delta) * (x.fs / x.samples.size)
    confidence = float(spec.mags[k] / band_mags.sum())
    return freq, confidence


def bandpass(x: TimeSeries, band_lo: float, band_hi: float) -> TimeSeries:
    """Spectral-mask bandpass: zero every DFT bin outside [band_lo, band_hi]."""
    if not (0 <= band_lo < band_hi <= x.fs / 2):
        raise SignalError("band must satisfy 0 <= lo < hi <= fs/2")
    s = x.samples
    n = s.size
    spec = np.fft.rfft(s)
    freqs = np.arange(spec.size) * (x.fs / n)
    eps = 1e-9 * max(freqs[-1], 1.0)
    mask = (freqs >= band_lo - eps) & (freqs <= band_hi + eps)
    return TimeSeries(np.fft.irfft(spec * mask, n=n), x.fs)
