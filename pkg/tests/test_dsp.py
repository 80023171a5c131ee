import numpy as np
import pytest

from vitalkit.dsp import (
    TimeSeries,
    bandpass,
    detrend,
    dominant_frequency,
    magnitude_spectrum,
    normalize,
)
from vitalkit.errors import SignalError

FS = 30.0


def tone(freq, duration=30.0, fs=FS, amp=1.0, offset=0.0):
    t = np.arange(int(round(duration * fs))) / fs
    return TimeSeries(amp * np.sin(2 * np.pi * freq * t) + offset, fs)


def detrend_oracle(samples, lam):
    """Dense penalized least-squares solve, independent of the sparse path."""
    n = samples.size
    d2 = np.zeros((n - 2, n))
    for i in range(n - 2):
        d2[i, i : i + 3] = (1.0, -2.0, 1.0)
    trend = np.linalg.solve(np.eye(n) + lam * lam * d2.T @ d2, samples)
    residual = samples - trend
    return residual - residual.mean()


def fine_peak_oracle(x: TimeSeries, lo, hi, zero_pad=64):
    """Zero-padded DFT grid search for the in-band peak frequency."""
    n = len(x)
    spec = np.abs(np.fft.rfft(np.hamming(n) * x.samples, n * zero_pad))
    freqs = np.arange(spec.size) * x.fs / (n * zero_pad)
    mask = (freqs >= lo) & (freqs <= hi)
    return freqs[mask][np.argmax(spec[mask])]


class TestDetrend:
    def test_constant_is_its_own_trend(self):
        x = TimeSeries(np.full(6, 5.0), FS)
        assert np.abs(detrend(x, 10.0).samples).max() < 1e-9

    def test_linear_ramp_against_oracle(self):
        samples = np.arange(100, dtype=float)
        x = TimeSeries(samples, FS)
        got = detrend(x, 300.0).samples
        expected = detrend_oracle(samples, 300.0)
        assert np.allclose(got, expected, atol=1e-8)
        assert np.abs(got).max() < 0.005 * (samples.max() - samples.min())

    def test_tone_survives_ramp_removal(self):
        t = np.arange(300) / FS
        x = TimeSeries(np.sin(2 * np.pi * 1.5 * t) + np.linspace(0, 40, 300), FS)
        residual = detrend(x, 300.0)
        freq, _ = dominant_frequency(residual, 0.75, 4.0)
        assert freq == pytest.approx(1.5, abs=0.02)

    def test_matches_oracle_on_noise(self):
        rng = np.random.default_rng(5)
        samples = rng.normal(0, 1, 200)
        got = detrend(TimeSeries(samples, FS), 50.0).samples
        assert np.allclose(got, detrend_oracle(samples, 50.0), atol=1e-8)

    def test_negative_lambda_rejected(self):
        with pytest.raises(SignalError):
            detrend(TimeSeries(np.zeros(8), FS), -1.0)


class TestNormalize:
    def test_four_samples(self):
        out = normalize(TimeSeries(np.array([1.0, 2.0, 3.0, 4.0]), FS)).samples
        assert abs(out.mean()) < 1e-12
        assert abs(out.std() - 1.0) < 1e-12

    def test_degenerate_constant(self):
        out = normalize(TimeSeries(np.full(4, 7.0), FS)).samples
        assert np.all(out == 0)

    def test_random_series_property(self):
        rng = np.random.default_rng(42)
        out = normalize(TimeSeries(rng.normal(3, 17, 1000), FS)).samples
        assert abs(out.mean()) < 1e-10
        assert abs(out.std() - 1.0) < 1e-10

    def test_idempotent(self):
        rng = np.random.default_rng(43)
        x = TimeSeries(rng.normal(0, 2, 256), FS)
        once = normalize(x).samples
        twice = normalize(normalize(x)).samples
        assert np.abs(once - twice).max() < 1e-9


class TestMagnitudeSpectrum:
    def test_onbin_tone_peaks_at_its_bin(self):
        spec = magnitude_spectrum(tone(1.5, duration=30), "rectangular")
        assert spec.freqs[np.argmax(spec.mags)] == pytest.approx(1.5, abs=1e-12)

    def test_constant_has_dc_only(self):
        spec = magnitude_spectrum(TimeSeries(np.full(64, 3.0), FS), "rectangular")
        assert np.all(spec.mags[1:] < 1e-9)

    def test_two_tone_ordering_against_direct_dft(self):
        t = np.arange(256) / FS
        samples = np.sin(2 * np.pi * 1.0 * t) + 0.4 * np.sin(2 * np.pi * 2.0 * t)
        x = TimeSeries(samples, FS)
        spec = magnitude_spectrum(x, "rectangular")

        def direct_dft_mag(f):
            n = samples.size
            k = np.arange(n)
            return abs(np.sum(samples * np.exp(-2j * np.pi * f / FS * k)))

        bin_of = lambda f: int(np.argmin(np.abs(spec.freqs - f)))
        assert spec.mags[bin_of(1.0)] > spec.mags[bin_of(2.0)]
        assert spec.mags[bin_of(1.0)] == pytest.approx(direct_dft_mag(spec.freqs[bin_of(1.0)]), rel=1e-9)
        assert spec.mags[bin_of(2.0)] == pytest.approx(direct_dft_mag(spec.freqs[bin_of(2.0)]), rel=1e-9)

    def test_spectrum_shape(self):
        for n in (64, 65):
            spec = magnitude_spectrum(TimeSeries(np.ones(n), FS), "rectangular")
            assert spec.freqs.size == n // 2 + 1
            assert spec.freqs[0] == 0.0
            assert spec.freqs[1] == pytest.approx(FS / n)

    def test_unknown_window(self):
        with pytest.raises(SignalError):
            magnitude_spectrum(tone(1.0), "hann")

    def test_parseval_rectangular(self):
        rng = np.random.default_rng(3)
        samples = rng.normal(0, 1, 512)
        n = samples.size
        spec = magnitude_spectrum(TimeSeries(samples, FS), "rectangular")
        weights = np.full(spec.mags.size, 2.0)
        weights[0] = 1.0
        if n % 2 == 0:
            weights[-1] = 1.0
        lhs = np.sum(samples**2)
        rhs = np.sum(weights * spec.mags**2) / n
        assert abs(lhs - rhs) < 1e-6 * lhs


class TestDominantFrequency:
    def test_single_tone_recovery(self):
        freq, conf = dominant_frequency(tone(1.2, duration=30), 0.75, 4.0)
        assert freq == pytest.approx(1.2, abs=0.02)
        assert 0 < conf <= 1

    def test_zero_series(self):
        x = TimeSeries(np.zeros(900), FS)
        with pytest.raises(SignalError, match="no signal in band"):
            dominant_frequency(x, 0.75, 4.0)

    def test_offbin_tone_against_fine_grid_oracle(self):
        x = tone(1.23, duration=30)
        freq, _ = dominant_frequency(x, 0.75, 4.0)
        oracle = fine_peak_oracle(x, 0.75, 4.0)
        assert freq == pytest.approx(oracle, abs=0.005)
        assert abs(freq - 1.23) < 0.02

    def test_onbin_tone_exact(self):
        # 45 * (30 / 900) = 1.5 exactly on-bin
        freq, _ = dominant_frequency(tone(1.5, duration=30), 0.75, 4.0)
        assert abs(freq - 1.5) <= 1e-9

    def test_band_too_narrow(self):
        with pytest.raises(SignalError, match="band too narrow"):
            dominant_frequency(tone(1.5, duration=1.0), 1.49, 1.51)

    def test_bad_band(self):
        with pytest.raises(SignalError):
            dominant_frequency(tone(1.5), 4.0, 0.75)
        with pytest.raises(SignalError):
            dominant_frequency(tone(1.5), 0.5, FS)


class TestBandpass:
    def test_passband_identity(self):
        x = tone(1.5, duration=10)
        y = bandpass(x, 0.75, 4.0)
        corr = np.corrcoef(x.samples, y.samples)[0, 1]
        assert corr > 0.99

    def test_stopband_rejection(self):
        x = tone(0.1, duration=60)
        y = bandpass(x, 0.75, 4.0)
        in_rms = np.sqrt(np.mean(x.samples**2))
        out_rms = np.sqrt(np.mean(y.samples**2))
        assert out_rms < 0.01 * in_rms

    def test_composition_with_dominant_frequency(self):
        t = np.arange(900) / FS
        x = TimeSeries(np.sin(2 * np.pi * 1.7 * t) + np.linspace(0, 30, 900), FS)
        y = bandpass(x, 0.75, 4.0)
        freq, _ = dominant_frequency(y, 0.75, 4.0)
        assert freq == pytest.approx(1.7, abs=0.02)

    def test_bandpass_then_dominant_matches_direct(self):
        x = tone(1.23, duration=30)
        direct, _ = dominant_frequency(x, 0.75, 4.0)
        filtered, _ = dominant_frequency(bandpass(x, 0.75, 4.0), 0.75, 4.0)
        assert abs(direct - filtered) < 0.02

    def test_length_preserved_odd(self):
        x = TimeSeries(np.sin(np.arange(301)), FS)
        assert len(bandpass(x, 0.75, 4.0)) == 301


class TestTimeSeries:
    def test_too_short(self):
        with pytest.raises(SignalError):
            TimeSeries(np.ones(3), FS)

    def test_bad_fs(self):
        with pytest.raises(SignalError):
            TimeSeries(np.ones(8), 0.0)
