import numpy as np
import pytest

from vitalkit.dsp import dominant_frequency
from vitalkit.errors import FrameError
from vitalkit.frameio import Frame, FrameSequence
from vitalkit.roi import (
    BoundingBox,
    channel_stats,
    detect_roi,
    extract_series,
    parse_roi_mode,
    skin_mask,
)

SKIN = (150, 80, 60)  # passes the RGB rule with spread 90


def uniform_frame(w, h, color):
    px = np.zeros((h, w, 3), np.uint8)
    px[:, :] = color
    return Frame(px)


def skin_box_oracle(frame, coverage=0.90):
    """Exhaustive scan: quantile-trimmed box over skin pixel coordinates."""
    ys, xs = [], []
    px = frame.pixels.astype(int)
    for y in range(frame.height):
        for x in range(frame.width):
            r, g, b = px[y, x]
            if (
                r > 95 and g > 40 and b > 20 and r > g and r > b
                and max(r, g, b) - min(r, g, b) > 15
            ):
                ys.append(y)
                xs.append(x)
    trim = (1.0 - coverage) / 4.0
    xs.sort()
    ys.sort()
    lo = int(np.floor(trim * (len(xs) - 1)))
    hi = int(np.ceil((1 - trim) * (len(xs) - 1)))
    return xs[lo], ys[lo], xs[hi] - xs[lo] + 1, ys[hi] - ys[lo] + 1


class TestDetectRoi:
    def test_center_fraction(self):
        box = detect_roi(uniform_frame(100, 100, (0, 0, 0)), "center:0.5")
        assert box == BoundingBox(25, 25, 50, 50)

    def test_skin_fallback_on_all_blue(self):
        box = detect_roi(uniform_frame(100, 100, (0, 0, 255)), "auto")
        assert box == BoundingBox(25, 25, 50, 50)

    def test_skin_patch_found(self):
        px = np.zeros((100, 100, 3), np.uint8)
        px[10:30, 10:30] = SKIN
        frame = Frame(px)
        box = detect_roi(frame, "auto")
        ox, oy, ow, oh = skin_box_oracle(frame)
        assert abs(box.x - 10) <= 2 and abs(box.y - 10) <= 2
        assert abs(box.w - 20) <= 2 and abs(box.h - 20) <= 2
        assert (box.x, box.y, box.w, box.h) == (ox, oy, ow, oh)

    def test_skin_box_contains_90pct_of_skin(self):
        rng = np.random.default_rng(21)
        px = np.zeros((60, 60, 3), np.uint8)
        # scattered skin blob with ragged edges
        for _ in range(600):
            x, y = rng.integers(15, 45), rng.integers(20, 40)
            px[y, x] = SKIN
        frame = Frame(px)
        box = detect_roi(frame, "auto")
        mask = skin_mask(frame)
        inside = mask[box.y : box.y + box.h, box.x : box.x + box.w].sum()
        assert inside >= 0.90 * mask.sum()

    def test_fixed_box_echoed(self):
        frame = uniform_frame(50, 40, (9, 9, 9))
        box = BoundingBox(5, 6, 10, 11)
        assert detect_roi(frame, box) == box

    def test_fixed_box_clipped(self):
        frame = uniform_frame(50, 40, (9, 9, 9))
        assert detect_roi(frame, BoundingBox(45, 35, 10, 10)) == BoundingBox(45, 35, 5, 5)

    def test_fixed_box_fully_outside(self):
        frame = uniform_frame(50, 40, (9, 9, 9))
        with pytest.raises(FrameError, match="roi out of bounds"):
            detect_roi(frame, BoundingBox(50, 0, 3, 3))

    def test_parse_mode_strings(self):
        assert parse_roi_mode("auto") == ("skin",)
        assert parse_roi_mode("center:0.25") == ("center", 0.25)
        assert parse_roi_mode("box:1,2,3,4") == ("box", BoundingBox(1, 2, 3, 4))
        with pytest.raises(FrameError):
            parse_roi_mode("circle:5")
        with pytest.raises(FrameError):
            parse_roi_mode("center:0")
        with pytest.raises(FrameError, match="bad center fraction"):
            parse_roi_mode("center:abc")
        with pytest.raises(FrameError, match="bad box coordinates"):
            parse_roi_mode("box:1,2,x,4")


class TestChannelStats:
    def test_uniform_gray(self):
        frame = uniform_frame(10, 10, (128, 128, 128))
        stats = channel_stats(frame, BoundingBox(2, 2, 5, 5))
        assert stats.mean_r == stats.mean_g == stats.mean_b == 128
        assert stats.std_r == stats.std_g == stats.std_b == 0

    def test_hand_computed_population_std(self):
        px = np.zeros((2, 2, 3), np.uint8)
        px[:, :, 0] = [[100, 100], [120, 120]]
        stats = channel_stats(Frame(px), BoundingBox(0, 0, 2, 2))
        assert stats.mean_r == pytest.approx(110.0)
        assert stats.std_r == pytest.approx(10.0)  # population, divisor N

    def test_whole_frame_equals_full_box(self):
        rng = np.random.default_rng(3)
        frame = Frame(rng.integers(0, 256, (8, 12, 3), dtype=np.uint8))
        full = channel_stats(frame, BoundingBox(0, 0, 12, 8))
        means = frame.pixels.astype(float).mean(axis=(0, 1))
        assert full.mean_r == pytest.approx(means[0])
        assert full.mean_g == pytest.approx(means[1])
        assert full.mean_b == pytest.approx(means[2])

    def test_permutation_invariance(self):
        rng = np.random.default_rng(4)
        px = rng.integers(0, 256, (6, 6, 3), dtype=np.uint8)
        shuffled = px.reshape(-1, 3).copy()
        rng.shuffle(shuffled, axis=0)
        a = channel_stats(Frame(px), BoundingBox(0, 0, 6, 6))
        b = channel_stats(Frame(shuffled.reshape(6, 6, 3)), BoundingBox(0, 0, 6, 6))
        assert a.mean_r == pytest.approx(b.mean_r)
        assert a.std_g == pytest.approx(b.std_g)

    def test_box_must_fit(self):
        with pytest.raises(FrameError):
            channel_stats(uniform_frame(4, 4, (0, 0, 0)), BoundingBox(2, 2, 4, 4))


class TestExtractSeries:
    def test_constant_sequence(self):
        frames = tuple(uniform_frame(8, 8, (10, 20, 30)) for _ in range(8))
        seq = FrameSequence(frames, 4.0)
        ts = extract_series(seq, "center:0.5", "g")
        assert len(ts) == 8
        assert ts.fs == 4.0
        assert np.all(ts.samples == 20)

    def test_green_modulation_recovered(self):
        from vitalkit.synth import SynthSpec, generate

        spec = SynthSpec(width=64, height=64, fps=30, duration=30, hr_freq=1.2, hr_amp=5)
        seq = generate(spec, seed=2)
        ts = extract_series(seq, "center:0.5", "g")
        freq, _ = dominant_frequency(ts, 0.75, 4.0)
        assert freq == pytest.approx(1.2, abs=0.02)

    def test_length_matches_frame_count(self):
        frames = tuple(uniform_frame(4, 4, (i, i, i)) for i in range(10, 22))
        seq = FrameSequence(frames, 6.0)
        assert len(extract_series(seq, "center:1.0", "r")) == 12

    def test_uniform_scaling_correlates_exactly(self):
        rng = np.random.default_rng(11)
        modulation = rng.uniform(40, 200, 16)
        frames = tuple(
            uniform_frame(6, 6, (int(round(m)),) * 3) for m in modulation
        )
        seq = FrameSequence(frames, 8.0)
        ts = extract_series(seq, "center:1.0", "b")
        corr = np.corrcoef(ts.samples, np.round(modulation))[0, 1]
        assert corr == pytest.approx(1.0, abs=1e-12)

    def test_bad_channel(self):
        frames = tuple(uniform_frame(4, 4, (0, 0, 0)) for _ in range(4))
        with pytest.raises(FrameError):
            extract_series(FrameSequence(frames, 2.0), "auto", "x")
