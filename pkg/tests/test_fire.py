import math

import numpy as np
import pytest

from ciftime import FrameWeights, RawTimestamps, integrate_and_fire, raw_timestamps

TWO_TOKEN_ALPHA = [0.3, 0.9, 0.4, 0.4, 0.3]


def _coeff_sum(coeffs):
    return math.fsum(c for _, c in coeffs)


def test_two_token_worked_example():
    # Figure-2 style input: two complete tokens and a 0.3 tail.
    w = FrameWeights("demo", 40.0, TWO_TOKEN_ALPHA)
    fr = integrate_and_fire(w, 1.0)
    assert fr.token_count == 2
    assert fr.fire_frames == (1, 3)

    (f0, c0), (f1, c1) = fr.token_coeffs[0]
    assert (f0, f1) == (0, 1)
    assert c0 == pytest.approx(0.3, abs=1e-12)
    assert c1 == pytest.approx(0.7, abs=1e-12)

    frames = [f for f, _ in fr.token_coeffs[1]]
    coeffs = [c for _, c in fr.token_coeffs[1]]
    assert frames == [1, 2, 3]
    assert coeffs == pytest.approx([0.2, 0.4, 0.4], abs=1e-12)

    assert fr.events[0].residue_into_next == pytest.approx(0.2, abs=1e-12)
    assert fr.events[1].residue_into_next == pytest.approx(0.0, abs=1e-12)
    assert fr.tail_residue == pytest.approx(0.3, abs=1e-12)


def test_exact_threshold_single_frame():
    w = FrameWeights("u", 40.0, [1.0])
    fr = integrate_and_fire(w)
    assert fr.token_count == 1
    assert fr.fire_frames == (0,)
    assert fr.token_coeffs == (((0, 1.0),),)
    assert fr.tail_residue == 0.0


def test_reaching_threshold_exactly_fires():
    w = FrameWeights("u", 40.0, [0.5, 0.5, 0.2])
    fr = integrate_and_fire(w)
    assert fr.fire_frames == (1,)
    assert fr.events[0].residue_into_next == 0.0
    assert fr.tail_residue == pytest.approx(0.2, abs=1e-12)


def test_fire_count_matches_prefix_sum_oracle():
    rng = np.random.default_rng(23)
    for _ in range(300):
        n = int(rng.integers(1, 200))
        alpha = rng.uniform(0.0, 1.5, size=n)
        w = FrameWeights("u", 40.0, alpha)
        fr = integrate_and_fire(w, 1.0)
        total = 0.0
        for a in alpha.tolist():
            total += a
        assert fr.token_count == math.floor(total)
        for coeffs in fr.token_coeffs:
            assert abs(_coeff_sum(coeffs) - 1.0) < 1e-9


def test_fire_count_with_generic_threshold():
    rng = np.random.default_rng(24)
    threshold = 0.7
    for _ in range(200):
        n = int(rng.integers(1, 120))
        alpha = rng.uniform(0.0, 1.0, size=n)
        w = FrameWeights("u", 40.0, alpha)
        fr = integrate_and_fire(w, threshold)
        total = 0.0
        for a in alpha.tolist():
            total += a
        expected = 0
        while total >= (expected + 1) * threshold:
            expected += 1
        assert fr.token_count == expected
        for coeffs in fr.token_coeffs:
            assert abs(_coeff_sum(coeffs) - threshold) < 1e-9


def test_mass_conservation():
    rng = np.random.default_rng(25)
    for _ in range(100):
        n = int(rng.integers(1, 150))
        alpha = rng.uniform(0.0, 1.2, size=n)
        w = FrameWeights("u", 40.0, alpha)
        fr = integrate_and_fire(w)
        allotted = math.fsum(_coeff_sum(c) for c in fr.token_coeffs)
        assert abs(allotted + fr.tail_residue - math.fsum(alpha.tolist())) < 1e-9
        for coeffs in fr.token_coeffs:
            frames = [f for f, _ in coeffs]
            assert frames == sorted(frames)
            assert all(c >= 0.0 for _, c in coeffs)


def test_fire_frames_monotone():
    rng = np.random.default_rng(26)
    for _ in range(100):
        alpha = rng.uniform(0.0, 1.5, size=int(rng.integers(1, 80)))
        fr = integrate_and_fire(FrameWeights("u", 40.0, alpha))
        frames = fr.fire_frames
        assert all(a <= b for a, b in zip(frames, frames[1:]))
        if np.all(alpha <= 1.0):
            assert all(a < b for a, b in zip(frames, frames[1:]))


def test_super_threshold_frame_fires_twice():
    w = FrameWeights("u", 40.0, [2.5])
    fr = integrate_and_fire(w)
    assert fr.fire_frames == (0, 0)
    assert fr.token_coeffs == (((0, 1.0),), ((0, 1.0),))
    assert fr.tail_residue == pytest.approx(0.5, abs=1e-12)


def test_determinism():
    alpha = np.random.default_rng(3).uniform(0, 1.2, size=64)
    w = FrameWeights("u", 40.0, alpha)
    assert integrate_and_fire(w) == integrate_and_fire(w)


def test_parameter_errors():
    w = FrameWeights("u", 40.0, [0.5])
    with pytest.raises(ValueError):
        integrate_and_fire(w, 0.0)
    with pytest.raises(ValueError):
        integrate_and_fire(w, -1.0)
    with pytest.raises(ValueError):
        FrameWeights("u", 40.0, [])  # empty weight sequences are rejected


def test_tail_fire_emits_final_token():
    w = FrameWeights("u", 40.0, [0.5, 0.3])
    fr = integrate_and_fire(w, tail_fire_min=0.5)
    assert fr.token_count == 1
    assert fr.fire_frames == (1,)
    assert fr.token_coeffs == (((0, 0.5), (1, 0.3)),)
    assert fr.tail_residue == 0.0

    fr2 = integrate_and_fire(w, tail_fire_min=0.9)
    assert fr2.token_count == 0
    assert fr2.tail_residue == pytest.approx(0.8, abs=1e-12)


def test_raw_timestamps_worked_example():
    w = FrameWeights("demo", 40.0, TWO_TOKEN_ALPHA)
    raw = raw_timestamps(integrate_and_fire(w), w)
    assert raw.utt_id == "demo"
    assert raw.intervals == ((0, 0.0, 80.0), (1, 80.0, 160.0))


def test_raw_timestamps_single_fire_and_empty():
    w = FrameWeights("u", 40.0, [1.0])
    raw = raw_timestamps(integrate_and_fire(w), w)
    assert raw.intervals == ((0, 0.0, 40.0),)

    w2 = FrameWeights("u", 40.0, [0.2, 0.2])
    raw2 = raw_timestamps(integrate_and_fire(w2), w2)
    assert raw2.intervals == ()


def test_raw_timestamps_tile_a_prefix():
    rng = np.random.default_rng(27)
    for _ in range(50):
        alpha = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 100)))
        w = FrameWeights("u", 40.0, alpha)
        raw = raw_timestamps(integrate_and_fire(w), w)
        cursor = 0.0
        for _, start, end in raw.intervals:
            assert start == cursor
            assert end > start
            cursor = end
        assert cursor <= w.duration_ms


def test_raw_timestamps_mismatch_errors():
    w_long = FrameWeights("u", 40.0, np.full(10, 0.5))
    w_short = FrameWeights("u", 40.0, [0.5, 0.5])
    fr = integrate_and_fire(w_long)
    with pytest.raises(ValueError):
        raw_timestamps(fr, w_short)
    with pytest.raises(ValueError):
        RawTimestamps("u", ((0, 0.0, 80.0), (1, 40.0, 120.0)))
