import math

import numpy as np
import pytest

from ciftime import FrameWeights, ScaleParams, apply_scaled_cif, scaled_cif, weaken_spikes


def test_frame_weights_validation():
    with pytest.raises(ValueError):
        FrameWeights("u", 40.0, [])
    with pytest.raises(ValueError):
        FrameWeights("u", 40.0, [0.1, -0.2])
    with pytest.raises(ValueError):
        FrameWeights("u", 0.0, [0.1])
    with pytest.raises(ValueError):
        FrameWeights("u", 40.0, [0.1, 0.2], logits=[0.0])
    with pytest.raises(ValueError):
        FrameWeights("u", 40.0, [0.1, float("nan")])


def test_frame_weights_is_immutable():
    w = FrameWeights("u", 40.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        w.alpha[0] = 5.0
    assert w.n_frames == 2
    assert w.duration_ms == 80.0


def test_scale_params_validation():
    ScaleParams(gamma=1.0, beta=0.0)
    with pytest.raises(ValueError):
        ScaleParams(gamma=0.0)
    with pytest.raises(ValueError):
        ScaleParams(gamma=1.2)
    with pytest.raises(ValueError):
        ScaleParams(beta=1.0)
    with pytest.raises(ValueError):
        ScaleParams(beta=-0.1)


def test_scaled_cif_at_zero_logit():
    # sigmoid(0) = 0.5, so the default operating point gives 0.8 * 0.45.
    out = scaled_cif([0.0])
    assert out[0] == pytest.approx(0.36, abs=1e-12)


def test_scaled_cif_clips_low_activations():
    # sigmoid(-10) ~ 4.54e-5 sits below beta and is clipped to exactly 0.
    out = scaled_cif([-10.0])
    assert out[0] == 0.0


def test_scaled_cif_saturation():
    out = scaled_cif([20.0])
    gamma, beta = 0.8, 0.05
    assert out[0] == pytest.approx(gamma * (1 - beta), abs=1e-8)


def test_scaled_cif_monotone_and_bounded():
    rng = np.random.default_rng(11)
    x = np.sort(rng.uniform(-30, 30, size=2000))
    y = scaled_cif(x)
    assert np.all(np.diff(y) >= 0)
    assert np.all(y >= 0.0)
    assert np.all(y <= 0.8 * (1 - 0.05) + 1e-15)


def test_scaled_cif_reduces_to_sigmoid():
    rng = np.random.default_rng(12)
    x = rng.uniform(-30, 30, size=2000)
    y = scaled_cif(x, ScaleParams(gamma=1.0, beta=0.0))
    ref = 1.0 / (1.0 + np.exp(-x))
    assert np.max(np.abs(y - ref)) < 1e-12


def test_apply_scaled_cif_requires_logits():
    w = FrameWeights("u", 40.0, [0.5, 0.5])
    with pytest.raises(ValueError, match="u"):
        apply_scaled_cif(w)
    w2 = FrameWeights("u", 40.0, [0.5, 0.5], logits=[0.0, 20.0])
    out = apply_scaled_cif(w2)
    assert out.alpha[0] == pytest.approx(0.36, abs=1e-12)
    assert out.utt_id == "u" and out.frame_ms == 40.0
    assert np.array_equal(out.logits, w2.logits)


def test_weaken_spikes_window_one_is_identity():
    w = FrameWeights("u", 40.0, [0.0, 1.0, 0.0])
    assert weaken_spikes(w, 1) is w


def test_weaken_spikes_constant_sequence_is_fixed_point():
    w = FrameWeights("u", 40.0, [0.5, 0.5, 0.5, 0.5])
    out = weaken_spikes(w, 3)
    assert np.allclose(out.alpha, w.alpha, atol=1e-15)


def test_weaken_spikes_single_spike():
    # Independent scalar oracle: truncated-window means of (0, 1, 0) are
    # (1/2, 1/3, 1/2); rescaling the sum back to 1 gives (0.375, 0.25, 0.375).
    w = FrameWeights("u", 40.0, [0.0, 1.0, 0.0])
    out = weaken_spikes(w, 3)
    assert np.allclose(out.alpha, [0.375, 0.25, 0.375], atol=1e-12)


def test_weaken_spikes_matches_scalar_oracle():
    def oracle(alpha, window):
        half = window // 2
        smoothed = []
        for i in range(len(alpha)):
            lo, hi = max(0, i - half), min(len(alpha), i + half + 1)
            smoothed.append(sum(alpha[lo:hi]) / (hi - lo))
        scale = sum(alpha) / sum(smoothed)
        return [v * scale for v in smoothed]

    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        window = int(rng.integers(0, (n + 1) // 2)) * 2 + 1
        alpha = rng.uniform(0.0, 1.5, size=n)
        w = FrameWeights("u", 40.0, alpha)
        out = weaken_spikes(w, window)
        assert np.allclose(out.alpha, oracle(alpha.tolist(), window), atol=1e-10)


def test_weaken_spikes_preserves_mass_and_sign():
    rng = np.random.default_rng(6)
    for _ in range(50):
        n = int(rng.integers(3, 200))
        alpha = rng.uniform(0.0, 2.0, size=n) * (rng.random(n) > 0.3)
        w = FrameWeights("u", 40.0, alpha)
        out = weaken_spikes(w, 5 if n >= 5 else 3 if n >= 3 else 1)
        total = float(alpha.sum())
        assert np.all(out.alpha >= 0.0)
        if total > 0:
            assert math.isclose(float(out.alpha.sum()), total, rel_tol=1e-9)


def test_weaken_spikes_parameter_errors():
    w = FrameWeights("u", 40.0, [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        weaken_spikes(w, 2)
    with pytest.raises(ValueError):
        weaken_spikes(w, 5)
    with pytest.raises(ValueError):
        weaken_spikes(w, 0)
