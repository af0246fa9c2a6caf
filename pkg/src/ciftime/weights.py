"""Frame-level weight containers and inference-side weight transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit


def _readonly_1d(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FrameWeights:
    """Per-frame integrate weights for one utterance.

    ``alpha`` holds one non-negative weight per encoder frame.  ``logits``
    optionally keeps the pre-sigmoid activations so that scaled weights can
    be recomputed offline.  ``frame_ms`` is the duration of one frame; it is
    model-dependent (40 ms and 60 ms both occur in practice for 4x
    down-sampled encoders) and therefore always explicit, never a constant.
    """

    utt_id: str
    frame_ms: float
    alpha: np.ndarray
    logits: np.ndarray | None = None

    def __post_init__(self) -> None:
        alpha = _readonly_1d(self.alpha, "alpha")
        if alpha.size < 1:
            raise ValueError("alpha must contain at least one frame")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha values must be finite")
        if np.any(alpha < 0.0):
            raise ValueError("alpha values must be non-negative")
        if not float(self.frame_ms) > 0.0:
            raise ValueError(f"frame_ms must be positive, got {self.frame_ms}")
        object.__setattr__(self, "frame_ms", float(self.frame_ms))
        object.__setattr__(self, "alpha", alpha)
        if self.logits is not None:
            logits = _readonly_1d(self.logits, "logits")
            if logits.size != alpha.size:
                raise ValueError(
                    f"logits length {logits.size} != alpha length {alpha.size}"
                )
            object.__setattr__(self, "logits", logits)

    @property
    def n_frames(self) -> int:
        return int(self.alpha.size)

    @property
    def duration_ms(self) -> float:
        return self.n_frames * self.frame_ms


@dataclass(frozen=True)
class ScaleParams:
    """Scaling coefficients for the sigmoid-weight transform.

    Defaults follow the operating point reported for 4x down-sampled
    encoders (gamma=0.8, beta=0.05); other frame rates typically need
    re-tuned values.
    """

    gamma: float = 0.8
    beta: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must be in [0, 1), got {self.beta}")


def scaled_cif(logits, params: ScaleParams = ScaleParams()) -> np.ndarray:
    """Map pre-sigmoid activations to scaled, smoothed fire weights.

    Computes ``gamma * max(0, sigmoid(x) - beta)`` elementwise: beta clips
    near-zero glitches to exact zero, gamma flattens the spikes.  Total
    function; output is in [0, gamma * (1 - beta)].
    """
    x = np.asarray(logits, dtype=np.float64)
    return params.gamma * np.maximum(expit(x) - params.beta, 0.0)


def apply_scaled_cif(w: FrameWeights, params: ScaleParams = ScaleParams()) -> FrameWeights:
    """Return a copy of ``w`` whose alpha is recomputed from its logits.

    Raises ValueError when the utterance carries no logits; callers that
    got weights-only input must surface that explicitly rather than fall
    back to the raw weights.
    """
    if w.logits is None:
        raise ValueError(
            f"utterance {w.utt_id!r} has no logits; scaled weights unavailable"
        )
    return FrameWeights(
        utt_id=w.utt_id,
        frame_ms=w.frame_ms,
        alpha=scaled_cif(w.logits, params),
        logits=w.logits,
    )


def weaken_spikes(w: FrameWeights, window: int) -> FrameWeights:
    """Smooth weight spikes with a centered moving average.

    Experimental: meant for high down-sampling models whose weights
    collapse to near 0/1 spikes.  Edge frames use truncated windows, and
    the result is rescaled so the total weight mass (hence the fire count)
    is preserved.  ``window`` must be odd, >= 1 and <= the frame count;
    window=1 is the identity.
    """
    n = w.n_frames
    if window < 1 or window > n:
        raise ValueError(f"window must be in [1, {n}], got {window}")
    if window % 2 == 0:
        raise ValueError(f"window must be odd, got {window}")
    if window == 1:
        return w
    kernel = np.ones(window)
    counts = np.convolve(np.ones(n), kernel, mode="same")
    smoothed = np.convolve(w.alpha, kernel, mode="same") / counts
    total = float(w.alpha.sum())
    smoothed_total = float(smoothed.sum())
    if smoothed_total > 0.0:
        smoothed *= total / smoothed_total
    return FrameWeights(
        utt_id=w.utt_id, frame_ms=w.frame_ms, alpha=smoothed, logits=w.logits
    )
