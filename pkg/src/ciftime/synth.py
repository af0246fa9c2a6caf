"""Synthetic weight sequences with known ground-truth timestamps.

Models the characteristic failure mode of fire-based length predictors:
regardless of a token's true duration, its weight mass bunches into the
first few frames of the span (the integration finishes early), so raw
fire boundaries undershoot long tokens.  The remaining span frames and
all silence regions carry only a sub-threshold noise floor.  Ground truth
comes out alongside the weights, which makes end-to-end validation of the
fire + post-processing pipeline possible without any model or audio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .postproc import SILENCE, TimestampTrack, TrackEntry
from .weights import FrameWeights

# Onset mass is built from integer parts over this power-of-two scale, so
# each token's weights are dyadic rationals summing to exactly 1.0.
_SCALE = 1 << 20
# Every onset frame gets at least this fraction (keeps onsets above the
# usual low-weight threshold of 0.05), and the onset's last frame gets at
# least _HEAVY_MIN so the fire lands exactly there as long as the total
# noise-floor mass of the utterance stays below it.
_PART_MIN = 0.08
_HEAVY_MIN, _HEAVY_MAX = 0.42, 0.58


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic utterance.

    ``token_dur_frames`` and ``pause_frames`` are inclusive (min, max)
    ranges.  ``pause_count`` silent gaps are placed between tokens
    (positions drawn without replacement), which exercises silence
    insertion; set it to 0 for strictly abutting tokens.  ``noise_level``
    is the sub-threshold floor weight on every non-onset frame; keep its
    utterance total below ~0.4 so it never shifts a fire off the onset.
    """

    rng_seed: int
    n_tokens: int
    token_dur_frames: tuple[int, int]
    onset_spread_frames: int = 4
    noise_level: float = 0.01
    leading_sil_frames: int = 0
    trailing_sil_frames: int = 0
    frame_ms: float = 40.0
    pause_count: int = 0
    pause_frames: tuple[int, int] = (0, 0)
    utt_id: str = "synth"

    def __post_init__(self) -> None:
        dur_min, dur_max = self.token_dur_frames
        if self.n_tokens < 0:
            raise ValueError(f"n_tokens must be >= 0, got {self.n_tokens}")
        if self.n_tokens > 0 and not 1 <= dur_min <= dur_max:
            raise ValueError(f"bad token duration range {self.token_dur_frames}")
        if self.onset_spread_frames < 1:
            raise ValueError("onset_spread_frames must be >= 1")
        if self.noise_level < 0.0:
            raise ValueError("noise_level must be >= 0")
        if self.leading_sil_frames < 0 or self.trailing_sil_frames < 0:
            raise ValueError("silence frame counts must be >= 0")
        if self.frame_ms <= 0.0:
            raise ValueError("frame_ms must be positive")
        if self.pause_count < 0 or self.pause_count > max(self.n_tokens - 1, 0):
            raise ValueError(
                f"pause_count must be in [0, {max(self.n_tokens - 1, 0)}], "
                f"got {self.pause_count}"
            )
        if self.pause_count > 0:
            p_min, p_max = self.pause_frames
            if not 1 <= p_min <= p_max:
                raise ValueError(f"bad pause range {self.pause_frames}")
        if self.n_tokens == 0 and self.leading_sil_frames + self.trailing_sil_frames < 1:
            raise ValueError("an utterance with no tokens needs silence frames")


def _onset_parts(rng: np.random.Generator, m: int) -> list[float]:
    """Dyadic weights for ``m`` onset frames, summing to exactly 1.0.

    The last frame carries the dominant share so the threshold crossing
    happens there; all frames stay above the low-weight floor whenever m
    is small enough to allow it.
    """
    if m == 1:
        return [1.0]
    heavy = int(rng.integers(round(_HEAVY_MIN * _SCALE), round(_HEAVY_MAX * _SCALE) + 1))
    rest = _SCALE - heavy
    part_floor = min(int(_PART_MIN * _SCALE), rest // (m - 1))
    extra = rest - part_floor * (m - 1)
    bonus = rng.multinomial(extra, np.full(m - 1, 1.0 / (m - 1)))
    parts = [part_floor + int(b) for b in bonus] + [heavy]
    return [p / _SCALE for p in parts]


def generate(spec: SynthSpec) -> tuple[FrameWeights, TimestampTrack]:
    """Build one utterance's weights and its intended timestamp track.

    Deterministic given ``rng_seed``.  Token k's span gets mass summing to
    exactly 1.0 within its first ``onset_spread_frames`` frames; every
    other frame carries the noise floor.  Labels are positional
    (``t000``, ``t001``, ...).
    """
    rng = np.random.default_rng(spec.rng_seed)
    n = spec.n_tokens
    dur_min, dur_max = spec.token_dur_frames
    durations = [int(rng.integers(dur_min, dur_max + 1)) for _ in range(n)]
    pause_after = {}
    if spec.pause_count > 0:
        positions = rng.choice(n - 1, size=spec.pause_count, replace=False)
        p_min, p_max = spec.pause_frames
        for pos in sorted(int(p) for p in positions):
            pause_after[pos] = int(rng.integers(p_min, p_max + 1))

    fm = spec.frame_ms
    entries: list[TrackEntry] = []
    spans: list[tuple[int, int]] = []
    cursor = spec.leading_sil_frames
    if spec.leading_sil_frames > 0:
        entries.append(TrackEntry(SILENCE, 0.0, cursor * fm))
    for k, dur in enumerate(durations):
        spans.append((cursor, dur))
        entries.append(TrackEntry(f"t{k:03d}", cursor * fm, (cursor + dur) * fm))
        cursor += dur
        gap = pause_after.get(k, 0)
        if gap > 0:
            entries.append(TrackEntry(SILENCE, cursor * fm, (cursor + gap) * fm))
            cursor += gap
    total_frames = cursor + spec.trailing_sil_frames
    if spec.trailing_sil_frames > 0:
        entries.append(TrackEntry(SILENCE, cursor * fm, total_frames * fm))
    if n == 0:
        entries = [TrackEntry(SILENCE, 0.0, total_frames * fm)]

    alpha = np.full(total_frames, spec.noise_level, dtype=np.float64)
    for start, dur in spans:
        m = min(spec.onset_spread_frames, dur)
        alpha[start : start + m] = _onset_parts(rng, m)

    weights = FrameWeights(utt_id=spec.utt_id, frame_ms=fm, alpha=alpha)
    truth = TimestampTrack(utt_id=spec.utt_id, entries=tuple(entries))
    return weights, truth


def make_corpus(
    seed: int = 42,
    n_utts: int = 100,
    frame_ms: float = 40.0,
) -> list[tuple[FrameWeights, TimestampTrack]]:
    """A deterministic evaluation corpus exercising the whole pipeline.

    Each utterance has 5-7 tokens of 4-6 frames with the mass bunched in
    the first 4 (so fire delay has tails to recover), two inter-token
    pauses of 5-7 frames (so silence insertion has gaps to mark), and 3-5
    frames of boundary silence on each side (so trimming has work to do).
    The per-utterance noise-floor total stays below the onset's heaviest
    frame, which pins every fire to its token's onset end.
    """
    master = np.random.default_rng(seed)
    corpus = []
    for idx in range(n_utts):
        spec = SynthSpec(
            rng_seed=int(master.integers(0, 2**31 - 1)),
            n_tokens=int(master.integers(5, 8)),
            token_dur_frames=(4, 6),
            onset_spread_frames=4,
            noise_level=0.01,
            leading_sil_frames=int(master.integers(3, 6)),
            trailing_sil_frames=int(master.integers(3, 6)),
            frame_ms=frame_ms,
            pause_count=2,
            pause_frames=(5, 7),
            utt_id=f"synth{idx:04d}",
        )
        corpus.append(generate(spec))
    return corpus
