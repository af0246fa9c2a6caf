"""Silence-aware post-processing of raw fire timestamps.

Three strategies, applied on the frame grid of the weight sequence:

* boundary silence trimming: leading/trailing frames whose weight stays
  below ``theta_s`` are declared silence (the onset of accumulation is
  reliable, the tail is not),
* fire delay: a short run of low-weight frames right after a fire still
  belongs to the token that just fired, except the run's last frame,
* silence insertion: a run longer than ``l_s`` becomes an explicit
  silence entry instead of extending the previous token.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .fire import RawTimestamps
from .weights import FrameWeights

SILENCE = "<sil>"


@dataclass(frozen=True)
class TrackEntry:
    label: str
    start_ms: float
    end_ms: float

    @property
    def is_silence(self) -> bool:
        return self.label == SILENCE

    @property
    def duration_ms(self) -> float:
        return self.end_ms - self.start_ms


@dataclass(frozen=True)
class TimestampTrack:
    """Ordered, non-overlapping labeled intervals for one utterance.

    Entries may leave gaps (uncovered time is treated as silence by the
    metrics); explicit ``SILENCE`` entries mark regions judged silent, and
    no two of them are ever adjacent.
    """

    utt_id: str
    entries: tuple[TrackEntry, ...]

    def __post_init__(self) -> None:
        prev: TrackEntry | None = None
        for entry in self.entries:
            if not entry.label or any(ch.isspace() for ch in entry.label):
                raise ValueError(f"bad label {entry.label!r} in {self.utt_id!r}")
            if not entry.start_ms < entry.end_ms:
                raise ValueError(
                    f"entry {entry.label!r} in {self.utt_id!r} has empty span "
                    f"[{entry.start_ms}, {entry.end_ms})"
                )
            if prev is not None:
                if entry.start_ms < prev.end_ms:
                    raise ValueError(
                        f"entries overlap in {self.utt_id!r}: {prev.label!r} ends at "
                        f"{prev.end_ms}, {entry.label!r} starts at {entry.start_ms}"
                    )
                if entry.is_silence and prev.is_silence and entry.start_ms == prev.end_ms:
                    raise ValueError(f"adjacent silence entries in {self.utt_id!r}")
            prev = entry

    def tokens(self) -> tuple[TrackEntry, ...]:
        """Non-silence entries, in order."""
        return tuple(e for e in self.entries if not e.is_silence)

    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.tokens())

    @property
    def span_end_ms(self) -> float:
        return self.entries[-1].end_ms if self.entries else 0.0


@dataclass(frozen=True)
class PostprocParams:
    """Low-weight classification thresholds.

    ``theta_s`` is the per-frame weight below which a frame counts as
    low/silent; runs of up to ``l_s`` low frames are absorbed by fire
    delay, longer ones become silence.  ``end_keep_frames`` frames stay
    attached to the last token before trailing silence begins.
    """

    theta_s: float = 0.05
    l_s: int = 3
    end_keep_frames: int = 3

    def __post_init__(self) -> None:
        if not 0.0 < self.theta_s < 1.0:
            raise ValueError(f"theta_s must be in (0, 1), got {self.theta_s}")
        if self.l_s < 1:
            raise ValueError(f"l_s must be >= 1, got {self.l_s}")
        if self.end_keep_frames < 0:
            raise ValueError(
                f"end_keep_frames must be >= 0, got {self.end_keep_frames}"
            )


@dataclass(frozen=True)
class StageFlags:
    """Which post-processing stages run; defaults enable the full ladder."""

    trim: bool = True
    fire_delay: bool = True
    silence_insertion: bool = True

    @classmethod
    def none(cls) -> "StageFlags":
        return cls(trim=False, fire_delay=False, silence_insertion=False)


def to_track(raw: RawTimestamps, labels: Sequence[str] | None = None) -> TimestampTrack:
    """Label raw intervals, falling back to positional ``tok<k>`` names.

    A label list of the wrong length is an error, never a silent
    truncation.
    """
    if labels is None:
        labels = [f"tok{k}" for k, _, _ in raw.intervals]
    if len(labels) != len(raw.intervals):
        raise ValueError(
            f"{raw.utt_id!r}: got {len(labels)} labels for "
            f"{len(raw.intervals)} fired tokens"
        )
    entries = tuple(
        TrackEntry(label=str(lab), start_ms=start, end_ms=end)
        for lab, (_, start, end) in zip(labels, raw.intervals)
    )
    return TimestampTrack(utt_id=raw.utt_id, entries=entries)


def _frame_of(t_ms: float, frame_ms: float, n_frames: int, utt_id: str) -> int:
    # CTM round trips perturb boundaries by up to ~1 ms (start and duration
    # are rounded independently), hence the tolerance cap
    k = int(round(t_ms / frame_ms))
    tol = min(frame_ms / 2.0, 1.0) + 1e-6
    if abs(t_ms - k * frame_ms) > tol or k < 0 or k > n_frames:
        raise ValueError(
            f"{utt_id!r}: boundary {t_ms} ms is not on the "
            f"{frame_ms} ms frame grid of {n_frames} frames"
        )
    return k


def _strip_boundary_silence(entries: Sequence[TrackEntry]) -> list[TrackEntry]:
    core = list(entries)
    while core and core[0].is_silence:
        core.pop(0)
    while core and core[-1].is_silence:
        core.pop()
    return core


def _snap_to_grid(track: TimestampTrack, w: FrameWeights) -> list[TrackEntry]:
    """Entries with boundaries snapped to exact frame-grid products.

    Tracks read back from CTM carry millisecond-quantized times; snapping
    keeps every comparison against freshly computed ``frame * frame_ms``
    values exact.  Off-grid boundaries are an error.
    """
    fm, n = w.frame_ms, w.n_frames
    snapped = []
    for entry in track.entries:
        s = _frame_of(entry.start_ms, fm, n, track.utt_id)
        t = _frame_of(entry.end_ms, fm, n, track.utt_id)
        snapped.append(replace(entry, start_ms=s * fm, end_ms=t * fm))
    return snapped


def _all_silence_track(utt_id: str, total_ms: float) -> TimestampTrack:
    return TimestampTrack(
        utt_id=utt_id, entries=(TrackEntry(SILENCE, 0.0, total_ms),)
    )


def trim_boundary_silence(
    track: TimestampTrack, w: FrameWeights, p: PostprocParams
) -> TimestampTrack:
    """Declare leading/trailing low-weight frames silence.

    The first token's start moves to the first frame with weight >=
    ``theta_s``; the last token's end is clipped (never extended) to
    ``end_keep_frames`` past the last such frame.  Tokens never shrink
    below one frame.  If every frame is low, or nothing fired, the whole
    utterance is one silence entry.
    """
    fm = w.frame_ms
    n = w.n_frames
    high = np.flatnonzero(w.alpha >= p.theta_s)
    core = _strip_boundary_silence(track.entries)
    if high.size == 0 or not any(not e.is_silence for e in core):
        return _all_silence_track(track.utt_id, n * fm)
    b = int(high[0])
    e = int(high[-1])

    # all boundary arithmetic happens in integer frame indices; every
    # emitted time is a single frame * frame_ms product
    frames = [
        (
            _frame_of(entry.start_ms, fm, n, track.utt_id),
            _frame_of(entry.end_ms, fm, n, track.utt_id),
            entry,
        )
        for entry in core
    ]
    s0, e0, first = frames[0]
    if b > 0:
        frames[0] = (max(s0, min(b, e0 - 1)), e0, first)
    cut = e + p.end_keep_frames + 1
    s_last, e_last, last = frames[-1]
    if cut < e_last:
        frames[-1] = (s_last, max(cut, s_last + 1), last)

    out: list[TrackEntry] = []
    if b > 0 and frames[0][0] > 0:
        out.append(TrackEntry(SILENCE, 0.0, frames[0][0] * fm))
    out.extend(
        replace(entry, start_ms=s * fm, end_ms=t * fm) for s, t, entry in frames
    )
    sil_start = max(cut, frames[-1][1])
    if sil_start < n:
        out.append(TrackEntry(SILENCE, sil_start * fm, n * fm))
    return TimestampTrack(utt_id=track.utt_id, entries=tuple(out))


def fire_delay_and_insert(
    track: TimestampTrack,
    w: FrameWeights,
    p: PostprocParams,
    *,
    fire_delay: bool = True,
    silence_insertion: bool = True,
) -> TimestampTrack:
    """Redistribute low-weight runs lying between two adjacent tokens.

    For each maximal run of low frames starting at a token's end boundary
    and ending before the next token's content: with silence insertion
    enabled, runs longer than ``l_s`` become a silence entry covering the
    run except its last frame; otherwise fire delay extends the previous
    token across the run except its last frame.  Either way the next
    token's start moves to the run's last frame (the accumulation onset is
    reliable, so the frame feeding the next fire stays with it).  The fire
    frame itself never joins a run: it carries the closing weight mass.
    Runs after the final token are left to boundary trimming.
    """
    fm = w.frame_ms
    n = w.n_frames
    low = w.alpha < p.theta_s
    entries = _snap_to_grid(track, w)
    inserts: dict[int, TrackEntry] = {}
    for idx in range(len(entries) - 1):
        a, b = entries[idx], entries[idx + 1]
        if a.is_silence or b.is_silence:
            continue
        g = _frame_of(a.end_ms, fm, n, track.utt_id)
        h = _frame_of(b.end_ms, fm, n, track.utt_id)
        f = g
        while f <= h - 1 and f < n and low[f]:
            f += 1
        run = f - g
        if run == 0:
            continue
        last_frame = g + run - 1
        if silence_insertion and run > p.l_s:
            inserts[idx] = TrackEntry(SILENCE, g * fm, last_frame * fm)
            entries[idx + 1] = replace(b, start_ms=max(b.start_ms, last_frame * fm))
        elif fire_delay:
            entries[idx] = replace(a, end_ms=max(a.end_ms, last_frame * fm))
            entries[idx + 1] = replace(b, start_ms=max(b.start_ms, last_frame * fm))

    out: list[TrackEntry] = []
    for idx, entry in enumerate(entries):
        out.append(entry)
        if idx in inserts:
            out.append(inserts[idx])
    return TimestampTrack(utt_id=track.utt_id, entries=tuple(out))


def postprocess(
    raw: RawTimestamps | TimestampTrack,
    w: FrameWeights,
    p: PostprocParams = PostprocParams(),
    *,
    labels: Sequence[str] | None = None,
    stages: StageFlags = StageFlags(),
) -> TimestampTrack:
    """Run the enabled post-processing stages over raw timestamps.

    Accepts either raw fire intervals (optionally with labels) or an
    already-labeled track, so the pipeline is idempotent: low-weight
    classification depends only on the weights, which do not change.
    Stage order is fixed: silence trim, then fire delay / insertion,
    mirroring the cumulative ablation ladder.
    """
    if isinstance(raw, RawTimestamps):
        track = to_track(raw, labels)
    else:
        if labels is not None:
            raise ValueError("labels only apply when post-processing raw timestamps")
        track = raw
    if stages.trim:
        track = trim_boundary_silence(track, w, p)
    if stages.fire_delay or stages.silence_insertion:
        track = fire_delay_and_insert(
            track,
            w,
            p,
            fire_delay=stages.fire_delay,
            silence_insertion=stages.silence_insertion,
        )
    return track
