"""Continuous integrate-and-fire over a frame-level weight sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .weights import FrameWeights


@dataclass(frozen=True)
class FireEvent:
    """One emitted token: where the accumulated weight crossed the threshold.

    ``residue_into_next`` is the part of the fire frame's weight carried
    into the following token.  It is strictly below the threshold except
    when a single frame holds more than one threshold of mass, in which
    case it saturates at the threshold (the stacked fire consumes it
    within the same frame).
    """

    token_index: int
    fire_frame: int
    residue_into_next: float


@dataclass(frozen=True)
class FireResult:
    """Fire events plus the per-token frame-coefficient breakdown.

    ``token_coeffs[k]`` lists ``(frame_index, coefficient)`` pairs whose
    coefficients sum to the threshold: the mixing weights with which the
    corresponding encoder frames would be combined into token k's acoustic
    embedding.  ``tail_residue`` is the accumulated mass after the last
    fire; below the threshold it emits no token.
    """

    events: tuple[FireEvent, ...]
    token_coeffs: tuple[tuple[tuple[int, float], ...], ...]
    tail_residue: float

    @property
    def token_count(self) -> int:
        return len(self.events)

    @property
    def fire_frames(self) -> tuple[int, ...]:
        return tuple(ev.fire_frame for ev in self.events)


@dataclass(frozen=True)
class RawTimestamps:
    """Token intervals implied by fire boundaries, in milliseconds.

    Intervals tile a prefix of [0, n_frames * frame_ms) without gaps.  A
    zero-width interval can only occur when one frame fired more than once
    (frame weight above the threshold).
    """

    utt_id: str
    intervals: tuple[tuple[int, float, float], ...]

    def __post_init__(self) -> None:
        prev_end = 0.0
        for token_index, start_ms, end_ms in self.intervals:
            if start_ms > end_ms or start_ms < prev_end:
                raise ValueError(
                    f"intervals must be ordered and non-overlapping, got "
                    f"token {token_index} [{start_ms}, {end_ms}) after {prev_end}"
                )
            prev_end = end_ms


def integrate_and_fire(
    w: FrameWeights,
    threshold: float = 1.0,
    *,
    tail_fire_min: float | None = None,
) -> FireResult:
    """Scan frames left to right, firing a token per threshold crossing.

    The running weight total is accumulated frame by frame; whenever it
    reaches ``k * threshold`` at frame t, token k-1 fires at t.  The fire
    frame's weight is split exactly: the closing token receives just enough
    to total ``threshold`` and the remainder opens the next token.
    Reaching the threshold exactly fires with zero residue.  Trailing mass
    below the threshold is reported as ``tail_residue`` and emits no token
    unless ``tail_fire_min`` is set and the tail reaches it, in which case
    a final token is emitted at the last frame (its coefficients then sum
    to the tail mass, not the threshold).
    """
    if not (math.isfinite(threshold) and threshold > 0.0):
        raise ValueError(f"threshold must be positive and finite, got {threshold}")

    events: list[FireEvent] = []
    coeffs: list[tuple[tuple[int, float], ...]] = []
    current: list[tuple[int, float]] = []
    total = 0.0
    fired = 0
    boundary = threshold
    for t, a in enumerate(w.alpha.tolist()):
        prev = total
        total += a
        if total < boundary:
            if a > 0.0:
                current.append((t, a))
            continue
        while total >= boundary:
            closing = boundary - max(prev, fired * threshold)
            if closing > 0.0:
                current.append((t, closing))
            coeffs.append(tuple(current))
            current = []
            carried = total - boundary
            events.append(
                FireEvent(
                    token_index=fired,
                    fire_frame=t,
                    residue_into_next=min(carried, threshold),
                )
            )
            fired += 1
            boundary = (fired + 1) * threshold
        leftover = total - fired * threshold
        if leftover > 0.0:
            current.append((t, leftover))

    tail = max(total - fired * threshold, 0.0)
    if tail_fire_min is not None and tail >= tail_fire_min and current:
        last_frame = w.n_frames - 1
        events.append(
            FireEvent(token_index=fired, fire_frame=last_frame, residue_into_next=0.0)
        )
        coeffs.append(tuple(current))
        tail = 0.0
    return FireResult(events=tuple(events), token_coeffs=tuple(coeffs), tail_residue=tail)


def raw_timestamps(fr: FireResult, w: FrameWeights) -> RawTimestamps:
    """Convert fire events into token intervals on the frame grid.

    Token 0 starts at frame 0; token k starts right after token k-1's fire
    frame and ends right after its own.  Boundaries are placed at fire
    frames, so intervals never overlap even when residue carries across a
    fire frame; the soft (coefficient) view stays available in the
    FireResult for anyone needing the overlap.
    """
    if fr.events and fr.events[-1].fire_frame >= w.n_frames:
        raise ValueError(
            f"fire frame {fr.events[-1].fire_frame} outside the "
            f"{w.n_frames}-frame utterance {w.utt_id!r}"
        )
    intervals = []
    start_frame = 0
    for ev in fr.events:
        end_frame = ev.fire_frame + 1
        intervals.append(
            (ev.token_index, start_frame * w.frame_ms, end_frame * w.frame_ms)
        )
        start_frame = end_frame
    return RawTimestamps(utt_id=w.utt_id, intervals=tuple(intervals))
