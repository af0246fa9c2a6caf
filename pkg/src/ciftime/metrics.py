"""Timestamp quality metrics: averaging shift and diarization error rate.

AAS averages the absolute begin/end boundary shifts over edit-distance
paired tokens.  DER treats tokens as speakers and measures the time spent
in false alarm (hypothesis speech over reference silence), missed speech,
and confusion (both speaking, but not at the paired token), relative to
the scored duration.  Both are computed exactly from interval boundaries,
with no frame or grid discretization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .align import TokenPairing, align_tokens
from .postproc import TimestampTrack

DER_DENOMINATORS = ("ref_speech", "utt_span")
CONFUSION_MODES = ("pairing", "label_only")


class UndefinedMetricError(ValueError):
    """A score has no defined value (no paired tokens / no scored time)."""


@dataclass(frozen=True)
class DerResult:
    """DER numerator components and the scored duration, in seconds."""

    false_alarm_sec: float
    missed_sec: float
    confusion_sec: float
    scored_total_sec: float

    @property
    def error_sec(self) -> float:
        return self.false_alarm_sec + self.missed_sec + self.confusion_sec

    @property
    def der(self) -> float:
        if self.scored_total_sec <= 0.0:
            raise UndefinedMetricError("DER undefined: scored duration is zero")
        return self.error_sec / self.scored_total_sec

    @property
    def der_or_none(self) -> float | None:
        return None if self.scored_total_sec <= 0.0 else self.der


def _shift_terms(
    ref: TimestampTrack, hyp: TimestampTrack, pairing: TokenPairing
) -> tuple[float, int]:
    """Sum of |start shift| + |end shift| over paired tokens, in seconds."""
    ref_tokens = ref.tokens()
    hyp_tokens = hyp.tokens()
    total_ms = 0.0
    for i, j in pairing.pairs:
        if i >= len(ref_tokens) or j >= len(hyp_tokens):
            raise ValueError(
                f"pairing index ({i}, {j}) outside token counts "
                f"({len(ref_tokens)}, {len(hyp_tokens)})"
            )
        r, h = ref_tokens[i], hyp_tokens[j]
        total_ms += abs(r.start_ms - h.start_ms) + abs(r.end_ms - h.end_ms)
    return total_ms / 1000.0, pairing.k


def aas(ref: TimestampTrack, hyp: TimestampTrack, pairing: TokenPairing) -> float:
    """Average absolute boundary shift over paired tokens, in seconds.

    Each pair contributes its start shift and its end shift; the sum is
    divided by twice the pair count.  With no paired tokens the score is
    undefined (never silently zero).
    """
    shift_sum, k = _shift_terms(ref, hyp, pairing)
    if k == 0:
        raise UndefinedMetricError("AAS undefined: no paired tokens")
    return shift_sum / (2 * k)


def _token_segments(track: TimestampTrack) -> list[tuple[float, float, int, str]]:
    return [
        (e.start_ms, e.end_ms, k, e.label) for k, e in enumerate(track.tokens())
    ]


def der(
    ref: TimestampTrack,
    hyp: TimestampTrack,
    pairing: TokenPairing,
    *,
    denominator: str = "ref_speech",
    confusion: str = "pairing",
) -> DerResult:
    """Exact interval-sweep DER between two tracks.

    At every instant the reference state is its covering token (silence
    entries and uncovered time both count as non-speech) and likewise for
    the hypothesis.  Token identity runs through the edit-distance pairing
    by default, so repeated labels are distinguished; ``confusion=
    "label_only"`` compares label strings instead.  The denominator is the
    total reference speech time, or the full track span with
    ``denominator="utt_span"``.
    """
    if denominator not in DER_DENOMINATORS:
        raise ValueError(
            f"denominator must be one of {DER_DENOMINATORS}, got {denominator!r}"
        )
    if confusion not in CONFUSION_MODES:
        raise ValueError(
            f"confusion must be one of {CONFUSION_MODES}, got {confusion!r}"
        )
    ref_segs = _token_segments(ref)
    hyp_segs = _token_segments(hyp)
    partner = dict(pairing.pairs)

    bounds = sorted(
        {t for seg in ref_segs for t in (seg[0], seg[1])}
        | {t for seg in hyp_segs for t in (seg[0], seg[1])}
    )
    fa_ms = miss_ms = conf_ms = 0.0
    ri = hi = 0
    for t0, t1 in zip(bounds, bounds[1:]):
        while ri < len(ref_segs) and ref_segs[ri][1] <= t0:
            ri += 1
        while hi < len(hyp_segs) and hyp_segs[hi][1] <= t0:
            hi += 1
        r = ref_segs[ri] if ri < len(ref_segs) and ref_segs[ri][0] <= t0 else None
        h = hyp_segs[hi] if hi < len(hyp_segs) and hyp_segs[hi][0] <= t0 else None
        if r is None and h is None:
            continue
        dur = t1 - t0
        if r is None:
            fa_ms += dur
        elif h is None:
            miss_ms += dur
        else:
            if confusion == "label_only":
                confused = r[3] != h[3]
            else:
                confused = partner.get(r[2]) != h[2]
            if confused:
                conf_ms += dur

    if denominator == "ref_speech":
        scored_ms = sum(seg[1] - seg[0] for seg in ref_segs)
    else:
        scored_ms = max(ref.span_end_ms, hyp.span_end_ms)
    return DerResult(
        false_alarm_sec=fa_ms / 1000.0,
        missed_sec=miss_ms / 1000.0,
        confusion_sec=conf_ms / 1000.0,
        scored_total_sec=scored_ms / 1000.0,
    )


@dataclass(frozen=True)
class UtteranceScore:
    """Per-utterance scoring record."""

    utt_id: str
    ref_tokens: int
    hyp_tokens: int
    k_pairs: int
    edit_distance: int
    matches: int
    substitutions: int
    insertions: int
    deletions: int
    shift_sum_sec: float
    aas_sec: float | None
    false_alarm_sec: float
    missed_sec: float
    confusion_sec: float
    scored_total_sec: float
    der: float | None

    def to_dict(self) -> dict:
        return {
            "utt_id": self.utt_id,
            "ref_tokens": self.ref_tokens,
            "hyp_tokens": self.hyp_tokens,
            "k_pairs": self.k_pairs,
            "edit_distance": self.edit_distance,
            "matches": self.matches,
            "substitutions": self.substitutions,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "shift_sum_sec": self.shift_sum_sec,
            "aas_sec": self.aas_sec,
            "false_alarm_sec": self.false_alarm_sec,
            "missed_sec": self.missed_sec,
            "confusion_sec": self.confusion_sec,
            "scored_total_sec": self.scored_total_sec,
            "der": self.der,
        }


@dataclass(frozen=True)
class ScoreReport:
    """Corpus-level scores with per-utterance breakdown.

    Corpus AAS uses a single global pair-count denominator (the sum over
    all utterances of shift terms divided by 2K_total), and corpus DER
    divides the summed error components by the summed scored durations.
    """

    aas_sec: float | None
    der: float | None
    false_alarm_sec: float
    missed_sec: float
    confusion_sec: float
    scored_total_sec: float
    k_pairs: int
    per_utt: tuple[UtteranceScore, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "aas_sec": self.aas_sec,
            "der": self.der,
            "der_pct": None if self.der is None else 100.0 * self.der,
            "false_alarm_sec": self.false_alarm_sec,
            "missed_sec": self.missed_sec,
            "confusion_sec": self.confusion_sec,
            "scored_total_sec": self.scored_total_sec,
            "k_pairs": self.k_pairs,
            "utterances": len(self.per_utt),
            "per_utt": [u.to_dict() for u in self.per_utt],
        }


def score_pair(
    ref: TimestampTrack,
    hyp: TimestampTrack,
    *,
    pairs: str = "match_and_sub",
    denominator: str = "ref_speech",
    confusion: str = "pairing",
) -> UtteranceScore:
    """Align one ref/hyp track pair and compute its metric pieces."""
    if ref.utt_id != hyp.utt_id:
        raise ValueError(f"utterance mismatch: {ref.utt_id!r} vs {hyp.utt_id!r}")
    pairing = align_tokens(ref.labels(), hyp.labels(), pairs=pairs)
    shift_sum, k = _shift_terms(ref, hyp, pairing)
    components = der(ref, hyp, pairing, denominator=denominator, confusion=confusion)
    return UtteranceScore(
        utt_id=ref.utt_id,
        ref_tokens=len(ref.tokens()),
        hyp_tokens=len(hyp.tokens()),
        k_pairs=k,
        edit_distance=pairing.edit_distance,
        matches=pairing.matches,
        substitutions=pairing.substitutions,
        insertions=pairing.insertions,
        deletions=pairing.deletions,
        shift_sum_sec=shift_sum,
        aas_sec=None if k == 0 else shift_sum / (2 * k),
        false_alarm_sec=components.false_alarm_sec,
        missed_sec=components.missed_sec,
        confusion_sec=components.confusion_sec,
        scored_total_sec=components.scored_total_sec,
        der=components.der_or_none,
    )


def score_corpus(
    track_pairs,
    *,
    pairs: str = "match_and_sub",
    denominator: str = "ref_speech",
    confusion: str = "pairing",
) -> ScoreReport:
    """Score (ref, hyp) track pairs and aggregate corpus-level metrics."""
    per_utt = [
        score_pair(ref, hyp, pairs=pairs, denominator=denominator, confusion=confusion)
        for ref, hyp in track_pairs
    ]
    shift_total = sum(u.shift_sum_sec for u in per_utt)
    k_total = sum(u.k_pairs for u in per_utt)
    fa = sum(u.false_alarm_sec for u in per_utt)
    miss = sum(u.missed_sec for u in per_utt)
    conf = sum(u.confusion_sec for u in per_utt)
    scored = sum(u.scored_total_sec for u in per_utt)
    return ScoreReport(
        aas_sec=None if k_total == 0 else shift_total / (2 * k_total),
        der=None if scored <= 0.0 else (fa + miss + conf) / scored,
        false_alarm_sec=fa,
        missed_sec=miss,
        confusion_sec=conf,
        scored_total_sec=scored,
        k_pairs=k_total,
        per_utt=tuple(per_utt),
    )
