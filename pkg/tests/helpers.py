"""Independent reference oracles shared by the test modules.

Everything here deliberately avoids the library's own algorithms: the
edit distance is a plain full-matrix DP without backtrace, and the DER
oracle classifies discretized time bins at their midpoints instead of
sweeping interval boundaries.
"""

from __future__ import annotations

import math
from bisect import bisect_right


def dp_edit_distance(ref, hyp) -> int:
    """Full-matrix Levenshtein distance, values only."""
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i
    for j in range(m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            d[i][j] = min(d[i - 1][j - 1] + cost, d[i - 1][j] + 1, d[i][j - 1] + 1)
    return d[n][m]


def _covering_token(tokens, starts, t_ms):
    """Index of the token interval covering time t_ms, else None."""
    k = bisect_right(starts, t_ms) - 1
    if k >= 0 and tokens[k][0] <= t_ms < tokens[k][1]:
        return k
    return None


def discretized_der(ref, hyp, pairing, *, bin_ms=1.0, confusion="pairing",
                    denominator="ref_speech"):
    """Brute-force DER: classify every time bin at its midpoint.

    Returns (false_alarm_sec, missed_sec, confusion_sec, scored_sec).
    """
    ref_tokens = [(e.start_ms, e.end_ms, i, e.label)
                  for i, e in enumerate(ref.tokens())]
    hyp_tokens = [(e.start_ms, e.end_ms, j, e.label)
                  for j, e in enumerate(hyp.tokens())]
    ref_starts = [t[0] for t in ref_tokens]
    hyp_starts = [t[0] for t in hyp_tokens]
    partner = dict(pairing.pairs)
    span = max([t[1] for t in ref_tokens + hyp_tokens] or [0.0])
    n_bins = int(math.ceil(span / bin_ms))
    fa = miss = conf = 0
    for i in range(n_bins):
        mid = (i + 0.5) * bin_ms
        r = _covering_token(ref_tokens, ref_starts, mid)
        h = _covering_token(hyp_tokens, hyp_starts, mid)
        if r is None and h is None:
            continue
        if r is None:
            fa += 1
        elif h is None:
            miss += 1
        else:
            if confusion == "label_only":
                bad = ref_tokens[r][3] != hyp_tokens[h][3]
            else:
                bad = partner.get(r) != h
            if bad:
                conf += 1
    if denominator == "ref_speech":
        scored_ms = sum(t[1] - t[0] for t in ref_tokens)
    else:
        scored_ms = max(ref.span_end_ms, hyp.span_end_ms)
    to_sec = bin_ms / 1000.0
    return fa * to_sec, miss * to_sec, conf * to_sec, scored_ms / 1000.0


def direct_aas(ref, hyp, pairing):
    """AAS recomputed directly from the paired boundary shifts."""
    ref_tokens = ref.tokens()
    hyp_tokens = hyp.tokens()
    total = 0.0
    for i, j in pairing.pairs:
        total += abs(ref_tokens[i].start_ms - hyp_tokens[j].start_ms)
        total += abs(ref_tokens[i].end_ms - hyp_tokens[j].end_ms)
    return total / (2 * len(pairing.pairs)) / 1000.0


def random_track_pair(rng, utt_id="u", target_span_ms=12000):
    """A reference track and a perturbed hypothesis, on the 1 ms grid.

    The hypothesis jitters boundaries and applies deletions, substitutions
    and spurious insertions, so the edit-distance pairing is non-trivial.
    Some reference gaps become explicit silence entries.  All boundaries
    are integer milliseconds.
    """
    from ciftime import SILENCE, TimestampTrack, TrackEntry

    pool = ["ka", "to", "mi", "ru", "se", "na"]
    ref_items = []  # (label, start, end); trailing item is always a token
    cursor = int(rng.integers(0, 400))
    while True:
        dur = int(rng.integers(120, 700))
        lab = pool[int(rng.integers(len(pool)))]
        ref_items.append((lab, cursor, cursor + dur))
        cursor += dur
        if cursor >= target_span_ms:
            break
        if rng.random() < 0.35:
            gap = int(rng.integers(60, 800))
            if rng.random() < 0.4:
                ref_items.append((SILENCE, cursor, cursor + gap))
            cursor += gap

    hyp_items = []
    prev_end = 0
    for lab, s, e in ref_items:
        if lab == SILENCE:
            continue
        if rng.random() < 0.08:
            continue  # deletion
        if rng.random() < 0.08:
            lab = pool[int(rng.integers(len(pool)))]  # substitution
        s2 = max(s + int(rng.integers(-150, 151)), prev_end)
        e2 = max(e + int(rng.integers(-150, 151)), s2 + 40)
        if prev_end > 0 and s2 - prev_end >= 240 and rng.random() < 0.25:
            ins_start = prev_end + 20
            ins_end = ins_start + (s2 - prev_end) // 2
            hyp_items.append(
                (pool[int(rng.integers(len(pool)))], ins_start, ins_end)
            )
        hyp_items.append((lab, s2, e2))
        prev_end = e2

    ref = TimestampTrack(
        utt_id, tuple(TrackEntry(lab, float(s), float(e)) for lab, s, e in ref_items)
    )
    hyp = TimestampTrack(
        utt_id, tuple(TrackEntry(lab, float(s), float(e)) for lab, s, e in hyp_items)
    )
    return ref, hyp
