"""File formats: line-delimited JSON weights, CTM tracks, run config."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import IO, Iterable, Sequence

from .align import PAIR_MODES
from .metrics import CONFUSION_MODES, DER_DENOMINATORS
from .postproc import PostprocParams, StageFlags, TimestampTrack, TrackEntry
from .weights import FrameWeights, ScaleParams


@dataclass(frozen=True)
class WeightsRecord:
    """One parsed weights-file line."""

    weights: FrameWeights
    tokens: tuple[str, ...] | None
    line_no: int


def _parse_weights_obj(obj: dict, line_no: int) -> WeightsRecord:
    if not isinstance(obj, dict):
        raise ValueError(f"expected a JSON object, got {type(obj).__name__}")
    unknown = set(obj) - {"id", "frame_ms", "alpha", "logits", "tokens"}
    if unknown:
        raise ValueError(f"unknown fields {sorted(unknown)}")
    for key in ("id", "frame_ms", "alpha"):
        if key not in obj:
            raise ValueError(f"missing required field {key!r}")
    tokens = obj.get("tokens")
    if tokens is not None:
        tokens = tuple(str(t) for t in tokens)
    weights = FrameWeights(
        utt_id=str(obj["id"]),
        frame_ms=float(obj["frame_ms"]),
        alpha=obj["alpha"],
        logits=obj.get("logits"),
    )
    return WeightsRecord(weights=weights, tokens=tokens, line_no=line_no)


def read_weights_file(path) -> tuple[list[WeightsRecord], list[str]]:
    """Parse a weights file; malformed lines become diagnostics, not crashes.

    Returns the good records in file order plus one error string per bad
    line (with its 1-based line number).  Duplicate utterance ids are
    errors.
    """
    records: list[WeightsRecord] = []
    errors: list[str] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                rec = _parse_weights_obj(obj, line_no)
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                errors.append(f"line {line_no}: {exc}")
                continue
            if rec.weights.utt_id in seen:
                errors.append(f"line {line_no}: duplicate id {rec.weights.utt_id!r}")
                continue
            seen.add(rec.weights.utt_id)
            records.append(rec)
    return records, errors


def write_weights_file(
    path, records: Iterable[tuple[FrameWeights, Sequence[str] | None]]
) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for w, tokens in records:
            obj = {
                "id": w.utt_id,
                "frame_ms": w.frame_ms,
                "alpha": [float(a) for a in w.alpha],
            }
            if w.logits is not None:
                obj["logits"] = [float(x) for x in w.logits]
            if tokens is not None:
                obj["tokens"] = list(tokens)
            handle.write(json.dumps(obj) + "\n")


def read_ctm(path) -> tuple[dict[str, TimestampTrack], list[str]]:
    """Read a CTM file into one track per utterance.

    Each line is ``utt_id channel start_sec dur_sec token``; rows are
    grouped by utterance and sorted by start time.  Times are quantized to
    the printed millisecond precision so adjacent boundaries compare
    exactly.  Returns (tracks keyed by utterance id, error diagnostics).
    """
    rows: dict[str, list[TrackEntry]] = {}
    errors: list[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 5:
                errors.append(f"line {line_no}: expected 5 fields, got {len(parts)}")
                continue
            utt_id, _channel, start_s, dur_s, token = parts
            try:
                start = float(start_s)
                dur = float(dur_s)
            except ValueError:
                errors.append(f"line {line_no}: bad start/duration")
                continue
            if dur <= 0.0 or start < 0.0:
                errors.append(
                    f"line {line_no}: start must be >= 0 and duration > 0"
                )
                continue
            start_ms = round(start * 1000.0, 3)
            end_ms = round((start + dur) * 1000.0, 3)
            rows.setdefault(utt_id, []).append(TrackEntry(token, start_ms, end_ms))

    tracks: dict[str, TimestampTrack] = {}
    for utt_id, entries in rows.items():
        entries.sort(key=lambda e: (e.start_ms, e.end_ms))
        # start+duration encoding rounds the two fields independently, so
        # adjacent rows can disagree by up to ~1.5 ms; clip sub-precision
        # overlaps and leave real ones to track validation
        for i in range(1, len(entries)):
            gap = entries[i - 1].end_ms - entries[i].start_ms
            if 0.0 < gap <= 2.0:
                entries[i] = TrackEntry(
                    entries[i].label, entries[i - 1].end_ms, entries[i].end_ms
                )
        try:
            tracks[utt_id] = TimestampTrack(utt_id=utt_id, entries=tuple(entries))
        except ValueError as exc:
            errors.append(f"utterance {utt_id!r}: {exc}")
    return tracks, errors


def format_ctm(tracks: Iterable[TimestampTrack]) -> str:
    """Render tracks as CTM text, sorted by (utt_id, start), 3 decimals."""
    lines = []
    for track in sorted(tracks, key=lambda t: t.utt_id):
        for entry in track.entries:
            start = entry.start_ms / 1000.0
            dur = (entry.end_ms - entry.start_ms) / 1000.0
            start_str, dur_str = f"{start:.3f}", f"{dur:.3f}"
            if float(dur_str) <= 0.0:
                raise ValueError(
                    f"{track.utt_id!r}: entry {entry.label!r} has no duration "
                    f"at the printed precision ({dur} s)"
                )
            lines.append(f"{track.utt_id} 1 {start_str} {dur_str} {entry.label}")
    return "".join(line + "\n" for line in lines)


def write_ctm(target: IO[str] | str | Path, tracks: Iterable[TimestampTrack]) -> None:
    text = format_ctm(tracks)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


@dataclass(frozen=True)
class RunConfig:
    """All pipeline knobs, with the documented operating-point defaults."""

    threshold: float = 1.0
    theta_s: float = 0.05
    l_s: int = 3
    end_keep_frames: int = 3
    gamma: float = 0.8
    beta: float = 0.05
    trim: bool = True
    fire_delay: bool = True
    silence_insertion: bool = True
    der_denominator: str = "ref_speech"
    pairs: str = "match_and_sub"
    confusion: str = "pairing"
    scaled: bool = False
    weaken_window: int | None = None
    tail_fire_min: float | None = None

    def __post_init__(self) -> None:
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.der_denominator not in DER_DENOMINATORS:
            raise ValueError(
                f"der_denominator must be one of {DER_DENOMINATORS}, "
                f"got {self.der_denominator!r}"
            )
        if self.pairs not in PAIR_MODES:
            raise ValueError(f"pairs must be one of {PAIR_MODES}, got {self.pairs!r}")
        if self.confusion not in CONFUSION_MODES:
            raise ValueError(
                f"confusion must be one of {CONFUSION_MODES}, got {self.confusion!r}"
            )

    def scale_params(self) -> ScaleParams:
        return ScaleParams(gamma=self.gamma, beta=self.beta)

    def postproc_params(self) -> PostprocParams:
        return PostprocParams(
            theta_s=self.theta_s,
            l_s=self.l_s,
            end_keep_frames=self.end_keep_frames,
        )

    def stage_flags(self) -> StageFlags:
        return StageFlags(
            trim=self.trim,
            fire_delay=self.fire_delay,
            silence_insertion=self.silence_insertion,
        )


_CONFIG_FIELDS = {f.name for f in fields(RunConfig)}


def load_config_file(path) -> dict:
    """Load RunConfig overrides from a JSON object file."""
    with open(path, "r", encoding="utf-8") as handle:
        values = json.load(handle)
    if not isinstance(values, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    unknown = set(values) - _CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config fields {sorted(unknown)} in {path}")
    return values


def resolve_config(config_path=None, **overrides) -> RunConfig:
    """Defaults, then config-file values, then explicit (non-None) overrides."""
    values = asdict(RunConfig())
    if config_path:
        values.update(load_config_file(config_path))
    for name, value in overrides.items():
        if name not in _CONFIG_FIELDS:
            raise ValueError(f"unknown config field {name!r}")
        if value is not None:
            values[name] = value
    return RunConfig(**values)


__all__ = [
    "RunConfig",
    "WeightsRecord",
    "format_ctm",
    "load_config_file",
    "read_ctm",
    "read_weights_file",
    "resolve_config",
    "write_ctm",
    "write_weights_file",
]
