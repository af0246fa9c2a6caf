"""Command-line pipeline: fire -> post -> eval, plus synth and ablate."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .fire import integrate_and_fire, raw_timestamps
from .io import (
    RunConfig,
    WeightsRecord,
    format_ctm,
    read_ctm,
    read_weights_file,
    resolve_config,
    write_ctm,
    write_weights_file,
)
from .metrics import score_corpus
from .postproc import StageFlags, TimestampTrack, postprocess, to_track
from .synth import make_corpus
from .weights import apply_scaled_cif, weaken_spikes

_LADDER = (
    ("0", "raw timestamps", StageFlags.none()),
    ("1", "+boundary silence trim", StageFlags(True, False, False)),
    ("2", "+fire delay", StageFlags(True, True, False)),
    ("3", "+silence insertion", StageFlags(True, True, True)),
)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _report(errors: list[str]) -> int:
    for err in errors:
        print(err, file=sys.stderr)
    return 1 if errors else 0


def _prepare_weights(rec: WeightsRecord, cfg: RunConfig):
    w = rec.weights
    if cfg.scaled:
        w = apply_scaled_cif(w, cfg.scale_params())
    if cfg.weaken_window is not None:
        w = weaken_spikes(w, cfg.weaken_window)
    return w


def _fire_tracks(
    records: list[WeightsRecord], cfg: RunConfig
) -> tuple[list[tuple[WeightsRecord, TimestampTrack]], list[str]]:
    """Raw fire tracks per record; failures become per-record diagnostics."""
    out: list[tuple[WeightsRecord, TimestampTrack]] = []
    errors: list[str] = []
    for rec in records:
        try:
            w = _prepare_weights(rec, cfg)
            fr = integrate_and_fire(w, cfg.threshold, tail_fire_min=cfg.tail_fire_min)
            raw = raw_timestamps(fr, w)
            out.append((rec, to_track(raw, rec.tokens)))
        except ValueError as exc:
            errors.append(f"line {rec.line_no} ({rec.weights.utt_id}): {exc}")
    return out, errors


def cmd_fire(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args.config,
        threshold=args.threshold,
        scaled=args.scaled,
        gamma=args.gamma,
        beta=args.beta,
        weaken_window=args.weaken_window,
        tail_fire_min=args.tail_fire_min,
    )
    records, errors = read_weights_file(args.weights)
    fired, fire_errors = _fire_tracks(records, cfg)
    errors.extend(fire_errors)
    _write_text(args.output, format_ctm(track for _, track in fired))
    return _report(errors)


def cmd_post(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args.config,
        theta_s=args.theta_s,
        l_s=args.l_s,
        end_keep_frames=args.end_keep_frames,
        trim=args.trim,
        fire_delay=args.fire_delay,
        silence_insertion=args.silence_insertion,
        scaled=args.scaled,
        weaken_window=args.weaken_window,
    )
    records, errors = read_weights_file(args.weights)
    raw_tracks, ctm_errors = read_ctm(args.raw_ctm)
    errors.extend(f"{args.raw_ctm}: {e}" for e in ctm_errors)
    known = {rec.weights.utt_id for rec in records}
    for utt_id in sorted(set(raw_tracks) - known):
        errors.append(f"utterance {utt_id!r} in CTM but not in weights file")

    results = []
    for rec in records:
        # An utterance absent from the CTM fired no tokens; post-processing
        # still classifies it (typically into pure silence).
        track = raw_tracks.get(
            rec.weights.utt_id,
            TimestampTrack(utt_id=rec.weights.utt_id, entries=()),
        )
        try:
            w = _prepare_weights(rec, cfg)
            results.append(
                postprocess(
                    track, w, cfg.postproc_params(), stages=cfg.stage_flags()
                )
            )
        except ValueError as exc:
            errors.append(f"line {rec.line_no} ({rec.weights.utt_id}): {exc}")
    _write_text(args.output, format_ctm(results))
    return _report(errors)


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args.config,
        der_denominator=args.der_denominator,
        pairs=args.pairs,
        confusion=args.confusion,
    )
    errors: list[str] = []
    ref_tracks, ref_errors = read_ctm(args.ref_ctm)
    hyp_tracks, hyp_errors = read_ctm(args.hyp_ctm)
    errors.extend(f"{args.ref_ctm}: {e}" for e in ref_errors)
    errors.extend(f"{args.hyp_ctm}: {e}" for e in hyp_errors)
    only_ref = sorted(set(ref_tracks) - set(hyp_tracks))
    only_hyp = sorted(set(hyp_tracks) - set(ref_tracks))
    if only_ref:
        errors.append(f"utterances only in reference: {', '.join(only_ref)}")
    if only_hyp:
        errors.append(f"utterances only in hypothesis: {', '.join(only_hyp)}")

    common = sorted(set(ref_tracks) & set(hyp_tracks))
    report = score_corpus(
        ((ref_tracks[u], hyp_tracks[u]) for u in common),
        pairs=cfg.pairs,
        denominator=cfg.der_denominator,
        confusion=cfg.confusion,
    )
    _write_text(args.output, json.dumps(report.to_dict(), indent=2) + "\n")
    return _report(errors)


def cmd_synth(args: argparse.Namespace) -> int:
    corpus = make_corpus(seed=args.seed, n_utts=args.utts, frame_ms=args.frame_ms)
    write_weights_file(args.weights, [(w, truth.labels()) for w, truth in corpus])
    write_ctm(args.ref, (truth for _, truth in corpus))
    print(
        f"wrote {len(corpus)} utterances to {args.weights} (reference: {args.ref})",
        file=sys.stderr,
    )
    return 0


def ablate_rows(
    records: list[WeightsRecord],
    ref_tracks: dict[str, TimestampTrack],
    cfg: RunConfig,
) -> tuple[list[dict], list[str]]:
    """Score every ladder rung; scaled rungs run only when logits exist."""
    errors: list[str] = []
    if not records:
        return [], errors
    systems = [("cif", False)]
    if all(rec.weights.logits is not None for rec in records):
        systems.append(("scif", True))
    elif any(rec.weights.logits is not None for rec in records):
        errors.append(
            "scaled rungs skipped: some records carry no logits"
        )

    rows: list[dict] = []
    for system, scaled in systems:
        sys_cfg = replace(cfg, scaled=scaled)
        fired, fire_errors = _fire_tracks(records, sys_cfg)
        errors.extend(f"[{system}] {e}" for e in fire_errors)
        scorable = [
            (rec, track) for rec, track in fired if rec.weights.utt_id in ref_tracks
        ]
        for utt_id in sorted(
            {rec.weights.utt_id for rec, _ in fired} - set(ref_tracks)
        ):
            errors.append(f"[{system}] utterance {utt_id!r} missing from reference")
        for rung, description, stages in _LADDER:
            pairs = []
            for rec, track in scorable:
                w = _prepare_weights(rec, sys_cfg)
                hyp = postprocess(
                    track, w, sys_cfg.postproc_params(), stages=stages
                )
                pairs.append((ref_tracks[rec.weights.utt_id], hyp))
            report = score_corpus(
                pairs,
                pairs=sys_cfg.pairs,
                denominator=sys_cfg.der_denominator,
                confusion=sys_cfg.confusion,
            )
            rows.append(
                {
                    "system": f"{system}-{rung}",
                    "stages": description,
                    "aas_sec": report.aas_sec,
                    "der": report.der,
                    "der_pct": None if report.der is None else 100.0 * report.der,
                }
            )
    return rows, errors


def _format_table(rows: list[dict]) -> str:
    header = f"{'system':<8} {'stages':<24} {'AAS (sec)':>10} {'DER (%)':>8}"
    lines = [header, "-" * len(header)]
    for row in rows:
        aas = "n/a" if row["aas_sec"] is None else f"{row['aas_sec']:.4f}"
        der = "n/a" if row["der_pct"] is None else f"{row['der_pct']:.2f}"
        lines.append(
            f"{row['system']:<8} {row['stages']:<24} {aas:>10} {der:>8}"
        )
    return "".join(line + "\n" for line in lines)


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = resolve_config(
        args.config,
        threshold=args.threshold,
        gamma=args.gamma,
        beta=args.beta,
        theta_s=args.theta_s,
        l_s=args.l_s,
        end_keep_frames=args.end_keep_frames,
        der_denominator=args.der_denominator,
        pairs=args.pairs,
        confusion=args.confusion,
        weaken_window=args.weaken_window,
        tail_fire_min=args.tail_fire_min,
    )
    records, errors = read_weights_file(args.weights)
    ref_tracks, ref_errors = read_ctm(args.ref_ctm)
    errors.extend(f"{args.ref_ctm}: {e}" for e in ref_errors)
    rows, ablate_errors = ablate_rows(records, ref_tracks, cfg)
    errors.extend(ablate_errors)
    if args.json:
        _write_text(args.output, json.dumps(rows, indent=2) + "\n")
    else:
        _write_text(args.output, _format_table(rows))
    return _report(errors)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with RunConfig overrides")
    parser.add_argument(
        "-o", "--output", default=None, help="output path (default: stdout)"
    )


def _add_fire_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold", type=float, help="fire threshold (default 1.0)")
    parser.add_argument("--gamma", type=float, help="weight scaling factor")
    parser.add_argument("--beta", type=float, help="weight clipping offset")
    parser.add_argument(
        "--weaken-window",
        type=int,
        help="experimental: odd moving-average window to weaken weight spikes",
    )
    parser.add_argument(
        "--tail-fire-min",
        type=float,
        help="emit a final token when the tail residue reaches this value",
    )


def _add_post_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta-s", type=float, help="low-weight threshold")
    parser.add_argument("--l-s", type=int, help="max low run absorbed by fire delay")
    parser.add_argument(
        "--end-keep-frames",
        type=int,
        help="frames kept on the last token before trailing silence",
    )


def _add_eval_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--der-denominator",
        choices=("ref_speech", "utt_span"),
        help="scored duration: reference speech (default) or full span",
    )
    parser.add_argument(
        "--pairs",
        choices=("match_and_sub", "match_only"),
        help="which aligned positions count as pairs",
    )
    parser.add_argument(
        "--confusion",
        choices=("pairing", "label_only"),
        help="token identity for DER confusion",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ciftime",
        description=(
            "Turn frame-level integrate-and-fire weights into token "
            "timestamps, post-process them, and score timestamp tracks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fire = sub.add_parser("fire", help="raw timestamps from a weights file")
    p_fire.add_argument("weights", help="line-delimited JSON weights file")
    _add_common(p_fire)
    _add_fire_options(p_fire)
    p_fire.add_argument(
        "--scaled",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="recompute weights from logits with the scaling transform",
    )
    p_fire.set_defaults(func=cmd_fire)

    p_post = sub.add_parser("post", help="post-process raw timestamps")
    p_post.add_argument("weights")
    p_post.add_argument("raw_ctm", help="CTM produced by the fire command")
    _add_common(p_post)
    _add_post_options(p_post)
    for stage in ("trim", "fire-delay", "silence-insertion"):
        p_post.add_argument(
            f"--{stage}",
            action=argparse.BooleanOptionalAction,
            default=None,
            help=f"toggle the {stage.replace('-', ' ')} stage",
        )
    p_post.add_argument(
        "--scaled", action=argparse.BooleanOptionalAction, default=None,
        help="classify low frames on scaled weights (as used for firing)",
    )
    p_post.add_argument(
        "--weaken-window",
        type=int,
        help="experimental: odd moving-average window to weaken weight spikes",
    )
    p_post.set_defaults(func=cmd_post)

    p_eval = sub.add_parser("eval", help="score a hypothesis CTM against a reference")
    p_eval.add_argument("ref_ctm")
    p_eval.add_argument("hyp_ctm")
    _add_common(p_eval)
    _add_eval_options(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_synth = sub.add_parser(
        "synth", help="generate a synthetic corpus with ground-truth timestamps"
    )
    p_synth.add_argument("--weights", required=True, help="output weights file")
    p_synth.add_argument("--ref", required=True, help="output reference CTM")
    p_synth.add_argument("--utts", type=int, default=100)
    p_synth.add_argument("--seed", type=int, default=42)
    p_synth.add_argument("--frame-ms", type=float, default=40.0)
    p_synth.set_defaults(func=cmd_synth)

    p_ablate = sub.add_parser(
        "ablate", help="score the post-processing ladder against a reference"
    )
    p_ablate.add_argument("weights")
    p_ablate.add_argument("ref_ctm")
    _add_common(p_ablate)
    _add_fire_options(p_ablate)
    _add_post_options(p_ablate)
    _add_eval_options(p_ablate)
    p_ablate.add_argument("--json", action="store_true", help="emit JSON rows")
    p_ablate.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
