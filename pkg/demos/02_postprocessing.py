#!/usr/bin/env python3
"""Show what each post-processing stage does to one synthetic utterance.

The generator bunches each token's weight mass into its first 4 frames,
so raw fire boundaries end tokens far too early and swallow silence.
Boundary trimming, fire delay and silence insertion repair the track step
by step; the printout compares every stage against the ground truth.
"""

from ciftime import (
    StageFlags,
    SynthSpec,
    generate,
    integrate_and_fire,
    postprocess,
    raw_timestamps,
)

spec = SynthSpec(
    rng_seed=7,
    n_tokens=4,
    token_dur_frames=(4, 6),
    onset_spread_frames=4,
    leading_sil_frames=4,
    trailing_sil_frames=4,
    pause_count=1,
    pause_frames=(6, 6),
    utt_id="demo",
)
w, truth = generate(spec)

raw = raw_timestamps(integrate_and_fire(w), w)
stages = [
    ("raw (no post-processing)", StageFlags.none()),
    ("+ boundary silence trim", StageFlags(True, False, False)),
    ("+ fire delay", StageFlags(True, True, False)),
    ("+ silence insertion", StageFlags(True, True, True)),
]


def show(name, track):
    spans = "  ".join(
        f"{e.label}[{e.start_ms:.0f},{e.end_ms:.0f})" for e in track.entries
    )
    print(f"{name:<28} {spans}")


show("ground truth", truth)
print()
for name, flags in stages:
    track = postprocess(raw, w, labels=truth.labels(), stages=flags)
    show(name, track)
