#!/usr/bin/env python3
"""Score a hypothesis track against a reference: pairing, AAS and DER.

The hypothesis drops one token, mislabels another, and jitters every
boundary.  Edit-distance alignment decides which tokens are compared;
AAS averages the paired boundary shifts while DER measures misclassified
time (treating tokens as diarization speakers).
"""

from ciftime import TimestampTrack, TrackEntry, aas, align_tokens, der

ref = TimestampTrack(
    "demo",
    (
        TrackEntry("ni", 0.0, 400.0),
        TrackEntry("hao", 400.0, 800.0),
        TrackEntry("shi", 900.0, 1300.0),
        TrackEntry("jie", 1300.0, 1800.0),
    ),
)
hyp = TimestampTrack(
    "demo",
    (
        TrackEntry("ni", 40.0, 430.0),
        TrackEntry("hao", 430.0, 860.0),
        TrackEntry("die", 1340.0, 1800.0),  # "shi" missed, "jie" mislabeled
    ),
)

pairing = align_tokens(ref.labels(), hyp.labels())
print("reference :", " ".join(ref.labels()))
print("hypothesis:", " ".join(hyp.labels()))
print(f"edit distance {pairing.edit_distance} "
      f"(matches={pairing.matches}, subs={pairing.substitutions}, "
      f"ins={pairing.insertions}, dels={pairing.deletions})")
print("paired token indices:", pairing.pairs)

print(f"\nAAS over K={pairing.k} pairs: {aas(ref, hyp, pairing):.4f} s")

components = der(ref, hyp, pairing)
print("\nDER sweep over the track span:")
print(f"  false alarm {components.false_alarm_sec:.3f} s")
print(f"  missed      {components.missed_sec:.3f} s")
print(f"  confusion   {components.confusion_sec:.3f} s")
print(f"  scored      {components.scored_total_sec:.3f} s (reference speech)")
print(f"  DER = {100 * components.der:.2f} %")
