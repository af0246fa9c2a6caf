#!/usr/bin/env python3
"""Walk a tiny weight sequence through the integrate-and-fire scan.

Five frames with weights (0.3, 0.9, 0.4, 0.4, 0.3) hold 2.3 units of
mass, so two tokens fire and 0.3 is left as tail.  The script prints the
running accumulation and the exact frame-coefficient split of each token.
"""

from ciftime import FrameWeights, integrate_and_fire, raw_timestamps

alpha = [0.3, 0.9, 0.4, 0.4, 0.3]
w = FrameWeights("demo", frame_ms=40.0, alpha=alpha)

print("frame weights:", alpha)
total = 0.0
for t, a in enumerate(alpha):
    prev, total = total, total + a
    crossed = [k for k in (1, 2) if prev < k <= total]
    marker = f"  <- crosses {crossed[0]}.0" if crossed else ""
    print(f"  frame {t}: +{a:.1f} -> running sum {total:.2f}{marker}")

result = integrate_and_fire(w, threshold=1.0)
print(f"\n{result.token_count} tokens fired at frames {result.fire_frames}, "
      f"tail residue {result.tail_residue:.3f}")

for k, coeffs in enumerate(result.token_coeffs):
    pieces = " + ".join(f"{c:.3f}*frame{f}" for f, c in coeffs)
    print(f"  token {k} embedding coefficients: {pieces}")

raw = raw_timestamps(result, w)
print("\nraw intervals on the 40 ms frame grid:")
for token_index, start, end in raw.intervals:
    print(f"  token {token_index}: [{start:.0f}, {end:.0f}) ms")
