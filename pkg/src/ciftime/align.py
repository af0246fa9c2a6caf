"""Edit-distance token pairing between two label sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

PAIR_MODES = ("match_and_sub", "match_only")


@dataclass(frozen=True)
class TokenPairing:
    """Monotone alignment between reference and hypothesis tokens.

    ``pairs`` holds (ref_index, hyp_index) for every aligned position that
    survives the pairing mode; indices are 0-based and strictly increasing
    in both coordinates.  The edit counts always describe the full
    alignment regardless of mode.
    """

    pairs: tuple[tuple[int, int], ...]
    edit_distance: int
    matches: int
    substitutions: int
    insertions: int
    deletions: int

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.matches, self.substitutions, self.insertions, self.deletions)

    def swapped(self) -> "TokenPairing":
        """The same alignment viewed with ref and hyp exchanged."""
        return TokenPairing(
            pairs=tuple((j, i) for i, j in self.pairs),
            edit_distance=self.edit_distance,
            matches=self.matches,
            substitutions=self.substitutions,
            insertions=self.deletions,
            deletions=self.insertions,
        )


def align_tokens(
    ref_labels: Sequence[str],
    hyp_labels: Sequence[str],
    *,
    pairs: str = "match_and_sub",
) -> TokenPairing:
    """Levenshtein-align two label sequences with unit costs.

    The backtrace is deterministic, breaking ties by preferring
    match > substitution > deletion > insertion, so K (the number of
    paired tokens) is reproducible.  With ``pairs="match_and_sub"``
    substituted positions count as pairs (they correspond temporally even
    when mislabeled); ``pairs="match_only"`` restricts K to exact matches.
    """
    if pairs not in PAIR_MODES:
        raise ValueError(f"pairs mode must be one of {PAIR_MODES}, got {pairs!r}")
    n, m = len(ref_labels), len(hyp_labels)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = i
    for j in range(1, m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        row, prev_row = d[i], d[i - 1]
        ref_tok = ref_labels[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ref_tok == hyp_labels[j - 1] else 1
            row[j] = min(prev_row[j - 1] + cost, prev_row[j] + 1, row[j - 1] + 1)

    matches = substitutions = insertions = deletions = 0
    aligned: list[tuple[int, int, bool]] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref_labels[i - 1] == hyp_labels[j - 1] and d[i][j] == d[i - 1][j - 1]:
            aligned.append((i - 1, j - 1, True))
            matches += 1
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and d[i][j] == d[i - 1][j - 1] + 1:
            aligned.append((i - 1, j - 1, False))
            substitutions += 1
            i, j = i - 1, j - 1
        elif i > 0 and d[i][j] == d[i - 1][j] + 1:
            deletions += 1
            i -= 1
        else:
            insertions += 1
            j -= 1
    aligned.reverse()

    if pairs == "match_only":
        kept = tuple((a, b) for a, b, is_match in aligned if is_match)
    else:
        kept = tuple((a, b) for a, b, _ in aligned)
    return TokenPairing(
        pairs=kept,
        edit_distance=d[n][m],
        matches=matches,
        substitutions=substitutions,
        insertions=insertions,
        deletions=deletions,
    )
