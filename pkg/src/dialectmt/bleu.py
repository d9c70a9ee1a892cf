"""Corpus-level BLEU with a single reference per hypothesis."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from ._validation import as_token_tuple

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuReport:
    precisions: tuple[float, ...]
    matches: tuple[int, ...]
    totals: tuple[int, ...]
    brevity_penalty: float
    hyp_len: int
    ref_len: int
    score: float

    def as_tsv(self) -> str:
        """``p1 p2 p3 p4 BP bleu`` with BLEU as a percentage."""
        cols = [f"{p:.4f}" for p in self.precisions]
        cols += [f"{self.brevity_penalty:.4f}", f"{100 * self.score:.2f}"]
        return "\t".join(cols)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def compute_bleu(hypotheses: Sequence, references: Sequence, max_order: int = MAX_ORDER) -> BleuReport:
    """Clipped n-gram matches are summed over the corpus before dividing."""
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses but {len(references)} references")
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")
    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp, ref = as_token_tuple(hyp), as_token_tuple(ref)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_order + 1):
            h, r = ngrams(hyp, n), ngrams(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += max(len(hyp) - n + 1, 0)
    precisions = tuple(m / t if t else 0.0 for m, t in zip(matches, totals))
    if hyp_len == 0:
        bp = 0.0
    elif hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len)
    else:
        bp = 1.0
    if min(precisions) > 0 and bp > 0:
        score = bp * math.exp(sum(math.log(p) for p in precisions) / max_order)
    else:
        score = 0.0
    return BleuReport(precisions, tuple(matches), tuple(totals), bp, hyp_len, ref_len,
                      min(score, 1.0))
