"""Joint-sequence (graphone) grapheme-to-phoneme conversion.

A graphone pairs a chunk of at most two letters with a chunk of at most two
phones; either side may be empty, not both. Training aligns every dictionary
entry into graphones by EM, then fits a trigram model over the resulting
graphone sequences. Transcription searches for the graphone sequence of the
word that the trigram model likes best.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from ..lm import BOS, EOS, TrigramLM
from .._validation import check_is_fitted

Graphone = tuple[str, tuple[str, ...]]

MAX_CHUNK = 2
# an insertion (empty letter chunk) may not follow more than this many others
MAX_INSERTIONS = 2


class G2PError(ValueError):
    """A word cannot be transcribed with the learned graphone inventory."""


def read_pronunciations(path) -> list[tuple[str, tuple[str, ...]]]:
    """``word<TAB>space-separated phones`` per line."""
    entries = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0].strip() or not cols[1].split():
            raise ValueError(f"{path}:{lineno}: expected word<TAB>phones")
        entries.append((cols[0].strip(), tuple(cols[1].split())))
    return entries


def _edges(word: str, phones: tuple[str, ...], i: int, j: int):
    for a in range(MAX_CHUNK + 1):
        if i + a > len(word):
            break
        for b in range(MAX_CHUNK + 1):
            if (a, b) == (0, 0) or j + b > len(phones):
                continue
            yield a, b, (word[i:i + a], phones[j:j + b])


def _posteriors(word, phones, prob) -> tuple[float, dict[Graphone, float]]:
    """Forward-backward over the segmentation lattice of one entry."""
    n, m = len(word), len(phones)
    fwd = [[0.0] * (m + 1) for _ in range(n + 1)]
    fwd[0][0] = 1.0
    for i in range(n + 1):
        for j in range(m + 1):
            if fwd[i][j] == 0.0:
                continue
            for a, b, g in _edges(word, phones, i, j):
                fwd[i + a][j + b] += fwd[i][j] * prob(g)
    bwd = [[0.0] * (m + 1) for _ in range(n + 1)]
    bwd[n][m] = 1.0
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if (i, j) == (n, m):
                continue
            total = 0.0
            for a, b, g in _edges(word, phones, i, j):
                total += prob(g) * bwd[i + a][j + b]
            bwd[i][j] = total
    z = fwd[n][m]
    counts: dict[Graphone, float] = defaultdict(float)
    if z <= 0.0:
        return 0.0, counts
    for i in range(n + 1):
        for j in range(m + 1):
            if fwd[i][j] == 0.0:
                continue
            for a, b, g in _edges(word, phones, i, j):
                c = fwd[i][j] * prob(g) * bwd[i + a][j + b] / z
                if c > 0.0:
                    counts[g] += c
    return z, counts


def _viterbi(word, phones, prob) -> list[Graphone]:
    n, m = len(word), len(phones)
    best = [[(-math.inf, None)] * (m + 1) for _ in range(n + 1)]
    best[0][0] = (0.0, None)
    for i in range(n + 1):
        for j in range(m + 1):
            score = best[i][j][0]
            if score == -math.inf:
                continue
            for a, b, g in _edges(word, phones, i, j):
                p = prob(g)
                if p <= 0.0:
                    continue
                cand = score + math.log(p)
                if cand > best[i + a][j + b][0]:
                    best[i + a][j + b] = (cand, (i, j, g))
    path = []
    i, j = n, m
    while (i, j) != (0, 0):
        back = best[i][j][1]
        if back is None:
            raise G2PError(f"no graphone segmentation for {word!r}")
        i, j, g = back
        path.append(g)
    return path[::-1]


class G2PModel(BaseEstimator, TransformerMixin):
    """Grapheme-to-phoneme converter over graphones of up to two symbols a side.

    Alignment uses leave-one-out EM: each entry is segmented with graphone
    probabilities estimated from the *other* entries, so a chunk seen in
    one word only cannot explain that word by memorization.

    Parameters
    ----------
    n_iter : int
        EM iterations for the graphone alignment.
    smoothing : float
        Pseudo-count mass spread uniformly over candidate graphones.
    beam_size : int
        Hypotheses kept per letter position while transcribing.
    lowercase : bool
        Fold words to lowercase before training and transcription.
    """

    def __init__(self, n_iter: int = 10, smoothing: float = 0.1, beam_size: int = 8,
                 lowercase: bool = True):
        self.n_iter = n_iter
        self.smoothing = smoothing
        self.beam_size = beam_size
        self.lowercase = lowercase

    def _fold(self, word: str) -> str:
        return word.lower() if self.lowercase else word

    def fit(self, X: Sequence[str], y: Sequence[Sequence[str]] | None = None) -> "G2PModel":
        """Train on words ``X`` and their phone sequences ``y``.

        ``X`` may also be a list of ``(word, phones)`` pairs with ``y=None``.
        """
        if y is None:
            entries = [(w, tuple(p)) for w, p in X]
        else:
            if len(X) != len(y):
                raise ValueError(f"{len(X)} words but {len(y)} pronunciations")
            entries = [(w, tuple(p.split() if isinstance(p, str) else p)) for w, p in zip(X, y)]
        if not entries:
            raise ValueError("pronunciation dictionary is empty")
        entries = [(self._fold(w), p) for w, p in entries]
        for w, p in entries:
            if not w or not p:
                raise ValueError(f"dictionary entry {w!r} -> {p!r} has an empty side")

        candidates = {g for w, p in entries
                      for i in range(len(w) + 1) for j in range(len(p) + 1)
                      for _, _, g in _edges(w, p, i, j)}
        floor = self.smoothing / len(candidates)

        # iteration 0: uniform graphone distribution
        uniform = 1.0 / len(candidates)
        per_entry = [_posteriors(w, p, lambda g: uniform)[1] for w, p in entries]
        for _ in range(self.n_iter):
            totals: dict[Graphone, float] = defaultdict(float)
            for counts in per_entry:
                for g, c in counts.items():
                    totals[g] += c
            grand = sum(totals.values())
            new_entries = []
            for (w, p), own in zip(entries, per_entry):
                denom = grand - sum(own.values()) + self.smoothing

                def prob(g, own=own, denom=denom):
                    return (totals.get(g, 0.0) - own.get(g, 0.0) + floor) / denom

                new_entries.append(_posteriors(w, p, prob)[1])
            per_entry = new_entries

        totals = defaultdict(float)
        for counts in per_entry:
            for g, c in counts.items():
                totals[g] += c
        grand = sum(totals.values())
        segmentations = []
        for (w, p), own in zip(entries, per_entry):
            denom = grand - sum(own.values()) + self.smoothing

            def prob(g, own=own, denom=denom):
                return (max(totals.get(g, 0.0) - own.get(g, 0.0), 0.0) + floor) / denom

            segmentations.append(_viterbi(w, p, prob))

        inventory: dict[Graphone, str] = {}
        for seg in segmentations:
            for g in seg:
                inventory.setdefault(g, f"g{len(inventory)}")
        self.inventory_ = inventory
        self.graphones_ = {gid: g for g, gid in inventory.items()}
        by_letters: dict[str, list[tuple[Graphone, str]]] = defaultdict(list)
        for g, gid in sorted(inventory.items()):
            by_letters[g[0]].append((g, gid))
        self.by_letters_ = dict(by_letters)
        self.segmentations_ = segmentations
        self.lm_ = TrigramLM(order=3).fit([[inventory[g] for g in seg] for seg in segmentations])
        self.letters_ = frozenset(ch for g in inventory for ch in g[0])
        return self

    def transcribe(self, word: str) -> tuple[str, ...]:
        """Most likely phone sequence for ``word``."""
        check_is_fitted(self, "lm_")
        if not isinstance(word, str) or not word:
            raise G2PError("cannot transcribe an empty word")
        w = self._fold(word)
        n = len(w)
        lm = self.lm_
        # hypothesis: (score, phones, lm_state, insertions)
        stacks: list[dict] = [dict() for _ in range(n + 1)]
        stacks[0][((BOS,), 0)] = (0.0, (), (BOS,), 0)
        furthest = 0

        def push(stack, hyp):
            key = (hyp[2], hyp[3])
            old = stack.get(key)
            if old is None or hyp[0] > old[0] or (hyp[0] == old[0] and hyp[1] < old[1]):
                stack[key] = hyp

        for pos in range(n + 1):
            stack = stacks[pos]
            if not stack:
                continue
            furthest = pos
            inserts = self.by_letters_.get("", [])
            for depth in range(MAX_INSERTIONS):
                for hyp in [h for h in stack.values() if h[3] == depth]:
                    for g, gid in inserts:
                        push(stack, (hyp[0] + lm.logprob(gid, hyp[2]), hyp[1] + g[1],
                                     (hyp[2] + (gid,))[-2:], depth + 1))
            kept = sorted(stack.values(), key=lambda h: (-h[0], h[1]))[:self.beam_size]
            stacks[pos] = {(h[2], h[3]): h for h in kept}
            if pos == n:
                break
            for hyp in kept:
                for size in range(1, MAX_CHUNK + 1):
                    if pos + size > n:
                        break
                    for g, gid in self.by_letters_.get(w[pos:pos + size], []):
                        push(stacks[pos + size],
                             (hyp[0] + lm.logprob(gid, hyp[2]), hyp[1] + g[1],
                              (hyp[2] + (gid,))[-2:], 0))

        finals = [(h[0] + lm.logprob(EOS, h[2]), h[1]) for h in stacks[n].values()]
        if not finals:
            bad = next((ch for ch in w if ch not in self.letters_), w[furthest])
            raise G2PError(f"cannot transcribe {word!r}: no graphone covers {bad!r}")
        finals.sort(key=lambda f: (-f[0], f[1]))
        phones = finals[0][1]
        if not phones:
            raise G2PError(f"transcription of {word!r} came out empty")
        return phones

    def transform(self, X: Iterable[str]) -> list[tuple[str, ...]]:
        return [self.transcribe(w) for w in X]

    predict = transform


def train_g2p(dictionary: Iterable[tuple[str, Sequence[str]]], **params) -> G2PModel:
    return G2PModel(**params).fit(list(dictionary))


def transcribe(model: G2PModel, word: str) -> tuple[str, ...]:
    return model.transcribe(word)
