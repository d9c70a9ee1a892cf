"""Alignment-consistent phrase extraction and phrase-table scoring."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .align import NULL, IBMModel1
from ._validation import check_pairs

# log floor for word-table lookups that come back zero
_LOG_FLOOR = math.log(1e-10)

FEATURES = ("p_t_given_s", "p_s_given_t", "lex_t_given_s", "lex_s_given_t")


@dataclass(frozen=True)
class PhrasePair:
    source: tuple[str, ...]
    target: tuple[str, ...]
    links: frozenset  # (source offset, target offset) inside the block
    source_span: tuple[int, int]  # inclusive
    target_span: tuple[int, int]


@dataclass(frozen=True)
class PhraseOption:
    target: tuple[str, ...]
    scores: tuple[float, float, float, float]  # log phi(t|s), phi(s|t), lex(t|s), lex(s|t)


def is_consistent(links: Iterable[tuple[int, int]], s1: int, s2: int, t1: int, t2: int) -> bool:
    """At least one link inside the block and none crossing its border."""
    inside = False
    for i, j in links:
        in_s, in_t = s1 <= i <= s2, t1 <= j <= t2
        if in_s != in_t:
            return False
        inside = inside or in_s
    return inside


def extract_phrases(source: Sequence[str], target: Sequence[str],
                    links: Iterable[tuple[int, int]], max_len: int = 7) -> list[PhrasePair]:
    """All consistent phrase pairs with both sides at most ``max_len`` long.

    For each source span the tight target span is taken from its links and
    then widened over unaligned target words on either side.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    links = sorted(set(links))
    n, m = len(source), len(target)
    aligned_t = {j for _, j in links}
    by_source: dict[int, list[int]] = defaultdict(list)
    for i, j in links:
        by_source[i].append(j)

    out = []
    for s1 in range(n):
        for s2 in range(s1, min(n, s1 + max_len)):
            tgt = [j for i in range(s1, s2 + 1) for j in by_source[i]]
            if not tgt:
                continue
            t_min, t_max = min(tgt), max(tgt)
            if t_max - t_min + 1 > max_len:
                continue
            if any(t_min <= j <= t_max and not s1 <= i <= s2 for i, j in links):
                continue
            t1 = t_min
            while True:
                t2 = t_max
                while True:
                    if t2 - t1 + 1 > max_len:
                        break
                    inner = frozenset((i - s1, j - t1) for i, j in links
                                      if s1 <= i <= s2 and t1 <= j <= t2)
                    out.append(PhrasePair(tuple(source[s1:s2 + 1]), tuple(target[t1:t2 + 1]),
                                          inner, (s1, s2), (t1, t2)))
                    t2 += 1
                    if t2 >= m or t2 in aligned_t:
                        break
                t1 -= 1
                if t1 < 0 or t1 in aligned_t or t_max - t1 + 1 > max_len:
                    break
    return out


def lexical_weight(src: Sequence[str], tgt: Sequence[str], links: Iterable[tuple[int, int]],
                   table: IBMModel1, reverse: bool = False) -> float:
    """Log lexical weight of ``tgt`` given ``src`` over the block's internal links.

    A word linked to several words takes the best of them; an unlinked word
    is scored against NULL. With ``reverse`` the roles swap and ``table``
    must be the reverse-direction model.
    """
    if reverse:
        src, tgt = tgt, src
        links = [(j, i) for i, j in links]
    linked: dict[int, list[int]] = defaultdict(list)
    for i, j in links:
        linked[j].append(i)
    total = 0.0
    for j, e in enumerate(tgt):
        if linked[j]:
            p = max(table.prob(e, src[i]) for i in linked[j])
        else:
            p = table.prob(e, NULL)
        total += math.log(p) if p > 0 else _LOG_FLOOR
    return total


class PhraseTable(Mapping[tuple, list]):
    """Source phrase -> list of :class:`PhraseOption`, all scores in log space."""

    def __init__(self, entries: Mapping[tuple[str, ...], Iterable[PhraseOption]] | None = None):
        self._entries = {tuple(src): sorted(opts, key=lambda o: o.target)
                         for src, opts in (entries or {}).items()}
        self.max_source_len = max((len(s) for s in self._entries), default=0)
        self.source_words = frozenset(w for s in self._entries for w in s)

    def __getitem__(self, src) -> list[PhraseOption]:
        return self._entries[tuple(src)]

    def get(self, src, default=None):
        return self._entries.get(tuple(src), default)

    def __iter__(self) -> Iterator[tuple[str, ...]]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"PhraseTable({len(self)} source phrases)"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for src in sorted(self._entries):
                for opt in self._entries[src]:
                    probs = " ".join(repr(math.exp(s)) for s in opt.scores)
                    fh.write(f"{' '.join(src)} ||| {' '.join(opt.target)} ||| {probs}\n")

    @classmethod
    def read(cls, path) -> "PhraseTable":
        entries: dict[tuple[str, ...], list[PhraseOption]] = defaultdict(list)
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                cols = [c.strip() for c in line.split("|||")]
                if len(cols) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 'src ||| tgt ||| scores'")
                probs = [float(x) for x in cols[2].split()]
                if len(probs) != 4 or not cols[0] or not cols[1]:
                    raise ValueError(f"{path}:{lineno}: malformed phrase-table entry")
                scores = tuple(math.log(p) if p > 0 else _LOG_FLOOR for p in probs)
                entries[tuple(cols[0].split())].append(PhraseOption(tuple(cols[1].split()), scores))
        return cls(entries)


def build_phrase_table(pairs: Iterable, alignments: Sequence[Iterable[tuple[int, int]]],
                       forward: IBMModel1, reverse: IBMModel1, max_len: int = 7) -> PhraseTable:
    """Relative-frequency and lexical scores for every extracted phrase pair."""
    pairs = check_pairs(pairs, name="phrase-extraction corpus")
    if len(alignments) != len(pairs):
        raise ValueError(f"{len(pairs)} pairs but {len(alignments)} alignments")
    joint: Counter = Counter()
    lex_fwd: dict[tuple, float] = {}
    lex_rev: dict[tuple, float] = {}
    for (src, tgt), links in zip(pairs, alignments):
        for pp in extract_phrases(src, tgt, links, max_len):
            key = (pp.source, pp.target)
            joint[key] += 1
            lf = lexical_weight(pp.source, pp.target, pp.links, forward)
            lr = lexical_weight(pp.source, pp.target, pp.links, reverse, reverse=True)
            lex_fwd[key] = max(lf, lex_fwd.get(key, -math.inf))
            lex_rev[key] = max(lr, lex_rev.get(key, -math.inf))

    src_totals: Counter = Counter()
    tgt_totals: Counter = Counter()
    for (s, t), c in joint.items():
        src_totals[s] += c
        tgt_totals[t] += c

    entries: dict[tuple[str, ...], list[PhraseOption]] = defaultdict(list)
    for (s, t), c in sorted(joint.items()):
        scores = (math.log(c / src_totals[s]), math.log(c / tgt_totals[t]),
                  lex_fwd[(s, t)], lex_rev[(s, t)])
        entries[s].append(PhraseOption(t, scores))
    return PhraseTable(entries)
