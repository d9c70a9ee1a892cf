"""Parallel corpora, lexicons and vocabularies."""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

DIALECTS = ("BS", "BL", "BE", "ZH", "SG", "VS", "UNKNOWN")
SPLITS = ("train", "dev", "test", "heldout")
PUNCTUATION = frozenset('.,;:!?"()')

_PUNCT_SPLIT = re.compile(r'([.,;:!?"()])')


class CorpusError(ValueError):
    """Malformed corpus, lexicon or split request."""


def tokenize(text: str) -> list[str]:
    """Split on whitespace and detach edge punctuation as separate tokens.

    Internal apostrophes and hyphens stay inside the token. A punctuation
    mark between two letters (``chli,chlii``) separates the word.
    """
    tokens: list[str] = []
    for chunk in text.split():
        # punctuation glued between words splits the chunk too
        tokens.extend(piece for piece in _PUNCT_SPLIT.split(chunk) if piece)
    return tokens


def is_punctuation(token: str) -> bool:
    return token in PUNCTUATION


@dataclass(frozen=True)
class SentencePair:
    source: tuple[str, ...]
    target: tuple[str, ...]
    dialect: str = "UNKNOWN"
    genre: str = ""

    def __post_init__(self):
        if not self.source or not self.target:
            raise CorpusError("sentence pair sides must be non-empty")
        if self.dialect not in DIALECTS:
            raise CorpusError(f"unknown dialect tag {self.dialect!r}")


@dataclass(frozen=True)
class ParallelCorpus:
    pairs: tuple[SentencePair, ...]
    split: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.split:
            object.__setattr__(self, "split", ("train",) * len(self.pairs))
        if len(self.split) != len(self.pairs):
            raise CorpusError("every pair needs exactly one split label")
        bad = set(self.split) - set(SPLITS)
        if bad:
            raise CorpusError(f"unknown split labels {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def subset(self, name: str) -> list[SentencePair]:
        return [p for p, s in zip(self.pairs, self.split) if s == name]

    def split_sizes(self) -> dict[str, int]:
        counts = Counter(self.split)
        return {name: counts.get(name, 0) for name in SPLITS}

    def __add__(self, other: "ParallelCorpus") -> "ParallelCorpus":
        return ParallelCorpus(self.pairs + other.pairs, self.split + other.split)

    def write_metadata(self, path) -> None:
        """Sidecar TSV: index, dialect, genre, split."""
        with open(path, "w", encoding="utf-8") as fh:
            for i, (pair, label) in enumerate(zip(self.pairs, self.split)):
                fh.write(f"{i}\t{pair.dialect}\t{pair.genre}\t{label}\n")

    def with_metadata(self, path) -> "ParallelCorpus":
        rows = _read_lines(path)
        if len(rows) != len(self.pairs):
            raise CorpusError(
                f"metadata has {len(rows)} rows but corpus has {len(self.pairs)} pairs")
        pairs, labels = [], []
        for lineno, row in enumerate(rows, 1):
            cols = row.split("\t")
            if len(cols) != 4 or cols[0] != str(lineno - 1):
                raise CorpusError(f"malformed metadata row {lineno}: {row!r}")
            _, dialect, genre, label = cols
            old = self.pairs[lineno - 1]
            pairs.append(SentencePair(old.source, old.target, dialect, genre))
            labels.append(label)
        return ParallelCorpus(tuple(pairs), tuple(labels))


class Vocabulary(Mapping[str, int]):
    """Case-sensitive word-form counts."""

    def __init__(self, counts: Mapping[str, int] | None = None):
        self._counts = {w: c for w, c in (counts or {}).items() if c >= 1}

    def __getitem__(self, word: str) -> int:
        return self._counts[word]

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, word) -> bool:
        return word in self._counts

    def __repr__(self) -> str:
        return f"Vocabulary({len(self)} forms)"

    def __or__(self, other: "Vocabulary") -> "Vocabulary":
        merged = Counter(self._counts)
        merged.update(dict(other.items()))
        return Vocabulary(merged)

    @classmethod
    def from_sentences(cls, sentences: Iterable[Sequence[str]], min_count: int = 1):
        if min_count < 1:
            raise CorpusError("min_count must be >= 1")
        counts = Counter(tok for sent in sentences for tok in sent)
        return cls({w: c for w, c in counts.items() if c >= min_count})


@dataclass(frozen=True)
class Lexicon:
    entries: tuple[tuple[str, str], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def as_corpus(self, dialect: str = "UNKNOWN") -> ParallelCorpus:
        pairs = tuple(SentencePair((s,), (t,), dialect, "lexicon") for s, t in self.entries)
        return ParallelCorpus(pairs)


def _read_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.rstrip("\r") for line in lines]


def read_sentences(path) -> list[list[str]]:
    """Tokenized monolingual text, one sentence per line (blank lines skipped)."""
    return [tokenize(line) for line in _read_lines(path) if line.strip()]


def load_parallel_corpus(source_path, target_path, dialect: str = "UNKNOWN",
                         genre: str = "") -> ParallelCorpus:
    src_lines = _read_lines(source_path)
    tgt_lines = _read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise CorpusError(
            f"alignment error: {source_path} has {len(src_lines)} lines, "
            f"{target_path} has {len(tgt_lines)}")
    pairs = []
    for lineno, (src, tgt) in enumerate(zip(src_lines, tgt_lines), 1):
        s, t = tokenize(src), tokenize(tgt)
        if not s or not t:
            raise CorpusError(f"empty sentence at line {lineno}")
        pairs.append(SentencePair(tuple(s), tuple(t), dialect, genre))
    return ParallelCorpus(tuple(pairs))


def split_corpus(corpus: ParallelCorpus, counts: Mapping[str, int], seed: int = 0) -> ParallelCorpus:
    """Label pairs by shuffled index; whatever is not requested becomes heldout."""
    unknown = set(counts) - {"train", "dev", "test"}
    if unknown:
        raise CorpusError(f"cannot request split(s) {sorted(unknown)}")
    total = sum(counts.values())
    if any(c < 0 for c in counts.values()) or total > len(corpus):
        raise CorpusError(f"requested {total} pairs from a corpus of {len(corpus)}")
    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)
    labels = ["heldout"] * len(corpus)
    pos = 0
    for name in ("train", "dev", "test"):
        for idx in order[pos:pos + counts.get(name, 0)]:
            labels[idx] = name
        pos += counts.get(name, 0)
    return ParallelCorpus(corpus.pairs, tuple(labels))


def build_vocabulary(corpus: ParallelCorpus, side: str = "source", min_count: int = 1) -> Vocabulary:
    """Count word forms on one side of the train split."""
    if side not in ("source", "target"):
        raise CorpusError(f"side must be 'source' or 'target', got {side!r}")
    return Vocabulary.from_sentences(
        (getattr(p, side) for p in corpus.subset("train")), min_count=min_count)


def filter_by_target_vocabulary(corpus: ParallelCorpus, vocabulary: Vocabulary) -> ParallelCorpus:
    if not len(vocabulary):
        raise CorpusError("filtering vocabulary is empty")
    keep = [i for i, p in enumerate(corpus.pairs)
            if all(is_punctuation(t) or t in vocabulary for t in p.target)]
    return ParallelCorpus(tuple(corpus.pairs[i] for i in keep),
                          tuple(corpus.split[i] for i in keep))


def load_lexicon(path) -> Lexicon:
    seen: dict[tuple[str, str], None] = {}
    for lineno, row in enumerate(_read_lines(path), 1):
        if not row.strip():
            continue
        cols = row.split("\t")
        if len(cols) != 2:
            raise CorpusError(f"lexicon row {lineno} has {len(cols)} columns: {row!r}")
        src, tgt = cols[0].strip(), cols[1].strip()
        if not src or not tgt or len(src.split()) != 1 or len(tgt.split()) != 1:
            raise CorpusError(f"lexicon row {lineno} must hold one word per column: {row!r}")
        seen.setdefault((src, tgt), None)
    return Lexicon(tuple(seen))
