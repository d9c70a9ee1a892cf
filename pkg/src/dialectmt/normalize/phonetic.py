"""Pronunciation-keyed word index for phonetic OOV matching."""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Mapping

from ..corpus import is_punctuation
from .g2p import G2PError, G2PModel

log = logging.getLogger(__name__)


class PhoneticIndex:
    """Phone sequence -> {word: corpus frequency}."""

    def __init__(self, entries: Mapping[tuple[str, ...], Mapping[str, int]] | None = None,
                 n_skipped: int = 0):
        self._entries = {tuple(k): dict(v) for k, v in (entries or {}).items()}
        self.n_skipped = n_skipped

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, phones) -> bool:
        return tuple(phones) in self._entries

    def __getitem__(self, phones) -> dict[str, int]:
        return self._entries[tuple(phones)]

    def keys(self):
        return self._entries.keys()

    def best(self, phones) -> str | None:
        """Most frequent word with this pronunciation; ties go lexicographically."""
        words = self._entries.get(tuple(phones))
        if not words:
            return None
        return min(words, key=lambda w: (-words[w], w))


def build_phonetic_index(vocabulary: Mapping[str, int], model: G2PModel) -> PhoneticIndex:
    entries: dict[tuple[str, ...], dict[str, int]] = defaultdict(dict)
    skipped = 0
    for word in sorted(vocabulary):
        if is_punctuation(word):
            continue
        try:
            key = model.transcribe(word)
        except G2PError:
            skipped += 1
            continue
        entries[key][word] = vocabulary[word]
    if skipped:
        log.warning("phonetic index: %d of %d words could not be transcribed",
                    skipped, len(vocabulary))
    return PhoneticIndex(entries, skipped)


def phonetic_candidate(word: str, gsw_index: PhoneticIndex, de_index: PhoneticIndex,
                       model: G2PModel) -> str | None:
    """Known word sounding like ``word``: dialect index first, then standard."""
    try:
        key = model.transcribe(word)
    except G2PError:
        return None
    return gsw_index.best(key) or de_index.best(key)
