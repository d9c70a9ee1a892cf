"""Input checks shared by the estimators."""

from __future__ import annotations

from typing import Iterable, Sequence

from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

__all__ = ["NotFittedError", "check_is_fitted", "check_sentences", "check_word",
           "check_pairs"]


def check_sentences(sentences: Iterable, *, allow_empty_corpus: bool = False,
                    name: str = "sentences") -> list[tuple[str, ...]]:
    """Return sentences as tuples of tokens.

    A plain string is split on whitespace, so callers may pass raw lines or
    pre-tokenized sequences interchangeably.
    """
    if isinstance(sentences, str):
        raise TypeError(f"{name} must be a collection of sentences, not a single string")
    out = []
    for sent in sentences:
        if isinstance(sent, str):
            sent = sent.split()
        toks = tuple(sent)
        for tok in toks:
            if not isinstance(tok, str) or not tok or tok != tok.strip() or len(tok.split()) != 1:
                raise ValueError(f"invalid token {tok!r} in {name}")
        out.append(toks)
    if not out and not allow_empty_corpus:
        raise ValueError(f"{name} is empty")
    return out


def check_pairs(pairs: Iterable, *, name: str = "pairs") -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Normalise (source, target) pairs or SentencePair objects to token tuples."""
    out = []
    for pair in pairs:
        if hasattr(pair, "source") and hasattr(pair, "target"):
            src, tgt = pair.source, pair.target
        else:
            src, tgt = pair
        src_t, tgt_t = check_sentences([src, tgt], name=name)
        out.append((src_t, tgt_t))
    if not out:
        raise ValueError(f"{name} is empty")
    return out


def check_word(word: str, max_len: int | None = None) -> str:
    if not isinstance(word, str) or not word:
        raise ValueError("word must be a non-empty string")
    if max_len is not None and len(word) > max_len:
        raise ValueError(f"word {word!r} has {len(word)} characters, limit is {max_len}")
    return word


def as_token_tuple(sentence: str | Sequence[str]) -> tuple[str, ...]:
    if isinstance(sentence, str):
        return tuple(sentence.split())
    return tuple(sentence)
