"""Out-of-vocabulary normalization cascade.

Each strategy proposes a replacement ``w'`` for an unknown dialect word
``w``. The replacement is kept if it is a known dialect word, otherwise if
it is a known standard word; failing both, ``w`` stays as it is and the
decoder later copies it through.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from ..corpus import Vocabulary, is_punctuation
from .._validation import as_token_tuple, check_is_fitted, check_sentences
from .charmodel import CharSeq2Seq
from .g2p import G2PModel
from .phonetic import PhoneticIndex, build_phonetic_index, phonetic_candidate
from .rules import RuleSet, default_rules

STRATEGIES = ("Orth", "Phon", "Cbnmt", "OrthThenPhon", "CbnmtThenPhon")
_CHAINS = {
    "Orth": ("Orth",),
    "Phon": ("Phon",),
    "Cbnmt": ("Cbnmt",),
    "OrthThenPhon": ("Orth", "Phon"),
    "CbnmtThenPhon": ("Cbnmt", "Phon"),
}


class Resolution(str, Enum):
    KNOWN_GSW = "KnownGSW"
    KNOWN_DE = "KnownDE"
    UNCHANGED = "Unchanged"
    # character-model output substituted without a vocabulary check
    DIRECT = "Direct"


@dataclass(frozen=True)
class NormalizationOutcome:
    w: str
    w_prime: str | None
    resolution: Resolution

    @property
    def output(self) -> str:
        if self.resolution is Resolution.UNCHANGED or self.w_prime is None:
            return self.w
        return self.w_prime


@dataclass
class NormalizationModels:
    """Whatever the chosen strategies need; unused members may stay ``None``."""

    rules: RuleSet | None = None
    g2p: G2PModel | None = None
    gsw_index: PhoneticIndex | None = None
    de_index: PhoneticIndex | None = None
    char_model: CharSeq2Seq | None = None
    _char_memo: dict = field(default_factory=dict, repr=False)

    def prefetch(self, words: Iterable[str]) -> None:
        """Batch-translate words with the character model ahead of lookups."""
        if self.char_model is None:
            return
        todo = sorted({w for w in words if w not in self._char_memo
                       and len(w) <= self.char_model.max_len})
        if todo:
            self._char_memo.update(zip(todo, self.char_model.predict(todo)))

    def char_translate(self, word: str) -> str | None:
        if self.char_model is None:
            raise ValueError("strategy needs a character model")
        if len(word) > self.char_model.max_len:
            return None
        if word not in self._char_memo:
            self._char_memo[word] = self.char_model.translate(word)
        return self._char_memo[word]


def _propose(word: str, step: str, models: NormalizationModels) -> str | None:
    if step == "Orth":
        return (models.rules or default_rules()).apply(word)
    if step == "Phon":
        if models.g2p is None or models.gsw_index is None or models.de_index is None:
            raise ValueError("strategy needs a G2P model and both phonetic indices")
        return phonetic_candidate(word, models.gsw_index, models.de_index, models.g2p)
    return models.char_translate(word)


def _check(word: str, proposal: str | None, gsw_vocab, de_vocab) -> NormalizationOutcome:
    if not proposal or proposal == word:
        return NormalizationOutcome(word, proposal, Resolution.UNCHANGED)
    if proposal in gsw_vocab:
        return NormalizationOutcome(word, proposal, Resolution.KNOWN_GSW)
    if proposal in de_vocab:
        return NormalizationOutcome(word, proposal, Resolution.KNOWN_DE)
    return NormalizationOutcome(word, proposal, Resolution.UNCHANGED)


def normalize_oov(word: str, strategy: str, gsw_vocab: Mapping, de_vocab: Mapping,
                  models: NormalizationModels, direct_cbnmt: bool = False) -> NormalizationOutcome:
    """Resolve one unknown word with a strategy or a two-step chain.

    A chain only falls back to its second strategy when the first left the
    word unchanged. ``direct_cbnmt`` substitutes the character model output
    as is, which only applies to the plain ``Cbnmt`` strategy.
    """
    if strategy not in _CHAINS:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if direct_cbnmt and strategy == "Cbnmt":
        proposal = models.char_translate(word)
        if not proposal or proposal == word:
            return NormalizationOutcome(word, proposal, Resolution.UNCHANGED)
        outcome = _check(word, proposal, gsw_vocab, de_vocab)
        if outcome.resolution is Resolution.UNCHANGED:
            return NormalizationOutcome(word, proposal, Resolution.DIRECT)
        return outcome
    outcome = NormalizationOutcome(word, None, Resolution.UNCHANGED)
    for step in _CHAINS[strategy]:
        outcome = _check(word, _propose(word, step, models), gsw_vocab, de_vocab)
        if outcome.resolution is not Resolution.UNCHANGED:
            break
    return outcome


def normalize_sentence(sentence, strategy: str, gsw_vocab: Mapping, de_vocab: Mapping,
                       models: NormalizationModels, direct_cbnmt: bool = False) -> list[str]:
    """Replace unknown tokens one by one; known words and punctuation stay."""
    out = []
    for tok in as_token_tuple(sentence):
        if tok in gsw_vocab or is_punctuation(tok):
            out.append(tok)
        else:
            out.append(normalize_oov(tok, strategy, gsw_vocab, de_vocab, models,
                                     direct_cbnmt).output)
    return out


class OOVNormalizer(BaseEstimator, TransformerMixin):
    """Rewrite unknown dialect words of input sentences before translation.

    ``fit`` takes dialect training sentences ``X`` and, optionally, their
    standard-language side ``y``; the two sides define the known dialect and
    standard vocabularies. Phonetic indices are built when a fitted
    ``g2p`` is supplied.

    Parameters
    ----------
    strategy : str
        One of ``Orth``, ``Phon``, ``Cbnmt``, ``OrthThenPhon``, ``CbnmtThenPhon``.
    rules : RuleSet or None
        Rewrite rules; the built-in set when ``None``.
    g2p : G2PModel or None
        Fitted converter, required by the phonetic strategies.
    char_model : CharSeq2Seq or None
        Fitted word translator, required by the character strategies.
    direct_cbnmt : bool
        Substitute character-model output without vocabulary checks.
    standard_vocabulary : Mapping or None
        Extra known standard words (e.g. from monolingual text).
    """

    def __init__(self, strategy: str = "Orth", rules: RuleSet | None = None,
                 g2p: G2PModel | None = None, char_model: CharSeq2Seq | None = None,
                 direct_cbnmt: bool = False, standard_vocabulary: Mapping | None = None):
        self.strategy = strategy
        self.rules = rules
        self.g2p = g2p
        self.char_model = char_model
        self.direct_cbnmt = direct_cbnmt
        self.standard_vocabulary = standard_vocabulary

    def fit(self, X: Iterable, y: Iterable | None = None) -> "OOVNormalizer":
        if self.strategy not in _CHAINS:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        steps = _CHAINS[self.strategy]
        if "Phon" in steps and self.g2p is None:
            raise ValueError(f"strategy {self.strategy} needs a fitted g2p model")
        if "Cbnmt" in steps and self.char_model is None:
            raise ValueError(f"strategy {self.strategy} needs a fitted char_model")
        self.gsw_vocab_ = Vocabulary.from_sentences(check_sentences(X, name="dialect side"))
        de = Vocabulary.from_sentences(check_sentences(y, name="standard side")) if y is not None \
            else Vocabulary()
        if self.standard_vocabulary is not None:
            de = de | Vocabulary(dict(self.standard_vocabulary))
        self.de_vocab_ = de
        self.models_ = NormalizationModels(rules=self.rules or default_rules(), g2p=self.g2p,
                                           char_model=self.char_model)
        if "Phon" in steps:
            self.models_.gsw_index = build_phonetic_index(self.gsw_vocab_, self.g2p)
            self.models_.de_index = build_phonetic_index(self.de_vocab_, self.g2p)
        return self

    def normalize_word(self, word: str) -> NormalizationOutcome:
        check_is_fitted(self, "models_")
        return normalize_oov(word, self.strategy, self.gsw_vocab_, self.de_vocab_,
                             self.models_, self.direct_cbnmt)

    def transform(self, X: Iterable) -> list[list[str]]:
        check_is_fitted(self, "models_")
        sents = [as_token_tuple(s) for s in X]
        if "Cbnmt" in _CHAINS[self.strategy]:
            self.models_.prefetch(t for s in sents for t in s
                                  if t not in self.gsw_vocab_ and not is_punctuation(t))
        return [normalize_sentence(s, self.strategy, self.gsw_vocab_, self.de_vocab_,
                                   self.models_, self.direct_cbnmt) for s in sents]


def oov_count(sentences: Sequence, vocabulary: Mapping) -> int:
    return sum(1 for s in sentences for t in as_token_tuple(s)
               if t not in vocabulary and not is_punctuation(t))
