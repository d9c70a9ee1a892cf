"""Phrase-based translation system as one estimator."""

from __future__ import annotations

from typing import Iterable, Mapping

from sklearn.base import BaseEstimator

from ._validation import as_token_tuple, check_is_fitted, check_pairs
from .align import WordAligner
from .bleu import compute_bleu
from .decoder import DEFAULT_WEIGHTS, DecoderConfig, translate_corpus, tune_weights
from .lm import TrigramLM
from .phrase import build_phrase_table


class PhraseBasedTranslator(BaseEstimator):
    """Word alignment, phrase extraction, a trigram LM and the stack decoder.

    ``fit(X, y)`` trains on parallel tokenized sentences. The target-side LM
    is trained on ``y`` unless a fitted ``language_model`` is given, which
    is how a larger monolingual LM is plugged in.

    Parameters
    ----------
    n_iter : int
        IBM Model 1 iterations per direction.
    heuristic : str
        Symmetrization heuristic.
    max_phrase_len : int
        Longest phrase extracted, in words on either side.
    beam_size, distortion_limit : int
        Decoder search limits.
    weights : Mapping or None
        Feature weights; the defaults when ``None``.
    language_model : TrigramLM or None
        Pre-trained target LM.
    threads : int
        Sentence-level decoding threads.
    """

    def __init__(self, n_iter: int = 5, heuristic: str = "grow-diag", max_phrase_len: int = 7,
                 beam_size: int = 100, distortion_limit: int = 4,
                 weights: Mapping[str, float] | None = None,
                 language_model: TrigramLM | None = None, threads: int = 1):
        self.n_iter = n_iter
        self.heuristic = heuristic
        self.max_phrase_len = max_phrase_len
        self.beam_size = beam_size
        self.distortion_limit = distortion_limit
        self.weights = weights
        self.language_model = language_model
        self.threads = threads

    def fit(self, X: Iterable, y: Iterable) -> "PhraseBasedTranslator":
        pairs = check_pairs(zip(X, y, strict=True), name="training corpus")
        if not pairs:
            raise ValueError("training corpus is empty")
        self.aligner_ = WordAligner(self.n_iter, heuristic=self.heuristic)
        alignments = self.aligner_.fit_transform(pairs)
        self.phrase_table_ = build_phrase_table(pairs, alignments, self.aligner_.forward_,
                                                self.aligner_.reverse_, self.max_phrase_len)
        if self.language_model is not None:
            check_is_fitted(self.language_model, "logprobs_")
            self.lm_ = self.language_model
        else:
            self.lm_ = TrigramLM().fit([t for _, t in pairs])
        self.weights_ = dict(self.weights or DEFAULT_WEIGHTS)
        return self

    def _config(self) -> DecoderConfig:
        return DecoderConfig(beam_size=self.beam_size, distortion_limit=self.distortion_limit,
                             weights=dict(self.weights_))

    def tune(self, X: Iterable, y: Iterable, trials: int = 20, seed: int = 0
             ) -> "PhraseBasedTranslator":
        """Pick feature weights by random search on a development set."""
        check_is_fitted(self, "phrase_table_")
        dev = check_pairs(zip(X, y, strict=True), name="development corpus")
        self.weights_ = tune_weights(self.phrase_table_, self.lm_, dev, trials=trials,
                                     seed=seed, config=self._config(), threads=self.threads)
        return self

    def predict(self, X: Iterable) -> list[list[str]]:
        check_is_fitted(self, "phrase_table_")
        return translate_corpus(self.phrase_table_, self.lm_, self._config(),
                                [as_token_tuple(s) for s in X], self.threads)

    def score(self, X: Iterable, y: Iterable) -> float:
        """Corpus BLEU of the translations of ``X`` against references ``y``."""
        return compute_bleu(self.predict(X), [as_token_tuple(r) for r in y]).score
