"""Witten-Bell backoff trigram language model with ARPA input/output."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from ._validation import as_token_tuple, check_is_fitted, check_sentences

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# ARPA convention for the never-predicted begin marker
_ARPA_BOS_LOG10 = -99.0
_LN10 = math.log(10.0)


class TrigramLM(BaseEstimator):
    """Backoff n-gram model smoothed with Witten-Bell discounting.

    Seen events in a history ``h`` receive ``c(h, w) / (c(h) + T(h))`` where
    ``T(h)`` is the number of distinct continuations; the reserved mass
    ``T(h) / (c(h) + T(h))`` is spread over unseen words in proportion to
    the lower-order distribution via a backoff weight. At unigram level the
    reserved mass goes to ``<unk>``.

    Parameters
    ----------
    order : int
        Maximum n-gram order (1 to 3).
    min_count : int
        Training words seen fewer times are mapped to ``<unk>``.

    Attributes
    ----------
    logprobs_ : dict[tuple[str, ...], float]
        Natural-log probability of every stored n-gram (history + word).
    backoffs_ : dict[tuple[str, ...], float]
        Natural-log backoff weight per seen history.
    counts_ : dict[int, Counter]
        Raw n-gram counts per order.
    vocab_ : frozenset[str]
        Predictable words, including ``</s>`` and ``<unk>``.
    """

    def __init__(self, order: int = 3, min_count: int = 1):
        self.order = order
        self.min_count = min_count

    def fit(self, sentences: Iterable, y=None) -> "TrigramLM":
        if not 1 <= self.order <= 3:
            raise ValueError("order must be between 1 and 3")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        sents = check_sentences(sentences, name="LM training corpus")
        word_counts = Counter(w for s in sents for w in s)
        keep = {w for w, c in word_counts.items() if c >= self.min_count}

        counts: dict[int, Counter] = {n: Counter() for n in range(1, self.order + 1)}
        for sent in sents:
            padded = [BOS] + [w if w in keep else UNK for w in sent] + [EOS]
            for i in range(1, len(padded)):
                for n in range(1, self.order + 1):
                    if i - n + 1 < 0:
                        break
                    counts[n][tuple(padded[i - n + 1:i + 1])] += 1
        self.counts_ = counts
        self.vocab_ = frozenset(w for (w,) in counts[1]) | {UNK, EOS}

        logprobs: dict[tuple[str, ...], float] = {}
        backoffs: dict[tuple[str, ...], float] = {}

        total = sum(counts[1].values())
        types = len(counts[1])
        denom = total + types
        for w in sorted(self.vocab_):
            c = counts[1].get((w,), 0)
            if w == UNK:
                c += types
            logprobs[(w,)] = math.log(c / denom)
        self.logprobs_ = logprobs
        self.backoffs_ = backoffs

        for n in range(2, self.order + 1):
            by_history: dict[tuple[str, ...], dict[str, int]] = defaultdict(dict)
            for gram, c in counts[n].items():
                by_history[gram[:-1]][gram[-1]] = c
            for hist in sorted(by_history):
                conts = by_history[hist]
                c_h = sum(conts.values())
                t_h = len(conts)
                lower = hist[1:]
                seen_lower = sum(math.exp(self._logprob(w, lower)) for w in sorted(conts))
                unseen_lower = 1.0 - seen_lower
                if len(conts) >= len(self.vocab_) or unseen_lower <= 1e-12:
                    # nothing left to back off to: plain relative frequency
                    for w, c in conts.items():
                        logprobs[hist + (w,)] = math.log(c / c_h)
                    backoffs[hist] = 0.0
                    continue
                for w, c in conts.items():
                    logprobs[hist + (w,)] = math.log(c / (c_h + t_h))
                backoffs[hist] = math.log(t_h / (c_h + t_h)) - math.log(unseen_lower)
        return self

    # -- queries ---------------------------------------------------------

    def _map(self, word: str) -> str:
        return word if word in self.vocab_ or word == BOS else UNK

    def _logprob(self, word: str, history: tuple[str, ...]) -> float:
        bow = 0.0
        while True:
            lp = self.logprobs_.get(history + (word,))
            if lp is not None:
                return bow + lp
            if not history:
                # only reachable for words missing from the unigram table
                return bow + self.logprobs_[(UNK,)]
            bow += self.backoffs_.get(history, 0.0)
            history = history[1:]

    def logprob(self, word: str, history: Sequence[str] = ()) -> float:
        """Natural-log conditional probability ``log P(word | history)``."""
        check_is_fitted(self, "logprobs_")
        hist = tuple(self._map(w) for w in history)
        hist = hist[-(self.order - 1):] if self.order > 1 else ()
        return self._logprob(self._map(word), hist)

    def prob(self, word: str, history: Sequence[str] = ()) -> float:
        return math.exp(self.logprob(word, history))

    def score(self, sentence) -> float:
        """Log-probability of a sentence, including the end marker."""
        check_is_fitted(self, "logprobs_")
        words = list(as_token_tuple(sentence)) + [EOS]
        hist: list[str] = [BOS]
        total = 0.0
        for w in words:
            total += self.logprob(w, hist)
            hist.append(w)
        return total

    def perplexity(self, sentences: Iterable) -> float:
        sents = check_sentences(sentences, name="perplexity corpus")
        logprob = sum(self.score(s) for s in sents)
        n_tokens = sum(len(s) + 1 for s in sents)
        return math.exp(-logprob / n_tokens)

    def histories(self) -> list[tuple[str, ...]]:
        """Every history with at least one observed continuation."""
        check_is_fitted(self, "logprobs_")
        hists = {()}
        for gram in self.logprobs_:
            if len(gram) > 1:
                hists.add(gram[:-1])
        return sorted(hists)

    # -- ARPA ------------------------------------------------------------

    def write_arpa(self, path) -> None:
        check_is_fitted(self, "logprobs_")
        by_order: dict[int, list[tuple[str, ...]]] = defaultdict(list)
        for gram in self.logprobs_:
            by_order[len(gram)].append(gram)
        by_order[1].append((BOS,))
        max_order = max(by_order)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n\\data\\\n")
            for n in range(1, max_order + 1):
                fh.write(f"ngram {n}={len(by_order[n])}\n")
            for n in range(1, max_order + 1):
                fh.write(f"\n\\{n}-grams:\n")
                for gram in sorted(by_order[n]):
                    if gram == (BOS,):
                        lp10 = _ARPA_BOS_LOG10
                    else:
                        lp10 = self.logprobs_[gram] / _LN10
                    line = f"{lp10:.8f}\t{' '.join(gram)}"
                    if gram in self.backoffs_ and n < max_order:
                        line += f"\t{self.backoffs_[gram] / _LN10:.8f}"
                    fh.write(line + "\n")
            fh.write("\n\\end\\\n")

    @classmethod
    def read_arpa(cls, path) -> "TrigramLM":
        """Load an ARPA file; counts are not recoverable and stay empty."""
        logprobs: dict[tuple[str, ...], float] = {}
        backoffs: dict[tuple[str, ...], float] = {}
        declared: dict[int, int] = {}
        section = None
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line:
                    continue
                if line == "\\data\\":
                    section = 0
                    continue
                if line == "\\end\\":
                    break
                if line.startswith("\\") and line.endswith("-grams:"):
                    section = int(line[1:line.index("-")])
                    continue
                if section == 0:
                    if not line.startswith("ngram "):
                        raise ValueError(f"{path}:{lineno}: bad header line {line!r}")
                    n, c = line[6:].split("=")
                    declared[int(n)] = int(c)
                    continue
                if not section:
                    raise ValueError(f"{path}:{lineno}: n-gram outside a section")
                cols = line.split()
                if len(cols) not in (section + 1, section + 2):
                    raise ValueError(f"{path}:{lineno}: expected {section}-gram entry")
                gram = tuple(cols[1:section + 1])
                if gram != (BOS,):
                    logprobs[gram] = float(cols[0]) * _LN10
                if len(cols) == section + 2:
                    backoffs[gram] = float(cols[-1]) * _LN10
        for n, c in declared.items():
            found = sum(1 for g in logprobs if len(g) == n) + (1 if n == 1 else 0)
            if found != c:
                raise ValueError(f"{path}: header declares {c} {n}-grams, found {found}")
        model = cls(order=max(declared) if declared else 1)
        model.logprobs_ = logprobs
        model.backoffs_ = backoffs
        model.counts_ = {}
        model.vocab_ = frozenset(g[0] for g in logprobs if len(g) == 1) | {UNK, EOS}
        if (UNK,) not in logprobs:
            raise ValueError(f"{path}: model has no {UNK} unigram")
        return model


def train_trigram(sentences: Iterable, min_count: int = 1, order: int = 3) -> TrigramLM:
    return TrigramLM(order=order, min_count=min_count).fit(sentences)


def score_sentence(model: TrigramLM, sentence) -> float:
    return model.score(sentence)


def perplexity(model: TrigramLM, sentences: Iterable) -> float:
    return model.perplexity(sentences)
