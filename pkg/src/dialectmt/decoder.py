"""Stack decoding over phrase segmentations with a log-linear model."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

from .lm import BOS, EOS, TrigramLM
from .phrase import PhraseOption, PhraseTable
from ._validation import as_token_tuple, check_is_fitted

FEATURE_NAMES = ("p_t_given_s", "p_s_given_t", "lex_t_given_s", "lex_s_given_t",
                 "lm", "word_penalty", "phrase_penalty", "distortion")

DEFAULT_WEIGHTS = {
    "p_t_given_s": 0.2, "p_s_given_t": 0.2, "lex_t_given_s": 0.2, "lex_s_given_t": 0.2,
    "lm": 0.5, "word_penalty": -0.5, "phrase_penalty": 0.2, "distortion": 0.3,
}

# random-search ranges per weight
WEIGHT_RANGES = {
    "p_t_given_s": (0.0, 1.0), "p_s_given_t": (0.0, 1.0),
    "lex_t_given_s": (0.0, 1.0), "lex_s_given_t": (0.0, 1.0),
    "lm": (0.1, 1.5), "word_penalty": (-2.0, 1.0), "phrase_penalty": (-1.0, 1.0),
    "distortion": (0.0, 1.0),
}

_COPY_SCORES = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class DecoderConfig:
    """Search and model settings.

    ``distortion_limit=None`` allows jumps of any size. Word, phrase and
    distortion features are negative counts, so a positive weight penalizes.
    """

    beam_size: int = 100
    distortion_limit: int | None = 4
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    monotone: bool = False

    def __post_init__(self):
        if self.beam_size < 1:
            raise ValueError("beam_size must be >= 1")
        if self.distortion_limit is not None and self.distortion_limit < 0:
            raise ValueError("distortion_limit must be >= 0 or None")
        unknown = set(self.weights) - set(FEATURE_NAMES)
        if unknown:
            raise ValueError(f"unknown feature weights {sorted(unknown)}")
        if not all(math.isfinite(float(v)) for v in self.weights.values()):
            raise ValueError("weights must be finite")

    def weight_vector(self) -> tuple[float, ...]:
        return tuple(float(self.weights.get(name, 0.0)) for name in FEATURE_NAMES)


class _Hyp:
    __slots__ = ("coverage", "n_covered", "lm_state", "last_end", "score", "target")

    def __init__(self, coverage, n_covered, lm_state, last_end, score, target):
        self.coverage = coverage
        self.n_covered = n_covered
        self.lm_state = lm_state
        self.last_end = last_end
        self.score = score
        self.target = target


def phrase_options(table: PhraseTable, source: Sequence[str]) -> dict[tuple[int, int], list[PhraseOption]]:
    """Translation options per source span (inclusive end).

    Words the table has never seen as a source token are copied through as
    their own translation. So is any word with no single-word entry, which
    keeps every sentence coverable.
    """
    n = len(source)
    options: dict[tuple[int, int], list[PhraseOption]] = {}
    max_len = max(table.max_source_len, 1)
    for i in range(n):
        for j in range(i, min(n, i + max_len)):
            opts = table.get(source[i:j + 1])
            if opts:
                options[(i, j)] = list(opts)
        if (i, i) not in options:
            options[(i, i)] = [PhraseOption((source[i],), _COPY_SCORES)]
    return options


class _LMCache:
    """Memo of LM scores for phrase extensions, keyed on the trigram context.

    States hold words as the LM sees them (unknowns mapped), so hypotheses
    that differ only in unknown words share a state.
    """

    def __init__(self, lm: TrigramLM):
        check_is_fitted(lm, "logprobs_")
        self.lm = lm
        self.keep = max(lm.order - 1, 0)
        self.memo: dict[tuple, tuple[float, tuple[str, ...]]] = {}

    def extend(self, state: tuple[str, ...], words: tuple[str, ...]) -> tuple[float, tuple[str, ...]]:
        key = (state, words)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        lm = self.lm
        total = 0.0
        for w in words:
            w = lm._map(w)
            total += lm._logprob(w, state)
            state = (state + (w,))[-self.keep:] if self.keep else ()
        self.memo[key] = (total, state)
        return total, state

    def finish(self, state: tuple[str, ...]) -> float:
        return self.extend(state, (EOS,))[0]


def _future_costs(n, options, weights, lm_cache: _LMCache):
    """Best estimated weighted score for every contiguous source span."""
    w = weights
    best: dict[tuple[int, int], float] = {}
    for (i, j), opts in options.items():
        top = -math.inf
        for opt in opts:
            tm = sum(wk * s for wk, s in zip(w[:4], opt.scores))
            lm_est, _ = lm_cache.extend((), opt.target)
            est = tm + w[4] * lm_est - w[5] * len(opt.target) - w[6]
            top = max(top, est)
        best[(i, j)] = top
    cost = [[-math.inf] * n for _ in range(n)]
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length - 1
            c = best.get((i, j), -math.inf)
            for k in range(i, j):
                c = max(c, cost[i][k] + cost[k + 1][j])
            cost[i][j] = c
    return cost


def _rest_cost(coverage: int, n: int, cost, memo: dict) -> float:
    rest = memo.get(coverage)
    if rest is not None:
        return rest
    rest, i = 0.0, 0
    while i < n:
        if coverage >> i & 1:
            i += 1
            continue
        j = i
        while j + 1 < n and not coverage >> (j + 1) & 1:
            j += 1
        rest += cost[i][j]
        i = j + 1
    memo[coverage] = rest
    return rest


def _better(a: _Hyp, b: _Hyp) -> bool:
    return a.score > b.score or (a.score == b.score and a.target < b.target)


def translate_sentence(table: PhraseTable, lm: TrigramLM, config: DecoderConfig,
                       source, lm_cache: _LMCache | None = None) -> tuple[list[str], float]:
    """Best translation of one tokenized sentence and its model score.

    ``lm_cache`` may be shared between sentences decoded with the same LM.
    """
    source = as_token_tuple(source)
    n = len(source)
    weights = config.weight_vector()
    if lm_cache is None:
        lm_cache = _LMCache(lm)
    init_state = (BOS,)[-lm_cache.keep:] if lm_cache.keep else ()
    if n == 0:
        return [], weights[4] * lm_cache.finish(init_state)

    options = phrase_options(table, source)
    w_tm, w_lm, w_word, w_phrase, w_dist = weights[:4], weights[4], weights[5], weights[6], weights[7]
    # LM-independent part of each option's score
    spans_from: dict[int, list[tuple[int, int, list[tuple[PhraseOption, float]]]]] = {
        i: [] for i in range(n)}
    for (i, j), opts in sorted(options.items()):
        scored = [(opt, sum(wk * sc for wk, sc in zip(w_tm, opt.scores))
                   - w_word * len(opt.target) - w_phrase) for opt in opts]
        span_mask = ((1 << (j + 1)) - 1) ^ ((1 << i) - 1)
        spans_from[i].append((j, span_mask, scored))
    cost = _future_costs(n, options, weights, lm_cache)
    rest_memo: dict[int, float] = {}
    limit = 0 if config.monotone else config.distortion_limit
    full = (1 << n) - 1

    stacks: list[dict[tuple, _Hyp]] = [dict() for _ in range(n + 1)]
    stacks[0][(0, init_state, -1)] = _Hyp(0, 0, init_state, -1, 0.0, ())

    for k in range(n):
        stack = stacks[k]
        if not stack:
            continue
        ranked = sorted(stack.values(),
                        key=lambda h: (-(h.score + _rest_cost(h.coverage, n, cost, rest_memo)),
                                       h.target))
        for hyp in ranked[:config.beam_size]:
            for i in range(n):
                if hyp.coverage >> i & 1:
                    continue
                jump = i - (hyp.last_end + 1)
                if limit is not None and abs(jump) > limit:
                    continue
                base = hyp.score - w_dist * abs(jump)
                for j, span_mask, scored in spans_from[i]:
                    if hyp.coverage & span_mask:
                        continue
                    coverage = hyp.coverage | span_mask
                    done = coverage == full
                    target_stack = stacks[hyp.n_covered + j - i + 1]
                    for opt, static in scored:
                        lm_lp, state = lm_cache.extend(hyp.lm_state, opt.target)
                        if done:
                            lm_lp += lm_cache.finish(state)
                        score = base + static + w_lm * lm_lp
                        key = (coverage, state, -2 if done else j)
                        old = target_stack.get(key)
                        if old is not None and (score < old.score or (
                                score == old.score and hyp.target + opt.target >= old.target)):
                            continue
                        target_stack[key] = _Hyp(coverage, hyp.n_covered + j - i + 1, state, j,
                                                 score, hyp.target + opt.target)

    finals = list(stacks[n].values())
    if not finals:
        # every surviving hypothesis hit the distortion limit; monotone always completes
        return translate_sentence(table, lm, replace(config, monotone=True), source, lm_cache)
    best = finals[0]
    for hyp in finals[1:]:
        if _better(hyp, best):
            best = hyp
    return list(best.target), best.score


def translate_corpus(table: PhraseTable, lm: TrigramLM, config: DecoderConfig,
                     sentences: Iterable, threads: int = 1) -> list[list[str]]:
    """Translate sentences in order; ``threads > 1`` decodes concurrently.

    Repeated sentences are decoded once.
    """
    sents = [as_token_tuple(s) for s in sentences]
    unique = list(dict.fromkeys(sents))
    cache = _LMCache(lm)

    def run(s):
        return translate_sentence(table, lm, config, s, cache)[0]

    if threads <= 1 or len(unique) < 2:
        done = [run(s) for s in unique]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(run, unique))
    by_source = dict(zip(unique, done))
    return [list(by_source[s]) for s in sents]


def sample_weights(rng: random.Random, ranges: Mapping[str, tuple[float, float]] = WEIGHT_RANGES
                   ) -> dict[str, float]:
    return {name: rng.uniform(*ranges[name]) for name in FEATURE_NAMES}


def tune_weights(table: PhraseTable, lm: TrigramLM, dev_pairs: Sequence, trials: int = 20,
                 seed: int = 0, config: DecoderConfig | None = None,
                 sampler: Callable[[random.Random], Mapping[str, float]] | None = None,
                 threads: int = 1) -> dict[str, float]:
    """Random search over weight vectors, keeping the one with the best dev BLEU.

    The starting weights are always scored first and win ties.
    """
    from .bleu import compute_bleu

    if trials < 1:
        raise ValueError("trials must be >= 1")
    dev = [(as_token_tuple(s), as_token_tuple(r)) for s, r in
           ((p.source, p.target) if hasattr(p, "source") else p for p in dev_pairs)]
    if not dev:
        raise ValueError("development corpus is empty")
    config = config or DecoderConfig()
    sampler = sampler or sample_weights
    rng = random.Random(seed)
    sources = [s for s, _ in dev]
    refs = [r for _, r in dev]

    def dev_bleu(weights):
        cfg = replace(config, weights=dict(weights))
        return compute_bleu(translate_corpus(table, lm, cfg, sources, threads), refs).score

    best_w = dict(config.weights)
    best_bleu = dev_bleu(best_w)
    for _ in range(trials):
        cand = dict(sampler(rng))
        bleu = dev_bleu(cand)
        if bleu > best_bleu:
            best_w, best_bleu = cand, bleu
    return best_w


def write_weights(weights: Mapping[str, float], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for name in FEATURE_NAMES:
            fh.write(f"{name}\t{float(weights.get(name, 0.0))!r}\n")


def read_weights(path) -> dict[str, float]:
    weights = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) != 2 or cols[0] not in FEATURE_NAMES:
                raise ValueError(f"{path}:{lineno}: expected feature-name<TAB>value")
            weights[cols[0]] = float(cols[1])
    return weights
