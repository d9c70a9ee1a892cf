import math
import random
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_decoder_instance
from dialectmt.bleu import compute_bleu
from dialectmt.decoder import (DEFAULT_WEIGHTS, FEATURE_NAMES, DecoderConfig, read_weights,
                               translate_corpus, translate_sentence, tune_weights, write_weights)
from dialectmt.lm import train_trigram
from dialectmt.phrase import PhraseOption, PhraseTable
from oracles import brute_force_decode

FLAT_LM = train_trigram([["x"]], order=1)


def _random_weights(rng):
    return {k: rng.uniform(-1, 1) for k in FEATURE_NAMES}


class TestSingleSentence:
    def test_copy_through_with_empty_table(self):
        out, _ = translate_sentence(PhraseTable(), FLAT_LM, DecoderConfig(), ["xyz", "abc"])
        assert out == ["xyz", "abc"]

    def test_single_candidate(self):
        table = PhraseTable({("a",): [PhraseOption(("x",), (0.0,) * 4)]})
        assert translate_sentence(table, FLAT_LM, DecoderConfig(), ["a"])[0] == ["x"]

    def test_empty_input(self):
        out, score = translate_sentence(PhraseTable(), FLAT_LM, DecoderConfig(), [])
        assert out == [] and math.isfinite(score)

    def test_oracle_small(self):
        rng = random.Random(11)
        for _ in range(60):
            table, lm, source = random_decoder_instance(rng)
            limit = rng.choice([None, 0, 1, 2, 4])
            cfg = DecoderConfig(beam_size=10 ** 6, distortion_limit=limit,
                                weights=_random_weights(rng), monotone=rng.random() < 0.2)
            score = translate_sentence(table, lm, cfg, source)[1]
            assert abs(score - brute_force_decode(table, lm, cfg, source)) < 1e-9

    def test_tie_break_lexicographic(self):
        table = PhraseTable({("a",): [PhraseOption(("y",), (0.0,) * 4),
                                      PhraseOption(("x",), (0.0,) * 4)]})
        lm = train_trigram([["x"], ["y"]])
        assert translate_sentence(table, lm, DecoderConfig(), ["a"])[0] == ["x"]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 30))
    def test_pruned_beam_never_beats_exhaustive(self, seed, beam):
        rng = random.Random(seed)
        table, lm, source = random_decoder_instance(rng)
        cfg = DecoderConfig(beam_size=beam, weights=_random_weights(rng))
        pruned = translate_sentence(table, lm, cfg, source)[1]
        full = translate_sentence(table, lm, replace(cfg, beam_size=10 ** 6), source)[1]
        assert pruned <= full + 1e-9

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.sampled_from("abcd"), min_size=1, max_size=6), st.integers(0, 1000))
    def test_monotone_keeps_order(self, source, seed):
        rng = random.Random(seed)
        mapping = {w: f"T{w}" for w in "abcd"}
        table = PhraseTable({(w,): [PhraseOption((t,), (0.0,) * 4)] for w, t in mapping.items()})
        lm = train_trigram([[rng.choice(list(mapping.values())) for _ in range(4)]
                            for _ in range(5)])
        cfg = DecoderConfig(distortion_limit=0, monotone=True, weights=_random_weights(rng))
        assert translate_sentence(table, lm, cfg, source)[0] == [mapping[w] for w in source]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_oov_tokens_survive(self, seed):
        rng = random.Random(seed)
        table, lm, _ = random_decoder_instance(rng)
        source = [rng.choice(list("abcde") + ["OOV1", "OOV2"]) for _ in range(rng.randint(1, 6))]
        cfg = DecoderConfig(beam_size=rng.choice([1, 5, 100]), weights=_random_weights(rng))
        out = translate_sentence(table, lm, cfg, source)[0]
        oov_in = Counter(w for w in source if w not in table.source_words)
        oov_out = Counter(w for w in out if w in oov_in)
        assert oov_out == oov_in

    def test_distortion_limit_fallback(self):
        # only a long jump would cover "b" first; with limit 0 the monotone path still works
        table = PhraseTable({("a", "b"): [PhraseOption(("x",), (0.0,) * 4)]})
        out, _ = translate_sentence(table, FLAT_LM, DecoderConfig(distortion_limit=0), ["a", "b"])
        assert out


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            DecoderConfig(beam_size=0)
        with pytest.raises(ValueError):
            DecoderConfig(weights={"lm": math.inf})
        with pytest.raises(ValueError):
            DecoderConfig(weights={"bogus": 1.0})

    def test_weights_file_round_trip(self, tmp_path):
        rng = random.Random(2)
        weights = _random_weights(rng)
        write_weights(weights, tmp_path / "w.tsv")
        assert read_weights(tmp_path / "w.tsv") == weights
        first = (tmp_path / "w.tsv").read_text().splitlines()[0]
        assert first.split("\t")[0] == FEATURE_NAMES[0]


def _corpus_instance(seed=5, n=50):
    rng = random.Random(seed)
    table, lm, _ = random_decoder_instance(rng)
    sents = [[rng.choice("abcdeq") for _ in range(rng.randint(1, 5))] for _ in range(n)]
    return table, lm, sents


class TestCorpus:
    def test_empty_and_singleton(self):
        table, lm, sents = _corpus_instance()
        cfg = DecoderConfig()
        assert translate_corpus(table, lm, cfg, []) == []
        assert translate_corpus(table, lm, cfg, sents[:1]) == [
            translate_sentence(table, lm, cfg, sents[0])[0]]

    def test_parallel_equals_serial(self):
        table, lm, sents = _corpus_instance()
        cfg = DecoderConfig(beam_size=20)
        assert translate_corpus(table, lm, cfg, sents, threads=4) == translate_corpus(
            table, lm, cfg, sents, threads=1)


class TestTuning:
    def _dev(self):
        table, lm, sents = _corpus_instance(n=20)
        cfg = DecoderConfig()
        refs = translate_corpus(table, lm, replace(cfg, weights={**DEFAULT_WEIGHTS, "lm": 1.5}),
                                sents)
        return table, lm, list(zip(sents, refs))

    def test_default_sampler_returns_default(self):
        table, lm, dev = self._dev()
        out = tune_weights(table, lm, dev, trials=1, sampler=lambda rng: dict(DEFAULT_WEIGHTS))
        assert out == DEFAULT_WEIGHTS

    def test_keeps_best_and_deterministic(self):
        table, lm, dev = self._dev()
        srcs, refs = [s for s, _ in dev], [r for _, r in dev]

        def bleu(w):
            return compute_bleu(translate_corpus(table, lm, DecoderConfig(weights=w), srcs),
                                refs).score

        tuned = tune_weights(table, lm, dev, trials=5, seed=3)
        assert bleu(tuned) >= bleu(DEFAULT_WEIGHTS)
        assert tune_weights(table, lm, dev, trials=5, seed=3) == tuned

    def test_errors(self):
        table, lm, dev = self._dev()
        with pytest.raises(ValueError):
            tune_weights(table, lm, [], trials=1)
        with pytest.raises(ValueError):
            tune_weights(table, lm, dev, trials=0)
