import re

import pytest
from hypothesis import given, settings, strategies as st
from sklearn.exceptions import NotFittedError

from dialectmt.corpus import Vocabulary
from dialectmt.normalize.g2p import G2PError
from dialectmt.normalize.oov import (NormalizationModels, OOVNormalizer, Resolution,
                                     normalize_oov, oov_count)

DIALECT = ["d Chatz isch vor de Tür", "de Stadt isch schön", "mir gönd hei", "es Huus"]
STANDARD = ["die Katze ist vor der Tür", "die Regierung ist neu", "die Angst",
            "wir gehen heim", "die Welt ist ein Haus"]


class StubG2P:
    def transcribe(self, word):
        if re.search(r"\d", word):
            raise G2PError(word)
        return tuple(word.lower())


class StubCharModel:
    max_len = 40

    def __init__(self, table):
        self.table = table

    def predict(self, words):
        return [self.table.get(w, w) for w in words]

    def translate(self, word):
        return self.predict([word])[0]


CHAR = StubCharModel({"Angscht": "Angst", "Chuchichäschtli": "Küchenkästchen",
                      "Schtadt": "Stadt", "Gschpänli": "Gspänli"})


def fitted(strategy, **kwargs):
    kwargs.setdefault("g2p", StubG2P())
    kwargs.setdefault("char_model", CHAR)
    return OOVNormalizer(strategy, **kwargs).fit(DIALECT, STANDARD)


@pytest.mark.parametrize("word, output, resolution", [
    ("Schtadt", "Stadt", Resolution.KNOWN_GSW),
    ("Angscht", "Angst", Resolution.KNOWN_DE),
    ("Regierig", "Regierung", Resolution.KNOWN_DE),
    ("Wält", "Welt", Resolution.KNOWN_DE),
    ("Hüüser", "Hüüser", Resolution.UNCHANGED),
    ("Chuchichäschtli", "Chuchichäschtli", Resolution.UNCHANGED),
])
def test_orth_branches(word, output, resolution):
    outcome = fitted("Orth").normalize_word(word)
    assert (outcome.output, outcome.resolution) == (output, resolution)


def test_proposal_outside_both_vocabularies_is_discarded():
    outcome = fitted("Cbnmt").normalize_word("Chuchichäschtli")
    assert outcome.w_prime == "Küchenkästchen"
    assert outcome.resolution is Resolution.UNCHANGED
    assert outcome.output == "Chuchichäschtli"


def test_dialect_vocabulary_preferred_over_standard():
    models = NormalizationModels(char_model=StubCharModel({"x": "y"}))
    outcome = normalize_oov("x", "Cbnmt", {"y": 1}, {"y": 1}, models)
    assert outcome.resolution is Resolution.KNOWN_GSW


def test_phonetic_strategy():
    norm = fitted("Phon")
    assert norm.normalize_word("HAUS").output == "Haus"
    assert norm.normalize_word("HUUS").resolution is Resolution.KNOWN_GSW
    assert norm.normalize_word("h4us").resolution is Resolution.UNCHANGED


def test_chains_fall_back_only_when_first_step_fails():
    norm = fitted("OrthThenPhon")
    assert norm.normalize_word("Schtadt").output == "Stadt"
    assert norm.normalize_word("HAUS").output == "Haus"
    norm = fitted("CbnmtThenPhon")
    assert norm.normalize_word("Angscht").output == "Angst"
    assert norm.normalize_word("WELT").output == "Welt"
    assert norm.normalize_word("Chuchichäschtli").resolution is Resolution.UNCHANGED


def test_direct_mode_substitutes_unchecked_output():
    norm = fitted("Cbnmt", direct_cbnmt=True)
    outcome = norm.normalize_word("Chuchichäschtli")
    assert (outcome.output, outcome.resolution) == ("Küchenkästchen", Resolution.DIRECT)
    assert norm.normalize_word("Schtadt").resolution is Resolution.KNOWN_GSW
    assert norm.normalize_word("Hüüser").resolution is Resolution.UNCHANGED


def test_sentence_example():
    assert fitted("Orth").transform(["d Angscht vor de Regierig"]) == [
        ["d", "Angst", "vor", "de", "Regierung"]]


def test_known_words_and_punctuation_untouched():
    out = fitted("Cbnmt", direct_cbnmt=True).transform([["de", "Stadt", ",", "Schtadt", "."]])
    assert out == [["de", "Stadt", ",", "Stadt", "."]]


def test_standard_vocabulary_extends_known_standard_words():
    norm = OOVNormalizer("Orth", standard_vocabulary={"Hüser": 1}).fit(DIALECT)
    assert norm.normalize_word("Wält").resolution is Resolution.UNCHANGED
    norm = OOVNormalizer("Orth", standard_vocabulary={"Welt": 1}).fit(DIALECT)
    assert norm.normalize_word("Wält").output == "Welt"


def test_estimator_errors():
    with pytest.raises(ValueError, match="unknown strategy"):
        OOVNormalizer("Spelling").fit(DIALECT)
    with pytest.raises(ValueError, match="g2p"):
        OOVNormalizer("Phon").fit(DIALECT)
    with pytest.raises(ValueError, match="char_model"):
        OOVNormalizer("CbnmtThenPhon", g2p=StubG2P()).fit(DIALECT)
    with pytest.raises(NotFittedError):
        OOVNormalizer().transform(DIALECT)


WORDS = st.sampled_from(["Schtadt", "Angscht", "Regierig", "Wält", "Hüüser", "HAUS", "de",
                         "Chuchichäschtli", "Gschpänli", ",", "gärn", "h4us", "isch"])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(WORDS, max_size=8), max_size=5),
       st.sampled_from(["Orth", "Phon", "Cbnmt", "OrthThenPhon", "CbnmtThenPhon"]))
def test_checked_outputs_are_known_or_untouched(sentences, strategy):
    norm = fitted(strategy)
    out = norm.transform(sentences)
    known = norm.gsw_vocab_ | norm.de_vocab_
    assert [len(s) for s in out] == [len(s) for s in sentences]
    for src, dst in zip(sentences, out):
        for w, v in zip(src, dst):
            assert v == w or v in known
    assert oov_count(out, known) <= oov_count(sentences, known)


def test_oov_count_ignores_punctuation():
    assert oov_count([["a", ",", "b"], ["c"]], Vocabulary({"a": 1})) == 2
