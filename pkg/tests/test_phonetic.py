import re

from hypothesis import given, settings, strategies as st

from dialectmt.normalize.g2p import G2PError
from dialectmt.normalize.phonetic import PhoneticIndex, build_phonetic_index, phonetic_candidate


class StubG2P:
    """Spelling-to-sound toy: initial st/sp sound like scht/schp, digits fail."""

    def transcribe(self, word):
        w = word.lower()
        if re.search(r"\d", w):
            raise G2PError(f"cannot transcribe {word!r}")
        w = re.sub(r"^s(?=[tp])", "sch", w)
        return tuple("S" if m == "sch" else m for m in re.findall(r"sch|.", w))


G2P = StubG2P()


def test_dialect_spelling_found_in_standard_index():
    gsw = build_phonetic_index({"und": 3}, G2P)
    de = build_phonetic_index({"Stein": 2, "und": 5}, G2P)
    assert phonetic_candidate("Schtein", gsw, de, G2P) == "Stein"


def test_dialect_index_wins():
    gsw = build_phonetic_index({"schtein": 1}, G2P)
    de = build_phonetic_index({"Stein": 9}, G2P)
    assert phonetic_candidate("Schtein", gsw, de, G2P) == "schtein"


def test_no_match_and_untranscribable():
    gsw = build_phonetic_index({"und": 1}, G2P)
    de = build_phonetic_index({"Stein": 1}, G2P)
    assert phonetic_candidate("Haus", gsw, de, G2P) is None
    assert phonetic_candidate("h4us", gsw, de, G2P) is None


def test_ties_broken_by_frequency_then_alphabetically():
    index = build_phonetic_index({"Stein": 2, "stein": 5, "Schtein": 5}, G2P)
    assert index.best(G2P.transcribe("Stein")) == "Schtein"
    index = PhoneticIndex({("a",): {"b": 1, "a": 1}})
    assert index.best(("a",)) == "a"


def test_empty_vocabulary_and_skips():
    assert len(build_phonetic_index({}, G2P)) == 0
    index = build_phonetic_index({"a1": 1, "b2": 1, "Haus": 1, ",": 4}, G2P)
    assert index.n_skipped == 2
    assert list(index.keys()) == [("h", "a", "u", "s")]


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.text("abcstp1", min_size=1, max_size=6), st.integers(1, 9)))
def test_every_indexed_word_sits_under_its_own_pronunciation(vocab):
    index = build_phonetic_index(vocab, G2P)
    seen = set()
    for key in index.keys():
        for word in index[key]:
            assert G2P.transcribe(word) == key
            seen.add(word)
    assert len(seen) + index.n_skipped == len(vocab)
