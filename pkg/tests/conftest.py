import math
import random

import pytest

from dialectmt.lm import train_trigram
from dialectmt.phrase import PhraseOption, PhraseTable

CLASSIC = [
    (("das", "haus"), ("the", "house")),
    (("das", "buch"), ("the", "book")),
    (("ein", "buch"), ("a", "book")),
]


@pytest.fixture
def classic_corpus():
    return list(CLASSIC)


def random_decoder_instance(rng: random.Random, max_src: int = 4, max_opts: int = 3):
    """Tiny phrase table, LM and source sentence for oracle comparisons."""
    src_words = list("abcde")
    tgt_words = list("vwxyz")
    lm = train_trigram([[rng.choice(tgt_words) for _ in range(rng.randint(1, 5))]
                        for _ in range(6)])
    entries = {}
    for _ in range(6):
        src = tuple(rng.choice(src_words) for _ in range(rng.randint(1, 2)))
        opts = entries.setdefault(src, {})
        for _ in range(rng.randint(1, max_opts)):
            if len(opts) >= max_opts:
                break
            tgt = tuple(rng.choice(tgt_words) for _ in range(rng.randint(1, 2)))
            opts[tgt] = PhraseOption(tgt, tuple(math.log(rng.random()) for _ in range(4)))
    table = PhraseTable({s: list(v.values()) for s, v in entries.items()})
    source = tuple(rng.choice(src_words + ["q"]) for _ in range(rng.randint(1, max_src)))
    return table, lm, source


@pytest.fixture(scope="session")
def small_synthetic(tmp_path_factory):
    """Small generated data set on disk plus a config dict pointing at it."""
    from dialectmt.synthetic import make_synthetic_data, write_synthetic_data

    d = tmp_path_factory.mktemp("synthetic")
    data = make_synthetic_data(n_pairs=400, n_test=60, n_dev=30, n_monolingual=400, seed=1)
    write_synthetic_data(data, d)
    config = {
        "train": {"source": "train.gsw", "target": "train.de", "dialect": "BE"},
        "dev": {"source": "dev.gsw", "target": "dev.de"},
        "test_sets": [{"name": "synthetic", "source": "test.gsw", "target": "test.de"}],
        "lm": {"choice": "large", "path": "mono.de"},
        "pronunciations": "pron.dict",
        "char_pairs": "char_pairs.tsv",
        "strategies": ["Baseline1"],
        "beam_size": 20,
        "g2p_iterations": 1,
        "char_epochs": 1,
    }
    return d, data, config
