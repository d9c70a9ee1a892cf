"""Low-resource dialect-to-standard machine translation toolkit."""

__version__ = "0.1.0"

from .bleu import BleuReport, compute_bleu
from .corpus import ParallelCorpus, SentencePair, Vocabulary, load_parallel_corpus, tokenize
from .decoder import DecoderConfig, translate_corpus, translate_sentence, tune_weights
from .lm import TrigramLM
from .align import IBMModel1, WordAligner
from .phrase import PhraseTable, build_phrase_table, extract_phrases
from .translator import PhraseBasedTranslator

__all__ = [
    "BleuReport", "DecoderConfig", "IBMModel1", "ParallelCorpus", "PhraseBasedTranslator",
    "PhraseTable", "SentencePair", "TrigramLM", "Vocabulary", "WordAligner",
    "build_phrase_table", "compute_bleu", "extract_phrases", "load_parallel_corpus",
    "tokenize", "translate_corpus", "translate_sentence", "tune_weights",
]
