"""Out-of-vocabulary normalization: rewrite rules, phonetic lookup, character model."""

from .g2p import G2PModel
from .oov import (STRATEGIES, NormalizationModels, NormalizationOutcome, OOVNormalizer,
                  Resolution, normalize_oov, normalize_sentence)
from .phonetic import PhoneticIndex, build_phonetic_index, phonetic_candidate
from .rules import RewriteRule, RuleSet, apply_rules, default_rules, load_rules

__all__ = [
    "G2PModel", "NormalizationModels", "NormalizationOutcome", "OOVNormalizer", "PhoneticIndex",
    "Resolution", "RewriteRule", "RuleSet", "STRATEGIES", "apply_rules",
    "build_phonetic_index", "default_rules", "load_rules", "normalize_oov",
    "normalize_sentence", "phonetic_candidate",
]
