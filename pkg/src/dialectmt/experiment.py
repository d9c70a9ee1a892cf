"""Evaluation grid: test sets x normalization strategies -> BLEU."""

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .bleu import compute_bleu
from .corpus import DIALECTS, load_parallel_corpus, read_sentences
from .lm import TrigramLM
from .normalize.charmodel import CharSeq2Seq
from .normalize.g2p import G2PModel, read_pronunciations
from .normalize.oov import OOVNormalizer
from .normalize.rules import load_rules
from .translator import PhraseBasedTranslator

log = logging.getLogger(__name__)

STRATEGY_COLUMNS = ("Baseline1", "Baseline2", "Phon", "Orth", "OrthThenPhon",
                    "CbnmtThenPhon", "Cbnmt")
_NEEDS_G2P = {"Phon", "OrthThenPhon", "CbnmtThenPhon"}
_NEEDS_CHAR = {"Cbnmt", "CbnmtThenPhon"}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class DataSet:
    name: str
    source: Path
    target: Path
    dialect: str = "UNKNOWN"
    genre: str = ""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one run of the grid needs.

    ``lm`` is ``"small"`` (trained on the training targets) or ``"large"``
    (training targets plus the monolingual text at ``lm_path``, or an ARPA
    file). ``Baseline1`` always uses the small LM and ``Baseline2`` the
    large one; the normalization columns use the configured choice.
    """

    train: DataSet
    test_sets: tuple[DataSet, ...]
    strategies: tuple[str, ...]
    dev: DataSet | None = None
    lm: str = "large"
    lm_path: Path | None = None
    rules: Path | None = None
    pronunciations: Path | None = None
    char_pairs: Path | None = None
    tuning_trials: int = 0
    seed: int = 0
    align_iterations: int = 5
    beam_size: int = 100
    distortion_limit: int | None = 4
    g2p_iterations: int = 3
    char_epochs: int = 10
    char_cell: str = "gru"
    threads: int = 1
    extra: Mapping = field(default_factory=dict)

    def validate(self) -> None:
        unknown = [s for s in self.strategies if s not in STRATEGY_COLUMNS]
        if unknown:
            raise ConfigError(f"unknown strategy {unknown[0]!r}; expected one of "
                              f"{', '.join(STRATEGY_COLUMNS)}")
        if not self.strategies:
            raise ConfigError("no strategies to run")
        if not self.test_sets:
            raise ConfigError("no test sets")
        names = [t.name for t in self.test_sets]
        if len(set(names)) != len(names):
            raise ConfigError("test set names must be unique")
        if self.lm not in ("small", "large"):
            raise ConfigError(f"lm must be 'small' or 'large', not {self.lm!r}")
        needs_large = "Baseline2" in self.strategies or (
            self.lm == "large" and set(self.strategies) - {"Baseline1"})
        required: list[tuple[str, Path | None]] = []
        for ds in (self.train, self.dev, *self.test_sets):
            if ds is None:
                continue
            if ds.dialect not in DIALECTS:
                raise ConfigError(f"data set {ds.name}: unknown dialect tag {ds.dialect!r}")
            required += [(f"{ds.name} source", ds.source), (f"{ds.name} target", ds.target)]
        if needs_large:
            required.append(("large LM", self.lm_path))
        if set(self.strategies) & _NEEDS_G2P:
            required.append(("pronunciations", self.pronunciations))
        if set(self.strategies) & _NEEDS_CHAR:
            required.append(("char_pairs", self.char_pairs))
        if self.rules is not None:
            required.append(("rules", self.rules))
        for what, path in required:
            if path is None:
                raise ConfigError(f"{what}: path missing from config")
            if not Path(path).is_file():
                raise ConfigError(f"{what}: no such file {path}")
        if self.tuning_trials > 0 and self.dev is None:
            raise ConfigError("tuning_trials > 0 needs a dev set")

    @classmethod
    def from_dict(cls, data: Mapping, base_dir: Path | str = ".") -> "ExperimentConfig":
        base = Path(base_dir)

        def path(value):
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base / p

        def dataset(entry, default_name):
            if not isinstance(entry, Mapping) or "source" not in entry or "target" not in entry:
                raise ConfigError(f"data set {default_name}: needs 'source' and 'target'")
            return DataSet(str(entry.get("name", default_name)), path(entry["source"]),
                           path(entry["target"]), entry.get("dialect", "UNKNOWN"),
                           entry.get("genre", ""))

        data = dict(data)
        try:
            train = dataset(data.pop("train"), "train")
            tests = tuple(dataset(t, f"test{i}") for i, t in enumerate(data.pop("test_sets"), 1))
        except KeyError as exc:
            raise ConfigError(f"config is missing {exc.args[0]!r}") from None
        dev = data.pop("dev", None)
        lm = data.pop("lm", "large")
        lm_path = None
        if isinstance(lm, Mapping):
            lm_path = path(lm.get("path"))
            lm = lm.get("choice", "large")
        kwargs = {}
        for key in ("tuning_trials", "seed", "align_iterations", "beam_size", "g2p_iterations",
                    "char_epochs", "threads"):
            if key in data:
                kwargs[key] = int(data.pop(key))
        if "distortion_limit" in data:
            dl = data.pop("distortion_limit")
            kwargs["distortion_limit"] = None if dl is None else int(dl)
        if "char_cell" in data:
            kwargs["char_cell"] = str(data.pop("char_cell"))
        strategies = tuple(data.pop("strategies", ("Baseline1",)))
        return cls(train=train, test_sets=tests, strategies=strategies,
                   dev=dataset(dev, "dev") if dev is not None else None, lm=lm,
                   lm_path=lm_path, rules=path(data.pop("rules", None)),
                   pronunciations=path(data.pop("pronunciations", None)),
                   char_pairs=path(data.pop("char_pairs", None)), extra=data, **kwargs)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
        if not isinstance(data, Mapping):
            raise ConfigError(f"{p}: top level must be an object")
        return cls.from_dict(data, p.parent)


def _read_pairs(ds: DataSet):
    corpus = load_parallel_corpus(ds.source, ds.target, dialect=ds.dialect, genre=ds.genre)
    return [p.source for p in corpus], [p.target for p in corpus]


def read_char_pairs(path, max_len: int | None = None) -> list[tuple[str, str]]:
    """``dialect<TAB>standard`` word pairs, one per line."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0] or not cols[1]:
            raise ValueError(f"{path}:{lineno}: expected dialect<TAB>standard")
        if max_len is not None and max(len(cols[0]), len(cols[1])) > max_len:
            continue
        pairs.append((cols[0], cols[1]))
    return pairs


def _large_lm(path: Path, train_targets) -> TrigramLM:
    if path.suffix == ".arpa":
        return TrigramLM.read_arpa(path)
    return TrigramLM().fit(list(train_targets) + read_sentences(path))


def run_experiment(config: ExperimentConfig) -> dict[str, dict[str, float]]:
    """BLEU (0-1) for every (test set, strategy) cell; models are trained once."""
    config.validate()
    try:
        import torch
        torch.set_num_threads(1)
    except ImportError:  # pragma: no cover
        pass

    train_src, train_tgt = _read_pairs(config.train)
    tests = {ds.name: _read_pairs(ds) for ds in config.test_sets}
    dev = _read_pairs(config.dev) if config.dev is not None else None
    strategies = config.strategies
    log.info("training translation model on %d pairs", len(train_src))
    small = PhraseBasedTranslator(n_iter=config.align_iterations, beam_size=config.beam_size,
                                  distortion_limit=config.distortion_limit,
                                  threads=config.threads).fit(train_src, train_tgt)
    systems = {"small": small}
    if "Baseline2" in strategies or (config.lm == "large" and set(strategies) - {"Baseline1"}):
        large = copy.copy(small)
        large.lm_ = _large_lm(config.lm_path, train_tgt)
        systems["large"] = large
    for name, system in systems.items():
        if config.tuning_trials > 0:
            log.info("tuning weights for the %s LM system", name)
            system.tune(*dev, trials=config.tuning_trials, seed=config.seed)

    normalizers: dict[str, OOVNormalizer] = {}
    needed = [s for s in strategies if s not in ("Baseline1", "Baseline2")]
    if needed:
        rules = load_rules(config.rules) if config.rules is not None else None
        g2p = char_model = None
        if set(needed) & _NEEDS_G2P:
            log.info("training G2P model")
            g2p = G2PModel(n_iter=config.g2p_iterations).fit(
                read_pronunciations(config.pronunciations))
        if set(needed) & _NEEDS_CHAR:
            log.info("training character model")
            pairs = read_char_pairs(config.char_pairs, max_len=CharSeq2Seq().max_len)
            char_model = CharSeq2Seq(epochs=config.char_epochs, cell=config.char_cell,
                                     seed=config.seed).fit([s for s, _ in pairs],
                                                           [t for _, t in pairs])
        de_vocab = None
        if config.lm_path is not None and config.lm_path.suffix != ".arpa":
            from .corpus import Vocabulary
            de_vocab = Vocabulary.from_sentences(read_sentences(config.lm_path))
        for strategy in needed:
            normalizers[strategy] = OOVNormalizer(
                strategy, rules=rules, g2p=g2p, char_model=char_model,
                direct_cbnmt=strategy == "Cbnmt", standard_vocabulary=de_vocab,
            ).fit(train_src, train_tgt)

    results: dict[str, dict[str, float]] = {}
    for test_name, (src, ref) in tests.items():
        inputs: dict[str, list] = {}
        for strategy in strategies:
            if strategy in normalizers:
                inputs[strategy] = normalizers[strategy].transform(src)
            else:
                inputs[strategy] = src
        row = {}
        # decode everything one system sees in one batch so repeats are shared
        for sys_name, system in systems.items():
            cols = [s for s in strategies if _system_for(s, config) == sys_name]
            if not cols:
                continue
            flat = [sent for s in cols for sent in inputs[s]]
            hyps = system.predict(flat)
            for k, s in enumerate(cols):
                row[s] = compute_bleu(hyps[k * len(src):(k + 1) * len(src)], ref).score
        results[test_name] = {s: row[s] for s in strategies}
        log.info("%s: %s", test_name, results[test_name])
    return results


def _system_for(strategy: str, config: ExperimentConfig) -> str:
    if strategy == "Baseline1":
        return "small"
    if strategy == "Baseline2":
        return "large"
    return config.lm


def format_matrix(results: Mapping[str, Mapping[str, float]], strategies: Sequence[str]) -> str:
    lines = ["test_set\t" + "\t".join(strategies)]
    for name, row in results.items():
        lines.append(name + "\t" + "\t".join(f"{100 * row[s]:.1f}" for s in strategies))
    return "\n".join(lines) + "\n"
