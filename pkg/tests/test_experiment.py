import json
from dataclasses import replace

import pytest

from dialectmt.experiment import (STRATEGY_COLUMNS, ConfigError, ExperimentConfig,
                                  format_matrix, read_char_pairs, run_experiment)


def load(directory, config, **changes):
    data = {**config, **changes}
    path = directory / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return ExperimentConfig.load(path)


def test_single_cell_matrix(small_synthetic):
    d, _, config = small_synthetic
    results = run_experiment(load(d, config))
    assert list(results) == ["synthetic"]
    assert list(results["synthetic"]) == ["Baseline1"]
    assert 0.0 < results["synthetic"]["Baseline1"] <= 1.0
    table = format_matrix(results, ["Baseline1"])
    assert table.splitlines()[0] == "test_set\tBaseline1"
    assert len(table.splitlines()) == 2


def test_all_columns_and_determinism(small_synthetic):
    d, _, config = small_synthetic
    cfg = load(d, config, strategies=list(STRATEGY_COLUMNS))
    first = format_matrix(run_experiment(cfg), STRATEGY_COLUMNS)
    second = format_matrix(run_experiment(cfg), STRATEGY_COLUMNS)
    assert first == second
    assert first.splitlines()[0].split("\t")[1:] == list(STRATEGY_COLUMNS)


def test_paths_resolved_relative_to_config(small_synthetic):
    d, _, config = small_synthetic
    cfg = load(d, config)
    assert cfg.train.source == d / "train.gsw"
    assert cfg.lm_path == d / "mono.de"
    assert cfg.train.dialect == "BE"


@pytest.mark.parametrize("changes, message", [
    ({"strategies": ["Baseline1", "Spelling"]}, "unknown strategy"),
    ({"test_sets": [{"name": "x", "source": "missing.gsw", "target": "test.de"}]},
     "no such file"),
    ({"train": {"source": "train.gsw", "target": "train.de", "dialect": "XX"}}, "dialect"),
    ({"strategies": ["Phon"], "pronunciations": None}, "pronunciations"),
    ({"tuning_trials": 2, "dev": None}, "dev set"),
    ({"lm": "medium"}, "lm must be"),
])
def test_bad_configs_fail_before_training(small_synthetic, monkeypatch, changes, message):
    d, _, config = small_synthetic
    data = {k: v for k, v in {**config, **changes}.items() if v is not None}
    cfg = load(d, data)
    import dialectmt.experiment as experiment

    def boom(*args, **kwargs):
        raise AssertionError("training started")
    monkeypatch.setattr(experiment, "PhraseBasedTranslator", boom)
    with pytest.raises(ConfigError, match=message):
        run_experiment(cfg)


def test_config_file_errors(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        ExperimentConfig.load(path)
    path.write_text("[]", encoding="utf-8")
    with pytest.raises(ConfigError, match="object"):
        ExperimentConfig.load(path)
    path.write_text('{"train": {"source": "a"}}', encoding="utf-8")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(path)


def test_read_char_pairs(tmp_path):
    path = tmp_path / "p.tsv"
    path.write_text("Schtadt\tStadt\n\n" + "a" * 50 + "\tb\n", encoding="utf-8")
    assert read_char_pairs(path, max_len=40) == [("Schtadt", "Stadt")]
    assert len(read_char_pairs(path)) == 2
    path.write_text("Schtadt Stadt\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":1:"):
        read_char_pairs(path)


def test_replace_keeps_config_valid(small_synthetic):
    d, _, config = small_synthetic
    cfg = replace(load(d, config), seed=5, threads=2)
    cfg.validate()
    assert (cfg.seed, cfg.threads) == (5, 2)
