import json
import subprocess
import sys

import pytest

from dialectmt.cli import main


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture(scope="module")
def pipeline(small_synthetic, tmp_path_factory):
    """Train LM, alignments and phrase table through the CLI once."""
    d, _, _ = small_synthetic
    out = tmp_path_factory.mktemp("cli")
    assert main(["train-lm", "-i", str(d / "train.de"), "-o", str(out / "lm.arpa")]) == 0
    assert main(["train-align", "--source", str(d / "train.gsw"), "--target",
                 str(d / "train.de"), "--out-dir", str(out / "align")]) == 0
    assert main(["extract-phrases", "--source", str(d / "train.gsw"),
                 "--target", str(d / "train.de"),
                 "--alignments", str(out / "align" / "alignments.txt"),
                 "--forward", str(out / "align" / "forward.tsv"),
                 "--reverse", str(out / "align" / "reverse.tsv"),
                 "-o", str(out / "phrases.tsv")]) == 0
    return d, out


def test_tokenize(tmp_path, capsys):
    src = tmp_path / "raw.txt"
    src.write_text("Grüezi, mitenand!\n\nSo gaht's.\n", encoding="utf-8")
    rc, out, _ = run(capsys, "tokenize", "-i", src)
    assert rc == 0
    assert out.splitlines()[0] == "Grüezi , mitenand !"
    assert len(out.splitlines()) == 3


def test_split(small_synthetic, tmp_path, capsys):
    d, _, _ = small_synthetic
    rc, out, _ = run(capsys, "split", "--source", d / "train.gsw", "--target", d / "train.de",
                     "--train", 200, "--dev", 20, "--test", 20, "--dialect", "BE",
                     "--out-dir", tmp_path)
    assert rc == 0
    assert "train=200" in out
    assert len((tmp_path / "dev.src").read_text(encoding="utf-8").splitlines()) == 20
    assert (tmp_path / "metadata.tsv").exists()


def test_translate_preserves_line_count(pipeline, tmp_path, capsys):
    d, out = pipeline
    lines = (d / "test.gsw").read_text(encoding="utf-8").splitlines()[:15]
    src = tmp_path / "in.txt"
    src.write_text("\n".join(lines[:7] + [""] + lines[7:]) + "\n", encoding="utf-8")
    rc, stdout, _ = run(capsys, "translate", "-i", src, "--phrase-table", out / "phrases.tsv",
                        "--lm", out / "lm.arpa", "--beam-size", 10)
    assert rc == 0
    assert len(stdout.splitlines()) == 16
    assert stdout.splitlines()[7] == ""


def test_tune_then_bleu(pipeline, tmp_path, capsys):
    d, out = pipeline
    weights = tmp_path / "weights.tsv"
    rc, _, _ = run(capsys, "tune", "--phrase-table", out / "phrases.tsv", "--lm", out / "lm.arpa",
                   "--dev-source", d / "dev.gsw", "--dev-target", d / "dev.de",
                   "--trials", 2, "--beam-size", 10, "-o", weights)
    assert rc == 0 and weights.exists()
    hyp = tmp_path / "hyp.txt"
    rc, _, _ = run(capsys, "translate", "-i", d / "dev.gsw", "-o", hyp, "--phrase-table",
                   out / "phrases.tsv", "--lm", out / "lm.arpa", "--weights", weights,
                   "--beam-size", 10)
    assert rc == 0
    rc, stdout, _ = run(capsys, "bleu", "--hypotheses", hyp, "--references", d / "dev.de")
    assert rc == 0
    fields = stdout.split()
    assert len(fields) == 6
    assert 0 < float(fields[-1]) <= 100


def test_rules_check(tmp_path, capsys):
    rc, out, _ = run(capsys, "train-rules-check")
    assert rc == 0 and out.startswith("ok")
    rules = tmp_path / "rules.tsv"
    rules.write_text("scht\tst\n", encoding="utf-8")
    rc, out, err = run(capsys, "train-rules-check", "--rules", rules)
    assert rc == 1
    assert "FAIL" in out
    assert err.startswith("dialectmt: error:")


def test_normalize_with_trained_models(small_synthetic, tmp_path, capsys):
    d, _, _ = small_synthetic
    pron = tmp_path / "pron.dict"
    pron.write_text("".join((d / "pron.dict").read_text(encoding="utf-8")
                            .splitlines(keepends=True)[:300]), encoding="utf-8")
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("".join((d / "char_pairs.tsv").read_text(encoding="utf-8")
                             .splitlines(keepends=True)[:50]), encoding="utf-8")
    assert run(capsys, "train-g2p", "--dictionary", pron, "--iterations", 1,
               "-o", tmp_path / "g2p.pkl")[0] == 0
    assert run(capsys, "train-cbnmt", "--pairs", pairs, "--epochs", 1, "--hidden-size", 16,
               "-o", tmp_path / "char.ckpt")[0] == 0
    src = tmp_path / "in.txt"
    src.write_text("d Angscht vor de Regierig\nSchtadt\n", encoding="utf-8")
    standard = tmp_path / "standard.txt"
    standard.write_text("die Angst vor der Stadt und der Regierung\n", encoding="utf-8")
    common = ["-i", src, "--train-source", d / "train.gsw", "--train-target", d / "train.de",
              "--standard-text", standard]
    rc, out, _ = run(capsys, "normalize", "--strategy", "Orth", *common)
    assert rc == 0
    assert out.splitlines() == ["d Angst vor de Regierung", "Stadt"]
    for strategy, extra in [("OrthThenPhon", ["--g2p", tmp_path / "g2p.pkl"]),
                            ("Cbnmt", ["--cbnmt", tmp_path / "char.ckpt", "--direct"])]:
        rc, out, _ = run(capsys, "normalize", "--strategy", strategy, *common, *extra)
        assert rc == 0
        assert [len(l.split()) for l in out.splitlines()] == [5, 1]


def test_run_experiment(small_synthetic, tmp_path, capsys):
    d, _, config = small_synthetic
    path = d / "cli_config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    matrix = tmp_path / "matrix.tsv"
    rc, _, _ = run(capsys, "run-experiment", "--config", path, "--seed", 3, "-o", matrix)
    assert rc == 0
    assert matrix.read_text(encoding="utf-8").splitlines()[0] == "test_set\tBaseline1"


def test_errors_are_one_line(tmp_path, capsys):
    rc, _, err = run(capsys, "train-lm", "-i", tmp_path / "missing.txt", "-o", tmp_path / "x")
    assert rc == 1
    assert err.count("\n") == 1 and err.startswith("dialectmt: error:")
    rc, _, err = run(capsys, "run-experiment")
    assert rc == 1 and "--config" in err
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"junk")
    rc, _, err = run(capsys, "normalize", "--strategy", "Cbnmt", "--cbnmt", bad,
                     "--train-source", bad, "--train-target", bad)
    assert rc == 1


def test_usage_errors_exit_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["translate"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dialectmt.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("dialectmt ")
