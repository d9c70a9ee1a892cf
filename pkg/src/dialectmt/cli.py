"""Command-line interface: ``dialectmt <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import pickle
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__

log = logging.getLogger("dialectmt")


def _read_text_lines(path) -> list[str]:
    if path in (None, "-"):
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


def _write_lines(path, lines) -> None:
    text = "".join(line + "\n" for line in lines)
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_pickle(path, kind):
    with open(path, "rb") as fh:
        obj = pickle.load(fh)
    if not isinstance(obj, kind):
        raise ValueError(f"{path}: not a {kind.__name__} model file")
    return obj


# -- commands --------------------------------------------------------------

def cmd_tokenize(args) -> None:
    from .corpus import tokenize
    _write_lines(args.output, [" ".join(tokenize(line)) for line in _read_text_lines(args.input)])


def cmd_split(args) -> None:
    from .corpus import load_parallel_corpus, split_corpus
    corpus = load_parallel_corpus(args.source, args.target, dialect=args.dialect, genre=args.genre)
    corpus = split_corpus(corpus, {"train": args.train, "dev": args.dev, "test": args.test},
                          seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, size in corpus.split_sizes().items():
        if not size:
            continue
        pairs = corpus.subset(name)
        _write_lines(out / f"{name}.src", [" ".join(p.source) for p in pairs])
        _write_lines(out / f"{name}.tgt", [" ".join(p.target) for p in pairs])
    corpus.write_metadata(out / "metadata.tsv")
    print("\t".join(f"{k}={v}" for k, v in corpus.split_sizes().items()))


def cmd_train_lm(args) -> None:
    from .corpus import read_sentences
    from .lm import TrigramLM
    model = TrigramLM(order=args.order, min_count=args.min_count).fit(read_sentences(args.input))
    model.write_arpa(args.output)


def cmd_train_align(args) -> None:
    from .align import WordAligner, format_pharaoh
    from .corpus import load_parallel_corpus
    pairs = list(load_parallel_corpus(args.source, args.target))
    aligner = WordAligner(args.iterations, null=not args.no_null, heuristic=args.heuristic)
    links = aligner.fit_transform(pairs)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    aligner.forward_.to_tsv(out / "forward.tsv")
    aligner.reverse_.to_tsv(out / "reverse.tsv")
    _write_lines(out / "alignments.txt", [format_pharaoh(l) for l in links])


def cmd_extract_phrases(args) -> None:
    from .align import IBMModel1, parse_pharaoh
    from .corpus import load_parallel_corpus
    from .phrase import build_phrase_table
    pairs = list(load_parallel_corpus(args.source, args.target))
    alignments = [parse_pharaoh(line) for line in _read_text_lines(args.alignments)]
    table = build_phrase_table(pairs, alignments, IBMModel1.from_tsv(args.forward, "forward"),
                               IBMModel1.from_tsv(args.reverse, "reverse"), args.max_len)
    table.write(args.output)


def cmd_train_g2p(args) -> None:
    from .normalize.g2p import G2PModel, read_pronunciations
    model = G2PModel(n_iter=args.iterations, beam_size=args.beam_size).fit(
        read_pronunciations(args.dictionary))
    with open(args.output, "wb") as fh:
        pickle.dump(model, fh)


def cmd_train_cbnmt(args) -> None:
    from .experiment import read_char_pairs
    from .normalize.charmodel import CharSeq2Seq
    pairs = read_char_pairs(args.pairs)
    model = CharSeq2Seq(hidden_size=args.hidden_size, epochs=args.epochs, cell=args.cell,
                        seed=args.seed).fit([s for s, _ in pairs], [t for _, t in pairs])
    model.save(args.output)


def cmd_train_rules_check(args) -> int:
    from .normalize.rules import check_rules, default_rules, load_rules
    ruleset = load_rules(args.rules) if args.rules else default_rules()
    failures = check_rules(ruleset)
    for src, expected, got in failures:
        print(f"FAIL\t{src}\texpected {expected}\tgot {got}")
    if failures:
        print(f"dialectmt: error: {len(failures)} example words not converted", file=sys.stderr)
        return 1
    print(f"ok\t{len(ruleset)} rules")
    return 0


def cmd_normalize(args) -> None:
    from .corpus import Vocabulary, load_parallel_corpus, read_sentences
    from .normalize.charmodel import CharSeq2Seq
    from .normalize.g2p import G2PModel
    from .normalize.oov import OOVNormalizer
    from .normalize.rules import load_rules
    train = list(load_parallel_corpus(args.train_source, args.train_target))
    extra = Vocabulary.from_sentences(read_sentences(args.standard_text)) \
        if args.standard_text else None
    normalizer = OOVNormalizer(
        args.strategy,
        rules=load_rules(args.rules) if args.rules else None,
        g2p=_load_pickle(args.g2p, G2PModel) if args.g2p else None,
        char_model=CharSeq2Seq.load(args.cbnmt) if args.cbnmt else None,
        direct_cbnmt=args.direct,
        standard_vocabulary=extra,
    ).fit([p.source for p in train], [p.target for p in train])
    lines = _read_text_lines(args.input)
    _write_lines(args.output, [" ".join(s) for s in normalizer.transform(lines)])


def _decoder_config(args):
    from .decoder import DEFAULT_WEIGHTS, DecoderConfig, read_weights
    weights = read_weights(args.weights) if getattr(args, "weights", None) else DEFAULT_WEIGHTS
    return DecoderConfig(beam_size=args.beam_size, distortion_limit=args.distortion_limit,
                         weights=dict(weights))


def cmd_translate(args) -> None:
    from .decoder import translate_corpus
    from .lm import TrigramLM
    from .phrase import PhraseTable
    table = PhraseTable.read(args.phrase_table)
    lm = TrigramLM.read_arpa(args.lm)
    lines = _read_text_lines(args.input)
    hyps = translate_corpus(table, lm, _decoder_config(args), [l.split() for l in lines],
                            threads=args.threads)
    _write_lines(args.output, [" ".join(h) for h in hyps])


def cmd_tune(args) -> None:
    from .corpus import load_parallel_corpus
    from .decoder import tune_weights, write_weights
    from .lm import TrigramLM
    from .phrase import PhraseTable
    weights = tune_weights(PhraseTable.read(args.phrase_table), TrigramLM.read_arpa(args.lm),
                           list(load_parallel_corpus(args.dev_source, args.dev_target)),
                           trials=args.trials, seed=args.seed, config=_decoder_config(args),
                           threads=args.threads)
    write_weights(weights, args.output)


def cmd_bleu(args) -> None:
    from .bleu import compute_bleu
    hyps = [l.split() for l in _read_text_lines(args.hypotheses)]
    refs = [l.split() for l in _read_text_lines(args.references)]
    print(compute_bleu(hyps, refs).as_tsv())


def cmd_run_experiment(args) -> None:
    from .experiment import ExperimentConfig, format_matrix, run_experiment
    if not args.config:
        raise ValueError("run-experiment needs --config")
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.threads is not None:
        config = replace(config, threads=args.threads)
    results = run_experiment(config)
    text = format_matrix(results, config.strategies)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- parser ----------------------------------------------------------------

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    parser.add_argument("--threads", type=int, default=default,
                        help="sentence-level decoding threads (default 1)")
    parser.add_argument("--config", default=default, help="experiment config (JSON)")
    parser.add_argument("-v", "--verbose", action="store_true", default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dialectmt",
                                     description="Dialect-to-standard phrase-based MT toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        _global_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def io(p):
        p.add_argument("-i", "--input", default="-", help="input file (default stdin)")
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")

    def decoding(p):
        p.add_argument("--phrase-table", required=True)
        p.add_argument("--lm", required=True, help="ARPA language model")
        p.add_argument("--weights", help="weights TSV (defaults if omitted)")
        p.add_argument("--beam-size", type=int, default=100)
        p.add_argument("--distortion-limit", type=int, default=4)

    p = add("tokenize", cmd_tokenize, "split text into tokens, one sentence per line")
    io(p)

    p = add("split", cmd_split, "shuffle a parallel corpus into train/dev/test")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--train", type=int, required=True)
    p.add_argument("--dev", type=int, default=0)
    p.add_argument("--test", type=int, default=0)
    p.add_argument("--dialect", default="UNKNOWN")
    p.add_argument("--genre", default="")
    p.add_argument("--out-dir", required=True)

    p = add("train-lm", cmd_train_lm, "train a Witten-Bell trigram LM and write ARPA")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--min-count", type=int, default=1)

    p = add("train-align", cmd_train_align, "IBM Model 1 in both directions plus symmetrization")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--iterations", type=int, default=5)
    p.add_argument("--heuristic", default="grow-diag",
                   choices=("intersection", "union", "grow-diag"))
    p.add_argument("--no-null", action="store_true")

    p = add("extract-phrases", cmd_extract_phrases, "build a phrase table from alignments")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--alignments", required=True)
    p.add_argument("--forward", required=True, help="source-to-target translation table")
    p.add_argument("--reverse", required=True, help="target-to-source translation table")
    p.add_argument("--max-len", type=int, default=7)
    p.add_argument("-o", "--output", required=True)

    p = add("train-g2p", cmd_train_g2p, "train a graphone G2P model")
    p.add_argument("--dictionary", required=True, help="word<TAB>phones file")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--beam-size", type=int, default=8)
    p.add_argument("-o", "--output", required=True)

    p = add("train-cbnmt", cmd_train_cbnmt, "train the character-level word translator")
    p.add_argument("--pairs", required=True, help="dialect<TAB>standard word pairs")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--hidden-size", type=int, default=320)
    p.add_argument("--cell", choices=("gru", "qrnn"), default="gru")
    p.add_argument("-o", "--output", required=True)

    p = add("train-rules-check", cmd_train_rules_check,
            "check a rules file against the built-in example words")
    p.add_argument("--rules", help="rules TSV (built-in rules if omitted)")

    p = add("normalize", cmd_normalize, "rewrite out-of-vocabulary dialect words")
    io(p)
    p.add_argument("--strategy", required=True,
                   choices=("Orth", "Phon", "Cbnmt", "OrthThenPhon", "CbnmtThenPhon"))
    p.add_argument("--train-source", required=True)
    p.add_argument("--train-target", required=True)
    p.add_argument("--standard-text", help="extra standard-language text for the vocabulary")
    p.add_argument("--rules")
    p.add_argument("--g2p", help="model written by train-g2p")
    p.add_argument("--cbnmt", help="checkpoint written by train-cbnmt")
    p.add_argument("--direct", action="store_true",
                   help="substitute character-model output without vocabulary checks")

    p = add("translate", cmd_translate, "decode sentences, one output line per input line")
    io(p)
    decoding(p)

    p = add("tune", cmd_tune, "random-search feature weights on a dev set")
    decoding(p)
    p.add_argument("--dev-source", required=True)
    p.add_argument("--dev-target", required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("-o", "--output", required=True)

    p = add("bleu", cmd_bleu, "corpus BLEU: p1 p2 p3 p4 BP bleu")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)

    p = add("run-experiment", cmd_run_experiment, "train everything and print the BLEU grid")
    p.add_argument("-o", "--output", help="write the TSV matrix here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    seed_given = args.seed is not None
    if args.command != "run-experiment":
        args.seed = args.seed if seed_given else 0
        args.threads = args.threads if args.threads is not None else 1
    try:
        rc = args.func(args)
    except KeyboardInterrupt:
        print("dialectmt: interrupted", file=sys.stderr)
        return 130
    except Exception as exc:  # noqa: BLE001 - every failure becomes one diagnostic line
        if args.verbose:
            log.exception("command failed")
        msg = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
        print(f"dialectmt: error: {msg}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
