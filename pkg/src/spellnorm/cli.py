"""Command-line interface.

Exit status: 0 on success, 1 on evaluation/domain failures, 2 on usage or
I/O failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import __version__
from .core import (
    BACKENDS,
    NEEDS_LEXICON,
    load_model,
    make_hybrid,
    normalize_all,
    save_model,
    train,
)
from .corpus import (
    build_lexicon,
    load_dataset,
    load_lexicon,
    preprocess_pair,
    preprocess_token,
    save_dataset,
    save_lexicon,
)
from .errors import (
    ConfigurationError,
    EvaluationError,
    IngestionError,
    SpellnormError,
    TrainingError,
)
from .evaluation import EvalReport, compare_systems, evaluate_dataset, word_accuracy
from .experiments import DEFAULT_MAX_SPLITS, learning_curve, write_curve_csv

log = logging.getLogger("spellnorm")

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_config(args) -> dict:
    config: dict = {}
    if getattr(args, "config", None):
        try:
            config.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from None
    for item in getattr(args, "set", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            config[key] = json.loads(value)
        except json.JSONDecodeError:
            config[key] = value
    return config


def _lexicon(args):
    return load_lexicon(args.lexicon) if getattr(args, "lexicon", None) else None


def _extra_lm(path: str | None) -> list[str] | None:
    if path is None:
        return None
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        for raw in line.split():
            token = preprocess_token(raw)
            if token is not None:
                words.append(token)
    return words


def _prepare(token: str) -> str:
    # same pipeline as dataset sides; digits are zeroed as for an identical pair
    pair = preprocess_pair(token, token)
    return pair.source if pair is not None else token


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_preprocess(args) -> int:
    dataset = load_dataset(args.input, "train")
    save_dataset(dataset, args.output)
    print(f"kept {len(dataset)} pairs, dropped {dataset.dropped}", file=sys.stderr)
    return EXIT_OK


def cmd_lexicon(args) -> int:
    lexicon = build_lexicon(args.corpus or [], args.wordlist or [])
    save_lexicon(lexicon, args.output)
    print(f"{len(lexicon)} types", file=sys.stderr)
    return EXIT_OK


def cmd_train(args) -> int:
    if args.backend in NEEDS_LEXICON and not args.lexicon:
        raise ConfigurationError(f"backend {args.backend!r} needs a lexicon: pass --lexicon FILE")
    pairs = load_dataset(args.train, "train")
    model = train(args.backend, pairs, _lexicon(args), _read_config(args), _extra_lm(args.lm_corpus))
    save_model(model, args.model)
    if args.save_config:
        Path(args.save_config).write_text(
            json.dumps(model.config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    print(
        f"trained {args.backend} on {len(pairs)} pairs "
        f"({len(model.source_vocabulary)} source types)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_normalize(args) -> int:
    model = load_model(args.model)
    lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    tokens = [_prepare(line.split("\t")[0]) for line in lines]
    forms = normalize_all(model, tokens, args.threads)
    _write(args.output, "".join(f"{f}\n" for f in forms))
    return EXIT_OK


def _train_vocab(path: str | None):
    if path is None:
        return None
    return frozenset(load_dataset(path, "train").sources)


def cmd_evaluate(args) -> int:
    test = load_dataset(args.test, "test")
    if (args.model is None) == (args.predictions is None):
        raise UsageError("give exactly one of --model or --predictions")
    if args.model:
        pred = normalize_all(load_model(args.model), test.sources, args.threads)
        name = args.name or Path(args.model).stem
    else:
        lines = Path(args.predictions).read_text(encoding="utf-8").splitlines()
        if len(lines) != len(test):
            raise EvaluationError(
                f"{args.predictions} has {len(lines)} lines but the test set has {len(test)} pairs"
            )
        pred = [_prepare(p) for p in lines]
        name = args.name or Path(args.predictions).stem
    report = evaluate_dataset(test, pred, _train_vocab(args.train), args.stem_lang, name)
    _write(args.report, report.to_json())
    row = report.table_row()
    print(" ".join(f"{k}={v}" for k, v in row.items()), file=sys.stderr)
    return EXIT_OK


def _load_report(path: str) -> EvalReport:
    return EvalReport.from_json(Path(path).read_text(encoding="utf-8"))


def cmd_compare(args) -> int:
    a, b = _load_report(args.report_a), _load_report(args.report_b)
    c, result = compare_systems(a.per_token_correctness, b.per_token_correctness)
    print(f"A: {a.name or args.report_a}  accuracy={a.word_accuracy:.4f}")
    print(f"B: {b.name or args.report_b}  accuracy={b.word_accuracy:.4f}")
    print(f"n00={c.n00} n01={c.n01} n10={c.n10} n11={c.n11}")
    test = "exact binomial" if result.exact else "chi-square, continuity-corrected"
    print(f"statistic={result.statistic:.4f} p={result.p_value:.4g} ({test})")
    print("significant at p < 0.05" if result.significant else "not significant at p < 0.05")
    return EXIT_OK


def cmd_hybrid(args) -> int:
    lookup, backoff = load_model(args.lookup_model), load_model(args.backoff_model)
    model = make_hybrid(lookup, backoff)
    test = load_dataset(args.test, "test")
    pred = normalize_all(model, test.sources, args.threads)
    backoff_pred = normalize_all(backoff, test.sources, args.threads)
    report = evaluate_dataset(test, pred, model.source_vocabulary, args.stem_lang, "hybrid")
    _write(args.report, report.to_json())
    _, result = compare_systems(report.per_token_correctness, [
        g == p for g, p in zip(test.targets, backoff_pred)
    ])
    base = word_accuracy(test.targets, backoff_pred)
    mark = "" if result.significant else "*"
    print(f"{'system':<24}{'accuracy':>10}")
    print(f"{backoff.backend + ' (alone)':<24}{100 * base:>10.2f}")
    print(f"{'lookup + ' + backoff.backend:<24}{100 * report.word_accuracy:>10.2f}{mark}")
    return EXIT_OK


def cmd_curve(args) -> int:
    train_set = load_dataset(args.train, "train")
    dev = load_dataset(args.dev, "dev")
    sizes = None
    if args.sizes:
        try:
            sizes = sorted(int(s) for s in args.sizes.split(","))
        except ValueError:
            raise UsageError(f"--sizes expects comma-separated integers, got {args.sizes!r}") from None
        too_big = [s for s in sizes if s > len(train_set)]
        for s in too_big:
            log.warning("skipping size %d: only %d training pairs", s, len(train_set))
        sizes = [s for s in sizes if s <= len(train_set)]
    points = learning_curve(
        train_set, dev, args.backend, sizes, _read_config(args), _lexicon(args),
        args.max_splits, args.threads,
    )
    if args.output in (None, "-"):
        write_curve_csv(args.backend, points, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            write_curve_csv(args.backend, points, f)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spellnorm", description="Train and evaluate historical spelling normalizers."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads (default: 1)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="preprocess a two-column dataset file")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("lexicon", help="build a lexicon from running text and wordlists")
    p.add_argument("--corpus", action="append", help="running-text file (repeatable)")
    p.add_argument("--wordlist", action="append", help="one-type-per-line file (repeatable)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_lexicon)

    def config_flags(p):
        p.add_argument("--config", help="JSON file with backend options")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one option")

    p = sub.add_parser("train", help="train a normalizer and save it")
    p.add_argument("backend", choices=BACKENDS)
    p.add_argument("train", help="training dataset")
    p.add_argument("-m", "--model", required=True, help="output model file")
    p.add_argument("--lexicon", help="lexicon file (required for distance and chain)")
    p.add_argument("--lm-corpus", help="extra monolingual text for the channel LM")
    p.add_argument("--save-config", help="write the resolved backend options as JSON")
    config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("normalize", help="normalize tokens, one per line")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("evaluate", help="score a model or a predictions file")
    p.add_argument("test", help="test dataset")
    p.add_argument("--model")
    p.add_argument("--predictions", help="one predicted form per test line")
    p.add_argument("--train", help="training dataset, for the seen/unseen breakdown")
    p.add_argument("--stem-lang", help="language code for stem accuracy (en, de, es, hu, pt, sv)")
    p.add_argument("--name")
    p.add_argument("-r", "--report", help="report output (default: stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="McNemar test between two reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("hybrid", help="lookup on seen tokens, another model on unseen tokens")
    p.add_argument("lookup_model")
    p.add_argument("backoff_model")
    p.add_argument("test")
    p.add_argument("--stem-lang")
    p.add_argument("-r", "--report")
    p.set_defaults(func=cmd_hybrid)

    p = sub.add_parser("curve", help="learning curve over training sizes")
    p.add_argument("backend", choices=BACKENDS)
    p.add_argument("train")
    p.add_argument("dev")
    p.add_argument("--sizes", help="comma-separated sizes (default: 100,...,50000)")
    p.add_argument("--max-splits", type=int, default=DEFAULT_MAX_SPLITS)
    p.add_argument("--lexicon")
    p.add_argument("-o", "--output")
    config_flags(p)
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    random.seed(args.seed)
    try:
        return args.func(args)
    except (UsageError, IngestionError, ConfigurationError, OSError) as exc:
        print(f"spellnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, TrainingError, SpellnormError) as exc:
        print(f"spellnorm: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
