"""Command-line entry point: ``endorse <subcommand> [options]``.

Stage subcommands exchange files inside the ``--out`` directory:

    fetch      -> tweets.jsonl
    clean      -> clean.jsonl, cleaning.csv
    score      -> scores.csv, means.csv
    classify   -> classified.jsonl
    aggregate  -> plots/, metrics.json
    decide     -> recommendations.json, method1.csv, method2.csv
    run        -> all of the above plus report.json

Exit codes: 0 ok, 2 config/usage error, 3 data error, 4 I/O error.
"""

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import analytics, bayes, decision, lexicon, pipeline, textprep
from .errors import ConfigError, EndorseError, InvalidAlpha
from .ingest import load_jsonl

logger = logging.getLogger("endorse")


def _common(p):
    p.add_argument("--config", type=Path, help="run configuration JSON")
    p.add_argument("--out", type=Path, help="output / working directory")
    p.add_argument("--threshold", type=float, help="Method 1 positive-mean threshold (default 0.2)")
    p.add_argument("--alpha", type=float, help="Naive Bayes smoothing constant (default 1)")
    p.add_argument("--top-n", type=int, dest="top_n", help="word-cloud terms per group")
    p.add_argument("--neutral-band", type=float, dest="neutral_band",
                   help="|ratio - 1| at or below this is neutral polarity")
    p.add_argument("--ranks", type=Path, help="rank override JSON for Method 2")
    p.add_argument("--seed", type=int, default=0, help="reserved; only used for holdout splits")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="endorse", description="Celebrity endorsement opinion mining.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("fetch", "collect tweets for every campaign entity"),
        ("clean", "normalise tweets and write cleaning counts"),
        ("score", "lexicon scores and per-entity means (Method 1)"),
        ("classify", "Naive Bayes emotion and polarity labels (Method 2)"),
        ("aggregate", "distributions, histograms, word clouds and plots"),
        ("decide", "recommendations under both methods"),
        ("run", "full pipeline"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "decide":
            p.add_argument("--means", type=Path, help="means CSV (default <out>/means.csv)")
            p.add_argument("--metrics", type=Path, help="metrics JSON (default <out>/metrics.json)")

    p = sub.add_parser("train", help="train a Naive Bayes model from labelled JSONL")
    p.add_argument("training", type=Path, help='JSONL lines {"tokens": [...], "label": "..."}')
    p.add_argument("--classes", help="comma-separated labels (default: labels in the data)")
    p.add_argument("--kind", choices=[bayes.EMOTION, bayes.POLARITY])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--holdout", type=float, default=0.0,
                   help="fraction held out per class for an accuracy report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-out", "--out", dest="model_out", type=Path, required=True)
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _config(args) -> pipeline.RunConfig:
    overrides = {k: getattr(args, k, None) for k in
                 ("out", "threshold", "alpha", "top_n", "neutral_band", "ranks")}
    if args.config is None:
        return pipeline.RunConfig.from_dict({}, Path.cwd(), overrides)
    return pipeline.RunConfig.from_file(args.config, overrides)


def _need(path: Path, what: str) -> Path:
    if not path.exists():
        raise ConfigError(f"missing {what}: {path} (run the previous stage first)")
    return path


def cmd_fetch(args):
    cfg = _config(args)
    path = pipeline.fetch_to_file(cfg)
    print(f"wrote {path}")


def cmd_clean(args):
    cfg = _config(args)
    src = cfg.tweets or _need(Path(cfg.out) / "tweets.jsonl", "tweets file")
    clean, reports = pipeline.stage_clean(load_jsonl(src), cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    pipeline.save_clean(clean, out / "clean.jsonl")
    textprep.write_cleaning_report(reports, out / "cleaning.csv")
    for r in reports:
        print(f"{r.entity}: {r.before_count} -> {r.after_count}")


def cmd_score(args):
    cfg = _config(args)
    out = Path(cfg.out)
    clean = pipeline.load_clean(_need(out / "clean.jsonl", "clean tweets"))
    scores, means = pipeline.stage_score(clean, pipeline.build_lexicon(cfg))
    lexicon.write_scores([s for v in scores.values() for s in v], out / "scores.csv")
    lexicon.write_means(means, out / "means.csv")
    for m in means:
        print(f"{m.entity}: {lexicon.format_mean(m.mean)} (n={m.n})")


def cmd_classify(args):
    cfg = _config(args)
    out = Path(cfg.out)
    clean = pipeline.load_clean(_need(out / "clean.jsonl", "clean tweets"))
    emo, pol = pipeline.build_models(cfg)
    emotions, polarities = pipeline.stage_classify(clean, emo, pol, cfg.neutral_band)
    pipeline.write_jsonl(pipeline.classified_rows(emotions, polarities), out / "classified.jsonl")
    print(f"classified {sum(len(v) for v in emotions.values())} tweets")


def cmd_aggregate(args):
    cfg = _config(args)
    out = Path(cfg.out)
    clean = pipeline.load_clean(_need(out / "clean.jsonl", "clean tweets"))
    all_scores = lexicon.read_scores(_need(out / "scores.csv", "scores"))
    scores = {e: [s for s in all_scores if s.entity == e] for e in clean}
    emotions, polarities = pipeline.load_classified(_need(out / "classified.jsonl", "classifications"))
    lex = pipeline.build_lexicon(cfg)
    aggs, metrics = pipeline.stage_aggregate(clean, scores, emotions, polarities, lex,
                                             pipeline.load_stopwords(cfg.stopwords), cfg)
    paths = analytics.emit_plots([a for g in aggs.values() for a in g], out / "plots", svg=cfg.svg)
    pipeline.write_json(pipeline.metrics_to_json(metrics), out / "metrics.json")
    print(f"wrote {len(paths)} plot files and metrics.json")


def cmd_decide(args):
    cfg = _config(args)
    if not cfg.campaigns:
        raise ConfigError("decide needs campaigns in the config")
    out = Path(cfg.out)
    means = lexicon.read_means(_need(args.means or out / "means.csv", "means CSV"))
    metrics_path = args.metrics or out / "metrics.json"
    metrics = None
    if metrics_path.exists():
        with open(metrics_path, encoding="utf-8") as fh:
            metrics = pipeline.metrics_from_json(json.load(fh))
    overrides = decision.load_rank_overrides(cfg.ranks) if cfg.ranks else None
    m1, m2 = pipeline.stage_decide(cfg, means, metrics, overrides)
    out.mkdir(parents=True, exist_ok=True)
    pipeline.write_decisions(m1, m2, out, cfg)
    _print_recommendations(m1, m2)


def _print_recommendations(m1, m2):
    for r1, r2 in zip(m1, m2):
        verdicts = ", ".join(f"{k} {v}" for k, v in r1.verdicts.items())
        ranks = ", ".join(f"{k} {v}" for k, v in r2.verdicts.items())
        print(f"{r1.brand} [{r1.brand_verdict}]  M1: {verdicts} -> {r1.recommended}  |  "
              f"M2: {ranks} -> {r2.recommended}")


def cmd_run(args):
    cfg = _config(args)
    report = pipeline.run(cfg)
    recs = report["recommendations"]
    for r1, r2 in zip(recs["method1"], recs["method2"]):
        print(f"{r1['brand']}: Method 1 -> {r1['recommended']}; Method 2 -> {r2['recommended']}")
    print(f"report: {Path(cfg.out) / 'report.json'}")


def _stratified_split(docs, holdout, seed):
    rng = random.Random(seed)
    by_label = {}
    for d in docs:
        by_label.setdefault(d.label, []).append(d)
    train, test = [], []
    for label in sorted(by_label):
        group = list(by_label[label])
        rng.shuffle(group)
        k = min(int(round(holdout * len(group))), len(group) - 1)
        test += group[:k]
        train += group[k:]
    return train, test


def cmd_train(args):
    if not (args.alpha > 0):
        raise InvalidAlpha(args.alpha)
    if not 0 <= args.holdout < 1:
        raise ConfigError("--holdout must be in [0, 1)")
    docs = bayes.read_training_jsonl(args.training)
    if args.classes:
        classes = tuple(c.strip() for c in args.classes.split(",") if c.strip())
    else:
        classes = tuple(sorted({d.label for d in docs}))
    kind = args.kind
    if kind is None:
        if set(classes) == set(bayes.EMOTIONS):
            kind = bayes.EMOTION
        elif set(classes) == set(bayes.POLARITY_LABELS):
            kind = bayes.POLARITY
        else:
            raise ConfigError("cannot infer --kind from the class labels")
    train_docs, test_docs = _stratified_split(docs, args.holdout, args.seed) if args.holdout else (docs, [])
    model = bayes.train(train_docs, classes, args.alpha, kind)
    if test_docs:
        hits = 0
        for d in test_docs:
            post = bayes.classify(d.tokens, model)
            hits += max(model.classes, key=post.__getitem__) == d.label
        print(f"holdout accuracy: {hits / len(test_docs):.4f} ({hits}/{len(test_docs)})")
    bayes.save_model(model, args.model_out)
    print(f"wrote {kind} model with {len(model.classes)} classes, "
          f"{len(model.vocab)} terms to {args.model_out}")


COMMANDS = {"fetch": cmd_fetch, "clean": cmd_clean, "score": cmd_score, "classify": cmd_classify,
            "aggregate": cmd_aggregate, "decide": cmd_decide, "run": cmd_run, "train": cmd_train}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    stage = args.command
    try:
        COMMANDS[stage](args)
    except EndorseError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error [{stage}]: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
