"""Run configuration and the end-to-end pipeline stages.

Each stage reads and writes plain files so the CLI subcommands can be
chained by hand; ``run`` wires them together in memory.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import analytics, bayes, decision, lexicon, textprep
from .errors import ConfigError, EmptyEntity, InvalidAlpha, ProviderUnavailable, QuotaExceeded
from .ingest import CampaignSpec, Corpus, fetch, load_jsonl, make_provider, save_jsonl

logger = logging.getLogger(__name__)

REPORT_VERSION = 1


@dataclass
class RunConfig:
    campaigns: list = field(default_factory=list)
    tweets: Optional[Path] = None
    provider: Optional[dict] = None
    positive_lexicon: Optional[Path] = None
    negative_lexicon: Optional[Path] = None
    extra_positive: list = field(default_factory=list)
    extra_negative: list = field(default_factory=list)
    emotion_model: Optional[Path] = None
    polarity_model: Optional[Path] = None
    stopwords: Optional[Path] = None
    ranks: Optional[Path] = None
    out: Path = Path("out")
    alpha: float = 1.0
    top_n: int = 50
    min_count: int = 1
    neutral_band: float = bayes.TIE_TOLERANCE
    threshold: float = decision.DEFAULT_THRESHOLD
    svg: bool = True
    base_dir: Path = Path(".")

    PATH_KEYS = ("tweets", "positive_lexicon", "negative_lexicon", "emotion_model",
                 "polarity_model", "stopwords", "ranks", "out")

    @classmethod
    def from_file(cls, path, overrides=None) -> "RunConfig":
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        return cls.from_dict(raw, path.parent, overrides)

    @classmethod
    def from_dict(cls, raw, base_dir=".", overrides=None) -> "RunConfig":
        """Build a config; relative paths resolve against ``base_dir``.

        ``overrides`` (from command-line flags) win over file values; keys
        whose value is None are ignored.
        """
        base = Path(base_dir)
        raw = dict(raw)
        lex = raw.pop("lexicon", {}) or {}
        models = raw.pop("models", {}) or {}
        flat = {
            "positive_lexicon": lex.get("positive"),
            "negative_lexicon": lex.get("negative"),
            "extra_positive": lex.get("extra_positive", []),
            "extra_negative": lex.get("extra_negative", []),
            "emotion_model": models.get("emotion"),
            "polarity_model": models.get("polarity"),
        }
        campaigns_raw = raw.pop("campaigns", raw.pop("campaign", []))
        known = set(cls.__dataclass_fields__) - {"campaigns", "base_dir"}
        for key, value in raw.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            flat[key] = value
        for key in cls.PATH_KEYS:
            if flat.get(key) is not None:
                flat[key] = base / flat[key]
        # flag values are relative to the working directory, not the config
        for key, value in (overrides or {}).items():
            if value is not None:
                flat[key] = Path(value) if key in cls.PATH_KEYS else value
        cfg = cls(campaigns=_load_campaigns(campaigns_raw, base), base_dir=base,
                  **{k: v for k, v in flat.items() if v is not None})
        cfg.validate()
        return cfg

    def validate(self):
        if not self.alpha > 0:
            raise InvalidAlpha(self.alpha)
        if self.top_n < 1:
            raise ConfigError(f"top_n must be >= 1, got {self.top_n}")
        if self.neutral_band < 0:
            raise ConfigError("neutral_band must be >= 0")
        for key in self.PATH_KEYS:
            p = getattr(self, key)
            if key != "out" and p is not None and not Path(p).exists():
                raise ConfigError(f"{key} path does not exist: {p}")
        if (self.positive_lexicon is None) != (self.negative_lexicon is None):
            raise ConfigError("lexicon needs both 'positive' and 'negative' paths")
        names = [e.name for c in self.campaigns for e in c.entities]
        if len(names) != len(set(names)):
            raise ConfigError("entity names must be unique across campaigns")

    def entity_order(self, corpus=None):
        if self.campaigns:
            return [e.name for c in self.campaigns for e in c.entities]
        return list(corpus or [])


def _load_campaigns(raw, base):
    if isinstance(raw, (str, dict)):
        raw = [raw]
    out = []
    for item in raw:
        if isinstance(item, str):
            p = base / item
            try:
                with open(p, encoding="utf-8") as fh:
                    item = json.load(fh)
            except FileNotFoundError as exc:
                raise ConfigError(f"campaign file not found: {p}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{p}: {exc}") from exc
        items = item if isinstance(item, list) else [item]
        out.extend(CampaignSpec.from_json(obj) for obj in items)
    return out


# --- shared resources -----------------------------------------------------

def load_stopwords(path=None) -> frozenset:
    if path is None:
        with resources.as_file(resources.files("endorse") / "data" / "stopwords-en.txt") as p:
            return load_stopwords(p)
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            w = line.strip()
            if w and w[0] not in ";#":
                words.add(w.lower())
    return frozenset(words)


def build_lexicon(cfg: RunConfig):
    if cfg.positive_lexicon is not None:
        lex = lexicon.load_lexicon(cfg.positive_lexicon, cfg.negative_lexicon)
    else:
        lex = lexicon.default_lexicon()
    if cfg.extra_positive or cfg.extra_negative:
        lex = lexicon.augment(lex, cfg.extra_positive, cfg.extra_negative)
    return lex


def build_models(cfg: RunConfig):
    emo = bayes.load_model(cfg.emotion_model) if cfg.emotion_model else bayes.seed_model(bayes.EMOTION, cfg.alpha)
    pol = bayes.load_model(cfg.polarity_model) if cfg.polarity_model else bayes.seed_model(bayes.POLARITY, cfg.alpha)
    return emo, pol


# --- stages ---------------------------------------------------------------

def stage_fetch(cfg: RunConfig) -> Corpus:
    if not cfg.provider:
        raise ConfigError("no 'provider' section in config")
    if not cfg.campaigns:
        raise ConfigError("fetch needs at least one campaign")
    max_count = cfg.provider.get("max_count", 10000)
    if not isinstance(max_count, int) or max_count < 1:
        raise ConfigError(f"provider max_count must be a positive integer, got {max_count!r}")
    provider = make_provider(cfg.provider, cfg.base_dir)
    groups = {}
    for camp in cfg.campaigns:
        for ent in camp.entities:
            terms = list(ent.query_terms) or [ent.name]
            try:
                groups[ent.name] = fetch(provider, terms, max_count, entity=ent.name)
            except (ProviderUnavailable, QuotaExceeded) as exc:
                raise type(exc)(f"{ent.name}: {exc}") from exc
    return Corpus(groups)


def stage_clean(corpus: Corpus, cfg: RunConfig):
    """Clean the configured entities; an entity left empty is an error."""
    order = cfg.entity_order(corpus)
    subset = Corpus({name: corpus.get(name, ()) for name in order})
    clean, reports = textprep.clean_corpus(subset)
    return clean, reports


def stage_score(clean: dict, lex):
    scores, means = {}, []
    for entity, tweets in clean.items():
        scores[entity] = [lexicon.score_tweet(tw.tokens, lex, tw.id, entity) for tw in tweets]
        means.append(lexicon.mean_sentiment(scores[entity], entity))
    return scores, means


def stage_classify(clean: dict, emo_model, pol_model, neutral_band):
    emotions, polarities = {}, {}
    for entity, tweets in clean.items():
        emotions[entity] = [bayes.classify_emotion(tw, emo_model) for tw in tweets]
        polarities[entity] = [bayes.classify_polarity(tw, pol_model, neutral_band) for tw in tweets]
    return emotions, polarities


def entity_metrics(emo_dist, pol_dist, cloud, lex) -> decision.EntityMetrics:
    classified = emo_dist.classified
    sa = emo_dist.counts["joy"] / classified if classified else 0.0
    polar = pol_dist.counts[bayes.POSITIVE] + pol_dist.counts[bayes.NEGATIVE]
    pa = pol_dist.counts[bayes.POSITIVE] / polar if polar else 0.0
    terms = cloud.group(analytics.OVERALL)
    wc = sum(t in lex.positive for t, _ in terms) / len(terms) if terms else 0.0
    return decision.EntityMetrics(sa, pa, wc)


def stage_aggregate(clean, scores, emotions, polarities, lex, stopwords, cfg: RunConfig):
    aggs, metrics = {}, {}
    for entity, tweets in clean.items():
        emo = analytics.emotion_distribution(emotions[entity], entity)
        pol = analytics.polarity_distribution(polarities[entity], entity)
        hist = analytics.score_histogram(scores[entity], entity)
        cloud = analytics.wordcloud_data(tweets, emotions[entity], stopwords,
                                         cfg.top_n, cfg.min_count, entity)
        aggs[entity] = (emo, pol, hist, cloud)
        metrics[entity] = entity_metrics(emo, pol, cloud, lex)
    return aggs, metrics


def stage_decide(cfg: RunConfig, means: dict, metrics: Optional[dict], overrides: Optional[dict]):
    m1, m2 = [], []
    for camp in cfg.campaigns:
        brand = camp.brand.name
        names = [c.name for c in camp.celebrities]
        missing = [n for n in [brand] + names if n not in means]
        if missing:
            raise EmptyEntity(", ".join(missing))
        m1.append(decision.recommend_method1(means[brand], [means[n] for n in names], cfg.threshold))
        if overrides and brand in overrides:
            given = overrides[brand]
            if set(given) != set(names):
                raise ConfigError(f"rank override for {brand!r} names {sorted(given)}, "
                                  f"campaign has {names}")
            ra, rb = given[names[0]], given[names[1]]
        elif metrics is not None:
            ra, rb = decision.derive_ranks(metrics[names[0]], metrics[names[1]])
        else:
            raise ConfigError(f"no metrics or rank override for brand {brand!r}")
        m2.append(decision.recommend_method2(ra, rb, names, brand))
    return m1, m2


# --- stage file formats ---------------------------------------------------

def write_jsonl(rows, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def save_clean(clean, path):
    write_jsonl((tw.to_json() for tweets in clean.values() for tw in tweets), path)


def load_clean(path) -> dict:
    out = {}
    for obj in read_jsonl(path):
        tw = textprep.CleanTweet.from_json(obj)
        out.setdefault(tw.entity, []).append(tw)
    return {k: tuple(v) for k, v in out.items()}


def classified_rows(emotions, polarities):
    for entity in emotions:
        for er, pr in zip(emotions[entity], polarities[entity]):
            yield {"id": er.tweet_id, "entity": entity, "emotion": er.posterior,
                   "best_fit": er.best_fit,
                   "polarity": {"pos": pr.pos_posterior, "neg": pr.neg_posterior,
                                "ratio": pr.ratio, "label": pr.label}}


def load_classified(path):
    emotions, polarities = {}, {}
    for row in read_jsonl(path):
        ent = row["entity"]
        emotions.setdefault(ent, []).append(
            bayes.EmotionResult(row["id"], row["emotion"], row["best_fit"]))
        p = row["polarity"]
        polarities.setdefault(ent, []).append(
            bayes.PolarityResult(row["id"], p["pos"], p["neg"], p["ratio"], p["label"]))
    return emotions, polarities


def metrics_to_json(metrics):
    return {e: {"sa": m.sa, "pa": m.pa, "wc": m.wc} for e, m in metrics.items()}


def metrics_from_json(obj):
    return {e: decision.EntityMetrics(v["sa"], v["pa"], v["wc"]) for e, v in obj.items()}


def write_decisions(m1, m2, out: Path, cfg: RunConfig):
    order = {c.brand.name: [x.name for x in c.celebrities] for c in cfg.campaigns}
    write_json({"method1": [r.to_json() for r in m1], "method2": [r.to_json() for r in m2]},
               out / "recommendations.json")
    decision.write_recommendations_csv(m1, out / "method1.csv", order)
    decision.write_recommendations_csv(m2, out / "method2.csv", order)
    return [out / "recommendations.json", out / "method1.csv", out / "method2.csv"]


# --- full run -------------------------------------------------------------

def run(cfg: RunConfig, corpus: Optional[Corpus] = None) -> dict:
    """Execute clean, score, classify, aggregate and decide; write all artifacts.

    Returns the report dict also written to ``<out>/report.json``. Stage
    timings go to ``timing.json`` so the report stays byte-stable.
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    timing = {}
    t0 = time.perf_counter()

    def tick(stage):
        nonlocal t0
        now = time.perf_counter()
        timing[stage] = round(now - t0, 6)
        t0 = now

    if corpus is None:
        if cfg.tweets is None:
            raise ConfigError("no tweets file configured")
        corpus = load_jsonl(cfg.tweets)
    if not cfg.campaigns:
        raise ConfigError("run needs at least one campaign")
    tick("load")

    clean, reports = stage_clean(corpus, cfg)
    for rep in reports:
        if rep.after_count == 0:
            raise EmptyEntity(rep.entity)
    save_clean(clean, out / "clean.jsonl")
    textprep.write_cleaning_report(reports, out / "cleaning.csv")
    tick("clean")

    lex = build_lexicon(cfg)
    scores, means = stage_score(clean, lex)
    lexicon.write_scores([s for v in scores.values() for s in v], out / "scores.csv")
    lexicon.write_means(means, out / "means.csv")
    tick("score")

    emo_model, pol_model = build_models(cfg)
    emotions, polarities = stage_classify(clean, emo_model, pol_model, cfg.neutral_band)
    write_jsonl(classified_rows(emotions, polarities), out / "classified.jsonl")
    tick("classify")

    stopwords = load_stopwords(cfg.stopwords)
    aggs, metrics = stage_aggregate(clean, scores, emotions, polarities, lex, stopwords, cfg)
    plot_paths = analytics.emit_plots([a for group in aggs.values() for a in group],
                                      out / "plots", svg=cfg.svg)
    write_json(metrics_to_json(metrics), out / "metrics.json")
    tick("aggregate")

    overrides = decision.load_rank_overrides(cfg.ranks) if cfg.ranks else None
    m1, m2 = stage_decide(cfg, {m.entity: m for m in means}, metrics, overrides)
    decision_paths = write_decisions(m1, m2, out, cfg)
    tick("decide")

    artifacts = ["clean.jsonl", "cleaning.csv", "scores.csv", "means.csv", "classified.jsonl",
                 "metrics.json"]
    artifacts += [p.relative_to(out).as_posix() for p in plot_paths + decision_paths]
    report = {
        "report_version": REPORT_VERSION,
        "settings": {"alpha": cfg.alpha, "threshold": cfg.threshold,
                     "neutral_band": cfg.neutral_band, "top_n": cfg.top_n,
                     "min_count": cfg.min_count, "rank_override": cfg.ranks is not None},
        "campaigns": [c.to_json() for c in cfg.campaigns],
        "cleaning": [{"entity": r.entity, "before_count": r.before_count,
                      "after_count": r.after_count} for r in reports],
        "means": [{"entity": m.entity, "mean": m.mean, "mean_7dp": lexicon.format_mean(m.mean),
                   "n": m.n} for m in means],
        "histograms": [{"entity": a[2].entity, "mean": a[2].mean, "stddev": a[2].stddev,
                        "n": a[2].n} for a in aggs.values()],
        "emotion_distributions": [a[0].to_json() for a in aggs.values()],
        "polarity_distributions": [a[1].to_json() for a in aggs.values()],
        "metrics": metrics_to_json(metrics),
        "recommendations": {"method1": [r.to_json() for r in m1],
                            "method2": [r.to_json() for r in m2]},
        "stages": ["clean", "score", "classify", "aggregate", "decide"],
        "artifacts": sorted(artifacts),
    }
    write_json(report, out / "report.json")
    write_json(timing, out / "timing.json")
    return report


def fetch_to_file(cfg: RunConfig) -> Path:
    corpus = stage_fetch(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "tweets.jsonl"
    save_jsonl(corpus, path)
    return path
