"""Per-entity aggregates and their JSON / CSV / SVG renderings."""

import csv
import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .bayes import EMOTIONS, NEGATIVE, NEUTRAL, POSITIVE, UNCLASSIFIED
from .errors import EmptyEntity

OVERALL = "Overall"
EMOTION_BUCKETS = EMOTIONS + (UNCLASSIFIED,)
POLARITY_BUCKETS = (POSITIVE, NEGATIVE, NEUTRAL)


@dataclass(frozen=True)
class EmotionDistribution:
    entity: str
    counts: dict
    total: int

    kind = "emotion"

    def rows(self):
        return [[self.entity, k, self.counts[k]] for k in EMOTION_BUCKETS]

    header = ("entity", "class", "count")

    def to_json(self):
        return {"entity": self.entity, "counts": dict(self.counts), "total": self.total}

    def bars(self):
        return [(k, self.counts[k]) for k in EMOTION_BUCKETS]

    @property
    def classified(self):
        return self.total - self.counts[UNCLASSIFIED]


@dataclass(frozen=True)
class PolarityDistribution:
    entity: str
    counts: dict
    total: int

    kind = "polarity"
    header = ("entity", "label", "count")

    def rows(self):
        return [[self.entity, k, self.counts[k]] for k in POLARITY_BUCKETS]

    def to_json(self):
        return {"entity": self.entity, "counts": dict(self.counts), "total": self.total}

    def bars(self):
        return [(k, self.counts[k]) for k in POLARITY_BUCKETS]


@dataclass(frozen=True)
class ScoreHistogram:
    entity: str
    bins: dict
    mean: float
    stddev: float
    n: int

    kind = "histogram"
    header = ("entity", "score", "count")

    def rows(self):
        return [[self.entity, s, c] for s, c in sorted(self.bins.items())]

    def to_json(self):
        return {"entity": self.entity, "bins": {str(s): c for s, c in sorted(self.bins.items())},
                "mean": self.mean, "stddev": self.stddev, "n": self.n}

    def bars(self):
        lo, hi = min(self.bins), max(self.bins)
        return [(str(s), self.bins.get(s, 0)) for s in range(lo, hi + 1)]


@dataclass(frozen=True)
class WordCloudData:
    entity: str
    entries: tuple  # (term, weight, group)

    kind = "cloud"
    header = ("entity", "group", "term", "weight")

    def rows(self):
        return [[self.entity, g, t, w] for t, w, g in self.entries]

    def to_json(self):
        return {"entity": self.entity,
                "entries": [{"term": t, "weight": w, "group": g} for t, w, g in self.entries]}

    def group(self, name=OVERALL):
        return [(t, w) for t, w, g in self.entries if g == name]


def emotion_distribution(results, entity) -> EmotionDistribution:
    counts = dict.fromkeys(EMOTION_BUCKETS, 0)
    for r in results:
        counts[r.best_fit] += 1
    return EmotionDistribution(entity, counts, sum(counts.values()))


def polarity_distribution(results, entity) -> PolarityDistribution:
    counts = dict.fromkeys(POLARITY_BUCKETS, 0)
    for r in results:
        counts[r.label] += 1
    return PolarityDistribution(entity, counts, sum(counts.values()))


def score_histogram(scores, entity) -> ScoreHistogram:
    """Integer-binned scores plus mean and population stddev for a normal overlay."""
    values = [s.score for s in scores]
    if not values:
        raise EmptyEntity(entity)
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return ScoreHistogram(entity, dict(sorted(Counter(values).items())), mean, math.sqrt(var), n)


def _ranked(counter, top_n, min_count):
    items = [(t, c) for t, c in counter.items() if c >= min_count]
    items.sort(key=lambda tc: (-tc[1], tc[0]))
    return items[:top_n]


def wordcloud_data(tweets, emotion_results=None, stopwords=frozenset(),
                   top_n: int = 100, min_count: int = 1, entity: str = "") -> WordCloudData:
    """Term frequencies over non-stop-word tokens.

    The Overall group is always present. With ``emotion_results`` (aligned
    with ``tweets`` by tweet id) each of the six emotions also gets a group
    built from tweets whose best fit is that emotion; unclassified tweets
    count only towards Overall. Each group is cut to ``top_n`` terms,
    ties broken alphabetically.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    tweets = list(tweets)
    if not entity and tweets:
        entity = tweets[0].entity
    overall = Counter()
    by_group = {e: Counter() for e in EMOTIONS}
    best = {r.tweet_id: r.best_fit for r in emotion_results} if emotion_results is not None else None
    for tw in tweets:
        terms = [t for t in tw.tokens if t not in stopwords]
        overall.update(terms)
        if best is not None and best.get(tw.id) in by_group:
            by_group[best[tw.id]].update(terms)

    entries = [(t, c, OVERALL) for t, c in _ranked(overall, top_n, min_count)]
    if best is not None:
        for emo in EMOTIONS:
            entries.extend((t, c, emo) for t, c in _ranked(by_group[emo], top_n, min_count))
    return WordCloudData(entity, tuple(entries))


def slug(name: str) -> str:
    return re.sub(r"[^\w.-]+", "_", name).strip("_") or "entity"


# --- SVG rendering -------------------------------------------------------

_W, _H, _PAD = 480, 300, 40


def _fmt(x):
    return f"{x:.2f}"


def _svg(body, title, width=_W, height=_H):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>\n'
        f'<text x="{width // 2}" y="20" font-family="sans-serif" font-size="14" '
        f'text-anchor="middle">{escape(title)}</text>\n'
        + "".join(body) + "</svg>\n"
    )


def _bar_chart(bars, title, overlay=None):
    n = max(len(bars), 1)
    peak = max([c for _, c in bars] + [1])
    plot_w, plot_h = _W - 2 * _PAD, _H - 2 * _PAD
    slot = plot_w / n
    base = _H - _PAD
    body = [f'<line x1="{_PAD}" y1="{base}" x2="{_W - _PAD}" y2="{base}" stroke="#333"/>\n']
    for i, (label, count) in enumerate(bars):
        h = plot_h * count / peak
        x = _PAD + i * slot + slot * 0.1
        body.append(f'<rect x="{_fmt(x)}" y="{_fmt(base - h)}" width="{_fmt(slot * 0.8)}" '
                    f'height="{_fmt(h)}" fill="#4a7ab5"/>\n')
        cx = _fmt(_PAD + (i + 0.5) * slot)
        body.append(f'<text x="{cx}" y="{base + 14}" font-family="sans-serif" font-size="10" '
                    f'text-anchor="middle">{escape(str(label))}</text>\n')
        body.append(f'<text x="{cx}" y="{_fmt(base - h - 3)}" font-family="sans-serif" '
                    f'font-size="10" text-anchor="middle">{count}</text>\n')
    if overlay:
        pts = " ".join(f"{_fmt(_PAD + x * plot_w)},{_fmt(base - y * plot_h)}" for x, y in overlay)
        body.append(f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="1.5"/>\n')
    return _svg(body, title)


def _normal_overlay(hist: ScoreHistogram, steps=60):
    """Normal density scaled to expected bin counts, in unit plot coordinates."""
    lo, hi = min(hist.bins), max(hist.bins)
    peak = max(hist.bins.values())
    if hist.stddev == 0:
        return None
    n_slots = hi - lo + 1
    pts = []
    for k in range(steps + 1):
        u = k / steps
        score = lo - 0.5 + u * n_slots
        z = (score - hist.mean) / hist.stddev
        density = math.exp(-0.5 * z * z) / (hist.stddev * math.sqrt(2 * math.pi))
        pts.append((u, min(hist.n * density / peak, 1.2)))
    return pts


def _cloud_svg(cloud: WordCloudData):
    rows = cloud.group(OVERALL)
    height = max(_H, 40 + 22 * len(rows))
    peak = max([w for _, w in rows] + [1])
    body = []
    for i, (term, weight) in enumerate(rows):
        size = 10 + 18 * weight / peak
        body.append(f'<text x="{_PAD}" y="{44 + 22 * i}" font-family="sans-serif" '
                    f'font-size="{_fmt(size)}">{escape(term)} ({weight})</text>\n')
    return _svg(body, f"Top terms: {cloud.entity}", height=height)


def render_svg(agg) -> str:
    if isinstance(agg, WordCloudData):
        return _cloud_svg(agg)
    if isinstance(agg, ScoreHistogram):
        return _bar_chart(agg.bars(), f"Sentiment scores: {agg.entity}", _normal_overlay(agg))
    if isinstance(agg, EmotionDistribution):
        return _bar_chart(agg.bars(), f"Emotions: {agg.entity}")
    return _bar_chart(agg.bars(), f"Polarity: {agg.entity}")


def emit_plots(aggregates, out_dir, svg: bool = True) -> list:
    """Write ``<kind>_<entity>.json/.csv[/.svg]`` for each aggregate."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for agg in aggregates:
        stem = out / f"{agg.kind}_{slug(agg.entity)}"
        jpath = stem.with_suffix(".json")
        with open(jpath, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(agg.to_json(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")
        cpath = stem.with_suffix(".csv")
        with open(cpath, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(agg.header)
            w.writerows(agg.rows())
        paths += [jpath, cpath]
        if svg:
            spath = stem.with_suffix(".svg")
            with open(spath, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(render_svg(agg))
            paths.append(spath)
    return paths
