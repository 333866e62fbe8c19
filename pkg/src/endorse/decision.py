"""Endorsement verdicts from mean scores (Method 1) and rank majorities (Method 2)."""

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

POSITIVE = "Positive"
NOT_POSITIVE = "NotPositive"
LEXICON = "Lexicon"
NAIVE_BAYES = "NaiveBayes"
BOTH = "Both"
NONE = "None"
SUPPORTED, UNSUPPORTED = "supported", "unsupported"
DEFAULT_THRESHOLD = 0.2
DIMENSIONS = ("sa", "pa", "wc")


def classify_mean(mean: float, threshold: float = DEFAULT_THRESHOLD) -> str:
    """Positive strictly above the threshold; equality is NotPositive."""
    return POSITIVE if mean > threshold else NOT_POSITIVE


@dataclass(frozen=True)
class RankVector:
    sa: int
    pa: int
    wc: int
    tied: tuple = ()  # dimensions where both celebrities share rank 1

    def __post_init__(self):
        for d in DIMENSIONS:
            if getattr(self, d) not in (1, 2):
                raise ValueError(f"rank {d}={getattr(self, d)!r} must be 1 or 2")

    def as_tuple(self):
        return (self.sa, self.pa, self.wc)

    def __str__(self):
        return "_".join(str(r) for r in self.as_tuple())

    @classmethod
    def parse(cls, value):
        """Accept ``[1, 2, 2]`` or ``"1_2_2"``."""
        if isinstance(value, str):
            value = value.replace(" ", "").split("_")
        sa, pa, wc = (int(v) for v in value)
        return cls(sa, pa, wc)


@dataclass(frozen=True)
class EntityMetrics:
    """Per-celebrity inputs to rank derivation, each in [0, 1].

    sa: joy share of emotion-classified tweets; pa: positive / (positive +
    negative) polarity; wc: share of positive-lexicon words among the top
    word-cloud terms.
    """

    sa: float = 0.0
    pa: float = 0.0
    wc: float = 0.0


@dataclass(frozen=True)
class Recommendation:
    brand: str
    method: str
    verdicts: dict          # celebrity -> SentimentClass (Method 1) or "SA_PA_WC" ranks (Method 2)
    recommended: str        # a celebrity name, Both, or None
    q1: dict = field(default_factory=dict)  # celebrity -> supported / unsupported
    brand_verdict: Optional[str] = None
    tie: bool = False

    def to_json(self):
        obj = {"brand": self.brand, "method": self.method,
               "verdicts": dict(self.verdicts), "recommended": self.recommended}
        if self.brand_verdict is not None:
            obj["brand_verdict"] = self.brand_verdict
        if self.q1:
            obj["q1"] = dict(self.q1)
        obj["tie"] = self.tie
        return obj


def answer_q1(brand_class: Optional[str], celebrity_classes: dict) -> dict:
    """Mark each past pairing supported when the celebrity's sentiment is Positive.

    ``brand_class`` does not alter the per-celebrity answer; it is
    reported alongside it by the recommendation.
    """
    return {name: SUPPORTED if cls == POSITIVE else UNSUPPORTED
            for name, cls in celebrity_classes.items()}


def recommend_method1(brand_mean, celebrity_means, threshold: float = DEFAULT_THRESHOLD) -> Recommendation:
    celebrity_means = list(celebrity_means)
    if len(celebrity_means) != 2:
        raise ValueError("exactly two celebrity means are required")
    verdicts = {m.entity: classify_mean(m.mean, threshold) for m in celebrity_means}
    positive = [name for name, v in verdicts.items() if v == POSITIVE]
    if len(positive) == 2:
        rec = BOTH
    elif positive:
        rec = positive[0]
    else:
        rec = NONE
    brand_class = classify_mean(brand_mean.mean, threshold)
    return Recommendation(brand_mean.entity, LEXICON, verdicts, rec,
                          answer_q1(brand_class, verdicts), brand_class)


def derive_ranks(metrics_a: EntityMetrics, metrics_b: EntityMetrics):
    """Rank 1 to the strictly larger metric per dimension; ties give both 1.

    Returns ``(ranks_a, ranks_b)``; tied dimensions are listed in each
    vector's ``tied`` attribute.
    """
    ra, rb, tied = {}, {}, []
    for d in DIMENSIONS:
        a, b = getattr(metrics_a, d), getattr(metrics_b, d)
        if a == b:
            ra[d] = rb[d] = 1
            tied.append(d)
        else:
            ra[d], rb[d] = (1, 2) if a > b else (2, 1)
    tied = tuple(tied)
    return RankVector(**ra, tied=tied), RankVector(**rb, tied=tied)


def recommend_method2(rank_a: RankVector, rank_b: RankVector, names, brand: str = "") -> Recommendation:
    """Recommend the celebrity ranked first on at least two of SA, PA, WC."""
    name_a, name_b = names
    for d in DIMENSIONS:
        if {getattr(rank_a, d), getattr(rank_b, d)} not in ({1, 2}, {1}):
            raise ValueError(f"ranks on {d} for {name_a}/{name_b} are not a valid 1-vs-2 pair")
    wins_a = sum(r == 1 for r in rank_a.as_tuple())
    wins_b = sum(r == 1 for r in rank_b.as_tuple())
    a_ok, b_ok = wins_a >= 2, wins_b >= 2
    tie = any(getattr(rank_a, d) == getattr(rank_b, d) for d in DIMENSIONS)
    if a_ok and not b_ok:
        rec = name_a
    elif b_ok and not a_ok:
        rec = name_b
    else:
        rec, tie = NONE, True
    verdicts = {name_a: str(rank_a), name_b: str(rank_b)}
    return Recommendation(brand, NAIVE_BAYES, verdicts, rec, tie=tie)


def load_rank_overrides(path) -> dict:
    """Read ``{brand: {celebrity: [sa, pa, wc] | "sa_pa_wc"}}``."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    out = {}
    for brand, celebs in raw.items():
        if brand.startswith("_"):
            continue
        if len(celebs) != 2:
            raise ValueError(f"rank override for {brand!r} must name exactly two celebrities")
        out[brand] = {name: RankVector.parse(v) for name, v in celebs.items()}
    return out


def write_recommendations_csv(recs, path, celebrity_order=None):
    """Recommendation CSV with one row per celebrity.

    Columns: brand, brand_verdict, celebrity, answer_q1, answer_q2. The
    brand and recommendation cells are filled on the first celebrity row
    only.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "brand", "brand_verdict", "celebrity", "answer_q1", "answer_q2"])
        for rec in recs:
            names = (celebrity_order or {}).get(rec.brand, list(rec.verdicts))
            for i, name in enumerate(names):
                first = i == 0
                w.writerow([rec.method,
                            rec.brand if first else "",
                            (rec.brand_verdict or "") if first else "",
                            name, rec.verdicts[name],
                            rec.recommended if first else ""])
