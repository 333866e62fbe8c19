"""Tweet normalisation: the ordered cleaning rules, tokenisation, dedup."""

import csv
import re
import unicodedata
from dataclasses import dataclass

from .ingest import Corpus

URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
# "RT @user:" anywhere, then a bare leading "RT"
RETWEET_RE = re.compile(r"\bRT\s+@\w+:?")
LEADING_RT_RE = re.compile(r"^\s*RT\b")
HASHTAG_RE = re.compile(r"#\w+")
MENTION_RE = re.compile(r"@\w+")


@dataclass(frozen=True)
class CleanTweet:
    id: str
    entity: str
    text_clean: str
    tokens: tuple

    def to_json(self):
        return {"id": self.id, "entity": self.entity,
                "text_clean": self.text_clean, "tokens": list(self.tokens)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["id"], obj["entity"], obj["text_clean"], tuple(obj["tokens"]))


@dataclass(frozen=True)
class CleaningReport:
    entity: str
    before_count: int
    after_count: int


def _is_noise(ch):
    cat = unicodedata.category(ch)
    if cat[0] in "PS":
        return True
    # control/format chars; whitespace controls survive for the spacing rule
    return cat[0] == "C" and not ch.isspace()


def _is_variation_selector(ch):
    cp = ord(ch)
    return 0xFE00 <= cp <= 0xFE0F or 0xE0100 <= cp <= 0xE01EF


def _strip_punctuation(text):
    # combining marks survive only when attached to a letter (or mark) that
    # survives; this also drops keycap and emoji-presentation residue
    out = []
    for ch in text:
        if _is_noise(ch) or _is_variation_selector(ch):
            continue
        if unicodedata.category(ch)[0] == "M":
            if not out or unicodedata.category(out[-1])[0] not in "LM":
                continue
        out.append(ch)
    return "".join(out)


def _strip_digits(text):
    return "".join(ch for ch in text if unicodedata.category(ch)[0] != "N")


def clean_text(raw: str) -> str:
    """Normalise one tweet.

    Rules, in order: drop URLs; drop retweet markers; drop whole hashtag
    and @-mention tokens; delete punctuation, symbols (emoji included) and
    control characters; delete digits; lowercase; collapse whitespace.
    """
    text = URL_RE.sub(" ", raw)
    text = RETWEET_RE.sub(" ", text)
    text = LEADING_RT_RE.sub(" ", text)
    text = HASHTAG_RE.sub(" ", text)
    text = MENTION_RE.sub(" ", text)
    text = _strip_punctuation(text)
    text = _strip_digits(text)
    text = text.lower()
    return " ".join(text.split())


def tokenize(text_clean: str) -> list:
    return [tok for tok in text_clean.split(" ") if tok]


def clean_corpus(corpus: Corpus):
    """Clean every entity's tweets.

    Drops raw "NA" tweets, tweets that clean to nothing, and repeated
    cleaned texts (first occurrence wins). Returns ``(clean, reports)``
    where ``clean`` maps entity to a tuple of CleanTweet.
    """
    clean, reports = {}, []
    for entity, tweets in corpus.items():
        seen = set()
        kept = []
        for tw in tweets:
            if tw.text.strip() == "NA":
                continue
            text = clean_text(tw.text)
            if not text or text in seen:
                continue
            seen.add(text)
            kept.append(CleanTweet(tw.id, entity, text, tuple(tokenize(text))))
        clean[entity] = tuple(kept)
        reports.append(CleaningReport(entity, len(tweets), len(kept)))
    return clean, reports


def write_cleaning_report(reports, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["entity", "before_count", "after_count"])
        for r in reports:
            w.writerow([r.entity, r.before_count, r.after_count])
