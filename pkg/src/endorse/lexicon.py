"""Opinion-lexicon sentiment scoring by simple word matching."""

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources

from .errors import ConflictError, EmptyEntity, EmptyLexicon

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OpinionLexicon:
    positive: frozenset
    negative: frozenset
    # words dropped because both lists claimed them
    conflicts: frozenset = field(default=frozenset(), compare=False)


@dataclass(frozen=True)
class SentimentScore:
    tweet_id: str
    score: int
    entity: str = ""


@dataclass(frozen=True)
class MeanSentiment:
    entity: str
    mean: float
    n: int


def _read_words(path):
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            word = line.strip()
            if not word or word[0] in ";#":
                continue
            if len(word.split()) != 1:
                logger.warning("%s:%d: skipping multi-word entry %r", path, line_no, word)
                continue
            words.add(word.lower())
    return words


def _resolve(pos, neg):
    both = pos & neg
    return OpinionLexicon(frozenset(pos - both), frozenset(neg - both), frozenset(both))


def load_lexicon(positive_path, negative_path) -> OpinionLexicon:
    """Read one-word-per-line positive and negative lists.

    A word found in both files is excluded from both; the dropped words
    are kept on ``lexicon.conflicts``.
    """
    lex = _resolve(_read_words(positive_path), _read_words(negative_path))
    if lex.conflicts:
        logger.info("excluded %d words present in both lexicon files", len(lex.conflicts))
    if not lex.positive:
        raise EmptyLexicon(f"positive lexicon is empty: {positive_path}")
    if not lex.negative:
        raise EmptyLexicon(f"negative lexicon is empty: {negative_path}")
    return lex


def default_lexicon() -> OpinionLexicon:
    data = resources.files("endorse") / "data"
    with resources.as_file(data / "positive-words.txt") as pos, \
            resources.as_file(data / "negative-words.txt") as neg:
        return load_lexicon(pos, neg)


def _check_words(words):
    for w in words:
        if not w or w != w.lower() or len(w.split()) != 1 or w != w.strip():
            raise ValueError(f"lexicon entries must be single lowercase words, got {w!r}")


def augment(lexicon: OpinionLexicon, extra_positive=(), extra_negative=()) -> OpinionLexicon:
    """Add domain terms to the lexicon.

    Raises ConflictError if the same word is offered for both sides in one
    call. A new word that clashes with the opposite existing list is
    excluded from both, as at load time.
    """
    extra_positive, extra_negative = set(extra_positive), set(extra_negative)
    _check_words(extra_positive | extra_negative)
    clash = extra_positive & extra_negative
    if clash:
        raise ConflictError(clash)
    pos = set(lexicon.positive) | extra_positive
    neg = set(lexicon.negative) | extra_negative
    out = _resolve(pos, neg)
    return OpinionLexicon(out.positive, out.negative, lexicon.conflicts | out.conflicts)


def score_tweet(tokens, lexicon: OpinionLexicon, tweet_id: str = "", entity: str = "") -> SentimentScore:
    """Positive matches minus negative matches, counting every occurrence."""
    pos, neg = lexicon.positive, lexicon.negative
    score = 0
    for tok in tokens:
        if tok in pos:
            score += 1
        elif tok in neg:
            score -= 1
    return SentimentScore(tweet_id, score, entity)


def mean_sentiment(scores, entity: str) -> MeanSentiment:
    scores = list(scores)
    if not scores:
        raise EmptyEntity(entity)
    return MeanSentiment(entity, sum(s.score for s in scores) / len(scores), len(scores))


def write_scores(scores, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tweet_id", "entity", "score"])
        for s in scores:
            w.writerow([s.tweet_id, s.entity, s.score])


def read_scores(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [SentimentScore(r["tweet_id"], int(r["score"]), r["entity"])
                for r in csv.DictReader(fh)]


def format_mean(mean: float) -> str:
    return f"{mean:.7f}"


def write_means(means, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["entity", "mean", "n"])
        for m in means:
            w.writerow([m.entity, format_mean(m.mean), m.n])


def read_means(path):
    """Read an ``entity,mean,n`` CSV; ``n`` may be blank when only means are known."""
    with open(path, newline="", encoding="utf-8") as fh:
        return {r["entity"]: MeanSentiment(r["entity"], float(r["mean"]), int(r["n"] or 0))
                for r in csv.DictReader(fh)}
