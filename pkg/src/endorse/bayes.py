"""Multinomial Naive Bayes for emotion and polarity classification.

Token likelihoods use additive smoothing with one extra pseudo-token per
class that absorbs every token unseen in training::

    P(t | c) = (count(t, c) + alpha) / (tokens_in(c) + alpha * (|V| + 1))

so each class's likelihoods over the vocabulary plus the unseen slot sum
to one. Everything is kept in log space.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import EmptyClass, InvalidAlpha, MalformedLine, VersionMismatch

EMOTION = "Emotion"
POLARITY = "Polarity"
EMOTIONS = ("anger", "disgust", "fear", "joy", "sadness", "surprise")
UNCLASSIFIED = "unclassified"
POSITIVE, NEGATIVE, NEUTRAL = "positive", "negative", "neutral"
POLARITY_LABELS = (POSITIVE, NEGATIVE)

MODEL_VERSION = 1
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LabeledDoc:
    tokens: tuple
    label: str


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    classes: tuple
    log_prior: np.ndarray       # (n_classes,)
    vocab: tuple
    log_likelihood: np.ndarray  # (n_classes, len(vocab) + 1); last column is the unseen slot
    alpha: float
    kind: str = EMOTION

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.vocab)})
        # token-major copy for fast row gathers
        object.__setattr__(self, "_by_token", np.ascontiguousarray(self.log_likelihood.T))

    def __eq__(self, other):
        if not isinstance(other, NaiveBayesModel):
            return NotImplemented
        return (self.classes == other.classes and self.vocab == other.vocab
                and self.alpha == other.alpha and self.kind == other.kind
                and np.array_equal(self.log_prior, other.log_prior)
                and np.array_equal(self.log_likelihood, other.log_likelihood))

    __hash__ = None

    def token_index(self, tokens):
        unseen = len(self.vocab)
        return [self._index.get(t, unseen) for t in tokens]

    def log_joint(self, tokens) -> np.ndarray:
        idx = self.token_index(tokens)
        if not idx:
            return self.log_prior.copy()
        return self.log_prior + self._by_token[idx].sum(axis=0)


def train(docs, classes, alpha: float = 1.0, kind: str = EMOTION) -> NaiveBayesModel:
    """Fit priors and smoothed token likelihoods by counting."""
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
        raise InvalidAlpha(alpha)
    classes = tuple(classes)
    if not classes:
        raise ValueError("at least one class is required")
    docs = list(docs)
    pos = {c: i for i, c in enumerate(classes)}
    doc_counts = Counter()
    token_counts = [Counter() for _ in classes]
    vocab = {}
    for doc in docs:
        if doc.label not in pos:
            raise ValueError(f"label {doc.label!r} is not one of {classes}")
        doc_counts[doc.label] += 1
        token_counts[pos[doc.label]].update(doc.tokens)
        for t in doc.tokens:
            vocab.setdefault(t, len(vocab))
    for c in classes:
        if doc_counts[c] == 0:
            raise EmptyClass(c)

    counts = np.zeros((len(classes), len(vocab) + 1))
    for ci, tc in enumerate(token_counts):
        for t, n in tc.items():
            counts[ci, vocab[t]] = n
    totals = counts.sum(axis=1, keepdims=True)
    alpha = float(alpha)
    log_lik = np.log(counts + alpha) - np.log(totals + alpha * (len(vocab) + 1))
    n_docs = len(docs)
    log_prior = np.log(np.array([doc_counts[c] / n_docs for c in classes]))
    return NaiveBayesModel(classes, log_prior, tuple(vocab), log_lik, alpha, kind)


def classify(tokens, model: NaiveBayesModel) -> dict:
    """Posterior over the model's classes, normalised to sum to one."""
    joint = model.log_joint(tokens)
    p = np.exp(joint - joint.max())
    p /= p.sum()
    return dict(zip(model.classes, p.tolist()))


@dataclass(frozen=True)
class EmotionResult:
    tweet_id: str
    posterior: dict
    best_fit: str


@dataclass(frozen=True)
class PolarityResult:
    tweet_id: str
    pos_posterior: float
    neg_posterior: float
    ratio: float
    label: str


def classify_emotion(tweet, model: NaiveBayesModel, tie_tolerance: float = TIE_TOLERANCE) -> EmotionResult:
    if model.kind != EMOTION or set(model.classes) != set(EMOTIONS):
        raise ValueError("classify_emotion needs an Emotion model over the six basic emotions")
    post = classify(tweet.tokens, model)
    ranked = sorted(post.items(), key=lambda kv: -kv[1])
    if ranked[0][1] - ranked[1][1] < tie_tolerance:
        best = UNCLASSIFIED
    else:
        best = ranked[0][0]
    return EmotionResult(tweet.id, {e: post[e] for e in EMOTIONS}, best)


def polarity_label(ratio: float, neutral_band: float = TIE_TOLERANCE) -> str:
    if abs(ratio - 1.0) <= neutral_band:
        return NEUTRAL
    return POSITIVE if ratio > 1.0 else NEGATIVE


def classify_polarity(tweet, model: NaiveBayesModel, neutral_band: float = TIE_TOLERANCE) -> PolarityResult:
    if model.kind != POLARITY or set(model.classes) != set(POLARITY_LABELS):
        raise ValueError("classify_polarity needs a Polarity model with labels positive/negative")
    joint = model.log_joint(tweet.tokens)
    i_pos, i_neg = model.classes.index(POSITIVE), model.classes.index(NEGATIVE)
    post = classify(tweet.tokens, model)
    # ratio from the log difference stays finite when a posterior underflows
    ratio = math.exp(min(joint[i_pos] - joint[i_neg], 700.0))
    return PolarityResult(tweet.id, post[POSITIVE], post[NEGATIVE], ratio,
                          polarity_label(ratio, neutral_band))


def save_model(model: NaiveBayesModel, path) -> None:
    obj = {
        "version": MODEL_VERSION,
        "kind": model.kind,
        "classes": list(model.classes),
        "log_priors": model.log_prior.tolist(),
        "vocab": list(model.vocab),
        "log_likelihoods": model.log_likelihood.tolist(),
        "alpha": model.alpha,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False)
        fh.write("\n")


def load_model(path) -> NaiveBayesModel:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OSError(f"truncated or corrupt model file {path}: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("version") != MODEL_VERSION:
        found = obj.get("version") if isinstance(obj, dict) else None
        raise VersionMismatch(f"{path}: model version {found!r}, expected {MODEL_VERSION}")
    try:
        model = NaiveBayesModel(
            tuple(obj["classes"]),
            np.array(obj["log_priors"], dtype=float),
            tuple(obj["vocab"]),
            np.array(obj["log_likelihoods"], dtype=float).reshape(len(obj["classes"]), -1),
            float(obj["alpha"]),
            obj["kind"],
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise OSError(f"incomplete model file {path}: {exc}") from exc
    if model.log_likelihood.shape[1] != len(model.vocab) + 1:
        raise OSError(f"{path}: likelihood rows do not match vocabulary size")
    return model


def read_training_jsonl(path) -> list:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                docs.append(LabeledDoc(tuple(obj["tokens"]), obj["label"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedLine(line_no, str(exc)) from exc
    return docs


def seed_model(kind: str, alpha: float = 1.0) -> NaiveBayesModel:
    """Train on the bundled seed word lists."""
    name, classes = {
        EMOTION: ("emotion_seed.jsonl", EMOTIONS),
        POLARITY: ("polarity_seed.jsonl", POLARITY_LABELS),
    }[kind]
    with resources.as_file(resources.files("endorse") / "data" / name) as p:
        return train(read_training_jsonl(p), classes, alpha, kind)
