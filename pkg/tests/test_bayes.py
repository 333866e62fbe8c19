import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from endorse import bayes
from endorse.bayes import LabeledDoc, classify, train
from endorse.errors import EmptyClass, InvalidAlpha, VersionMismatch
from endorse.textprep import CleanTweet

from oracles import nb_posterior_oracle


def docs_of(pairs):
    return [LabeledDoc(tuple(toks), lab) for toks, lab in pairs]


def tweet(tokens, id_="t"):
    return CleanTweet(id_, "E", " ".join(tokens), tuple(tokens))


TOY = [(["good"], "A"), (["bad"], "B")]


def test_train_toy_values():
    m = train(docs_of(TOY), ["A", "B"], alpha=1)
    assert math.exp(m.log_prior[0]) == pytest.approx(0.5, abs=1e-12)
    good = m.vocab.index("good")
    # (1 + 1) / (1 + 1 * 3)
    assert math.exp(m.log_likelihood[0, good]) == pytest.approx(0.5, abs=1e-12)
    # unseen slot: 1 / 4
    assert math.exp(m.log_likelihood[0, -1]) == pytest.approx(0.25, abs=1e-12)


def test_single_class_prior_is_one():
    m = train(docs_of([(["x"], "A")]), ["A"])
    assert m.log_prior[0] == 0.0
    assert classify(["x", "y"], m) == {"A": 1.0}


def test_empty_class_rejected():
    with pytest.raises(EmptyClass) as exc:
        train(docs_of(TOY), ["A", "B", "C"])
    assert exc.value.label == "C"


@pytest.mark.parametrize("alpha", [0, -1, float("nan"), float("inf")])
def test_invalid_alpha(alpha):
    with pytest.raises(InvalidAlpha):
        train(docs_of(TOY), ["A", "B"], alpha=alpha)


def test_unknown_label_rejected():
    with pytest.raises(ValueError):
        train(docs_of([(["x"], "Z")]), ["A"])


def test_empty_tokens_give_prior():
    m = train(docs_of([(["a"], "A"), (["b"], "A"), (["c"], "B")]), ["A", "B"])
    post = classify([], m)
    assert post["A"] == pytest.approx(2 / 3, abs=1e-12)


def test_toy_posterior_matches_enumeration():
    m = train(docs_of(TOY), ["A", "B"], alpha=1)
    expected = nb_posterior_oracle(TOY, ["A", "B"], 1, ["good"])
    # by hand: 0.5*0.5 / (0.5*0.5 + 0.5*0.25) = 2/3
    assert expected["A"] == pytest.approx(2 / 3)
    assert classify(["good"], m)["A"] == pytest.approx(float(expected["A"]), abs=1e-9)


def test_uniform_model_gives_uniform_posterior():
    m = train(docs_of([(["x"], "A"), (["y"], "B"), (["z"], "C")]), ["A", "B", "C"])
    post = classify(["q", "w", "e"], m)
    assert all(p == pytest.approx(1 / 3, abs=1e-12) for p in post.values())


def test_model_distributions_normalised():
    m = train(docs_of([(["a", "b", "a"], "A"), (["c"], "B"), (["a", "d"], "B")]), ["A", "B"], alpha=0.5)
    assert np.exp(m.log_prior).sum() == pytest.approx(1, abs=1e-9)
    for row in np.exp(m.log_likelihood):
        assert row.sum() == pytest.approx(1, abs=1e-9)
    assert np.isfinite(m.log_likelihood).all()


def test_long_document_does_not_underflow():
    m = train(docs_of([(["a"], "A"), (["b"], "B")]), ["A", "B"])
    post = classify(["a"] * 5000 + ["b"] * 4999, m)
    assert sum(post.values()) == pytest.approx(1, abs=1e-9)
    assert post["A"] > post["B"]
    assert all(math.isfinite(p) for p in post.values())


# -- emotion / polarity ----------------------------------------------------

def emotion_model():
    pairs = [(["yay", "smile"], "joy")] + [([f"w_{e}"], e) for e in bayes.EMOTIONS if e != "joy"]
    return train(docs_of(pairs), bayes.EMOTIONS, kind=bayes.EMOTION), pairs


def test_emotion_joy_wins():
    m, pairs = emotion_model()
    res = bayes.classify_emotion(tweet(["yay", "today"]), m)
    oracle = nb_posterior_oracle(pairs, bayes.EMOTIONS, 1, ["yay", "today"])
    assert max(oracle, key=oracle.get) == "joy"
    assert res.best_fit == "joy"
    assert sum(res.posterior.values()) == pytest.approx(1, abs=1e-9)


def test_emotion_six_way_tie_is_unclassified():
    pairs = [([f"w_{e}"], e) for e in bayes.EMOTIONS]
    m = train(docs_of(pairs), bayes.EMOTIONS, kind=bayes.EMOTION)
    assert bayes.classify_emotion(tweet([]), m).best_fit == bayes.UNCLASSIFIED
    assert bayes.classify_emotion(tweet(["unknown"]), m).best_fit == bayes.UNCLASSIFIED


def test_emotion_needs_emotion_model():
    m = train(docs_of(TOY), ["A", "B"])
    with pytest.raises(ValueError):
        bayes.classify_emotion(tweet(["x"]), m)


def polarity_model(pos="positive", neg="negative"):
    return train(docs_of([(["good"], pos), (["bad"], neg)]), [pos, neg], kind=bayes.POLARITY)


def test_polarity_symmetric_empty_is_neutral():
    r = bayes.classify_polarity(tweet([]), polarity_model())
    assert r.ratio == 1.0 and r.label == bayes.NEUTRAL


def test_polarity_good_is_positive():
    r = bayes.classify_polarity(tweet(["good", "day"]), polarity_model())
    oracle = nb_posterior_oracle([(["good"], "positive"), (["bad"], "negative")],
                                 ["positive", "negative"], 1, ["good", "day"])
    assert r.label == bayes.POSITIVE
    assert r.pos_posterior == pytest.approx(float(oracle["positive"]), abs=1e-9)
    assert r.ratio == pytest.approx(r.pos_posterior / r.neg_posterior, rel=1e-12)


def test_polarity_label_swap_flips():
    t = tweet(["good", "good", "bad"])
    a = bayes.classify_polarity(t, polarity_model())
    b = bayes.classify_polarity(t, polarity_model("negative", "positive"))
    assert (a.label, b.label) == (bayes.POSITIVE, bayes.NEGATIVE)
    assert b.ratio == pytest.approx(1 / a.ratio, rel=1e-12)


def test_neutral_band():
    assert bayes.polarity_label(1.0) == bayes.NEUTRAL
    assert bayes.polarity_label(1.05, neutral_band=0.1) == bayes.NEUTRAL
    assert bayes.polarity_label(1.05) == bayes.POSITIVE
    assert bayes.polarity_label(0.5) == bayes.NEGATIVE


def test_seed_models_neutral_on_unknown_words():
    emo = bayes.seed_model(bayes.EMOTION)
    pol = bayes.seed_model(bayes.POLARITY)
    t = tweet(["qwertyuiop", "asdf"])
    assert bayes.classify_emotion(t, emo).best_fit == bayes.UNCLASSIFIED
    assert bayes.classify_polarity(t, pol).label == bayes.NEUTRAL
    assert bayes.classify_emotion(tweet(["happy", "smile"]), emo).best_fit == "joy"
    assert bayes.classify_polarity(tweet(["terrible"]), pol).label == bayes.NEGATIVE


# -- persistence -------------------------------------------------------------

def test_save_load_round_trip(tmp_path):
    m = train(docs_of([(["a", "b"], "A"), (["c", "é"], "B")]), ["A", "B"], alpha=0.3, kind=bayes.POLARITY)
    p = tmp_path / "m.json"
    bayes.save_model(m, p)
    loaded = bayes.load_model(p)
    assert loaded == m
    assert loaded.log_likelihood.tobytes() == m.log_likelihood.tobytes()


def test_wrong_version(tmp_path):
    p = tmp_path / "m.json"
    bayes.save_model(train(docs_of(TOY), ["A", "B"]), p)
    obj = json.loads(p.read_text())
    obj["version"] = 99
    p.write_text(json.dumps(obj))
    with pytest.raises(VersionMismatch):
        bayes.load_model(p)


def test_truncated_file(tmp_path):
    p = tmp_path / "m.json"
    bayes.save_model(train(docs_of(TOY), ["A", "B"]), p)
    p.write_text(p.read_text()[:40])
    with pytest.raises(OSError):
        bayes.load_model(p)


# -- properties --------------------------------------------------------------

VOCAB = ["a", "b", "c", "d", "e", "f"]


@st.composite
def small_problem(draw):
    n_classes = draw(st.integers(1, 3))
    classes = [f"c{i}" for i in range(n_classes)]
    docs = []
    for c in classes:
        for _ in range(draw(st.integers(1, 3))):
            docs.append((draw(st.lists(st.sampled_from(VOCAB), min_size=0, max_size=4)), c))
    alpha = draw(st.sampled_from([0.5, 1.0, 2.0]))
    query = draw(st.lists(st.sampled_from(VOCAB + ["zz"]), max_size=4))
    return docs, classes, alpha, query


@settings(max_examples=200, deadline=None)
@given(small_problem())
def test_enumeration_oracle(problem):
    docs, classes, alpha, query = problem
    post = classify(query, train(docs_of(docs), classes, alpha))
    exact = nb_posterior_oracle(docs, classes, alpha, query)
    assert sum(post.values()) == pytest.approx(1, abs=1e-9)
    for c in classes:
        assert post[c] == pytest.approx(float(exact[c]), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(small_problem())
def test_no_certain_posteriors(problem):
    docs, classes, alpha, query = problem
    if len(classes) < 2:
        return
    post = classify(query, train(docs_of(docs), classes, alpha))
    assert all(0 < p < 1 for p in post.values())


@settings(max_examples=100, deadline=None)
@given(small_problem(), st.floats(1e-3, 1e3))
def test_argmax_invariant_under_shared_scale(problem, k):
    docs, classes, alpha, query = problem
    m = train(docs_of(docs), classes, alpha)
    shifted = bayes.NaiveBayesModel(m.classes, m.log_prior, m.vocab,
                                    m.log_likelihood + math.log(k), m.alpha, m.kind)
    a, b = classify(query, m), classify(query, shifted)
    ranked = sorted(a.values(), reverse=True)
    if len(ranked) == 1 or ranked[0] - ranked[1] > 1e-9:
        assert max(a, key=a.get) == max(b, key=b.get)
    for c in classes:
        assert a[c] == pytest.approx(b[c], abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(small_problem(), st.permutations([0, 1, 2]))
def test_label_permutation(problem, perm):
    docs, classes, alpha, query = problem
    rename = {c: classes[perm[i] % len(classes)] for i, c in enumerate(classes)}
    if len(set(rename.values())) != len(classes):
        return
    m1 = train(docs_of(docs), classes, alpha)
    m2 = train(docs_of([(t, rename[c]) for t, c in docs]), classes, alpha)
    p1, p2 = classify(query, m1), classify(query, m2)
    for c in classes:
        assert p2[rename[c]] == pytest.approx(p1[c], abs=1e-12)
