import unicodedata

import pytest
from hypothesis import given, settings, strategies as st

from endorse.ingest import Corpus, RawTweet
from endorse.textprep import clean_corpus, clean_text, tokenize

# Each expected value was worked out by applying the rules by hand, in order.
GOLDEN = [
    # urls
    ("check this http://t.co/abc out", "check this out"),
    ("Read https://example.com/a?b=1 now", "read now"),
    ("visit www.nike.com today", "visit today"),
    ("HTTPS://EXAMPLE.COM Great", "great"),
    # retweet markers
    ("RT @nike: new drop", "new drop"),
    ("RT new drop", "new drop"),
    # hashtags and mentions vanish whole
    ("love it #nike", "love it"),
    ("#ad shoes are #great", "shoes are"),
    ("@messi you rock", "you rock"),
    ("thanks @pepsi and @messi", "thanks and"),
    # punctuation, symbols, emoji
    ("Wow!!! Really?...", "wow really"),
    ("don't stop", "dont stop"),
    ("love 😍 this", "love this"),
    ("«quote» — end…", "quote end"),
    ("a+b=c $5 ~ok", "abc ok"),
    ("sun ☀️ shine", "sun shine"),
    # digits
    ("top 10 players 2020", "top players"),
    ("covid19 update", "covid update"),
    # case and spacing
    ("HELLO World", "hello world"),
    ("  too   many\tspaces\n ", "too many spaces"),
    ("", ""),
    # combinations
    ("#tag @user http://x.co 123 !!!", ""),
    ("RT @nike: Just do it! http://t.co/x #ad 2020", "just do it"),
    ("Ótimo jogo, Neymar!", "ótimo jogo neymar"),
    ("日本語のツイート！", "日本語のツイート"),
    ("rt is not a marker when lowercase", "rt is not a marker when lowercase"),
]


@pytest.mark.parametrize("raw,expected", GOLDEN)
def test_golden(raw, expected):
    assert clean_text(raw) == expected


def test_tokenize():
    assert tokenize("just do it") == ["just", "do", "it"]
    assert tokenize("") == []
    assert tokenize("a b") == ["a", "b"]


def output_alphabet_ok(text):
    return all(ch == " " or unicodedata.category(ch)[0] in "LM" for ch in text)


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=80))
def test_idempotent_and_alphabet(s):
    once = clean_text(s)
    assert clean_text(once) == once
    assert output_alphabet_ok(once)
    assert once == once.lower()
    assert "  " not in once and once == once.strip()
    assert tokenize(once) == (once.split(" ") if once else [])


tweetish = st.lists(
    st.sampled_from(["RT", "@nike:", "#ad", "http://t.co/x", "www.a.b", "Great!", "2020",
                     "😍", "NA", "ok", "Ñandú", "  ", "\t", "can't", "#", "@"]),
    max_size=10,
).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(tweetish)
def test_idempotent_on_tweet_like_text(s):
    once = clean_text(s)
    assert clean_text(once) == once
    for bad in ("#", "@", "http", "www"):
        assert bad not in once


def corpus_of(entity, texts):
    return Corpus({entity: [RawTweet(str(i), entity, t) for i, t in enumerate(texts)]})


def test_clean_corpus_drops_na_and_duplicates():
    clean, reports = clean_corpus(corpus_of("A", ["Great!", "great", "NA"]))
    assert [t.text_clean for t in clean["A"]] == ["great"]
    assert clean["A"][0].id == "0"
    assert (reports[0].before_count, reports[0].after_count) == (3, 1)


def test_clean_corpus_empty_entity():
    clean, reports = clean_corpus(Corpus({"A": []}))
    assert clean["A"] == ()
    assert (reports[0].before_count, reports[0].after_count) == (0, 0)


def test_clean_corpus_distinct_texts_all_kept():
    clean, reports = clean_corpus(corpus_of("A", ["one", "two", "three", "four"]))
    assert reports[0].after_count == 4
    assert [t.tokens for t in clean["A"]] == [("one",), ("two",), ("three",), ("four",)]


def test_lowercase_na_is_not_dropped():
    clean, _ = clean_corpus(corpus_of("A", ["na", "NA"]))
    assert [t.text_clean for t in clean["A"]] == ["na"]


def test_clean_to_empty_is_dropped():
    clean, reports = clean_corpus(corpus_of("A", ["#only @tags", "real words"]))
    assert [t.text_clean for t in clean["A"]] == ["real words"]
    assert reports[0].after_count == 1


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.sampled_from(["A", "B", "C"]), st.lists(tweetish, max_size=12), max_size=3))
def test_clean_corpus_properties(groups):
    corpus = Corpus({e: [RawTweet(f"{e}{i}", e, t) for i, t in enumerate(ts)] for e, ts in groups.items()})
    clean, reports = clean_corpus(corpus)
    again, _ = clean_corpus(corpus)
    assert clean == again
    for rep in reports:
        assert rep.after_count <= rep.before_count
        texts = [t.text_clean for t in clean[rep.entity]]
        assert len(texts) == len(set(texts)) == rep.after_count
        assert all(t.tokens and list(t.tokens) == tokenize(t.text_clean) for t in clean[rep.entity])
    assert [r.entity for r in reports] == list(corpus)
