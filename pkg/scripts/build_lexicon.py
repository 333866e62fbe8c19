#!/usr/bin/env python3
"""Regenerate the bundled opinion word lists from a VADER lexicon file.

Usage: build_lexicon.py path/to/vader_lexicon.txt [--cutoff 0.5]

Only purely alphabetic ASCII entries are kept; emoticons and
contractions are dropped because cleaned tweets never contain them.
"""

import argparse
import json
import re
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "endorse" / "data"
WORD = re.compile(r"^[a-z]+$")

HEADER = """; Opinion word list ({polarity}), derived from the VADER sentiment lexicon
; (C.J. Hutto, MIT License, https://github.com/cjhutto/vaderSentiment).
; Entries with mean valence {op} {cutoff} and alphabetic spelling only.
; Regenerate with scripts/build_lexicon.py.
"""


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("vader_lexicon", type=Path)
    parser.add_argument("--cutoff", type=float, default=0.5)
    args = parser.parse_args()

    pos, neg = {}, {}
    for line in args.vader_lexicon.read_text(encoding="utf-8").splitlines():
        parts = line.split("\t")
        if len(parts) < 2 or not WORD.match(parts[0]):
            continue
        valence = float(parts[1])
        if valence >= args.cutoff:
            pos[parts[0]] = valence
        elif valence <= -args.cutoff:
            neg[parts[0]] = -valence

    for name, words, polarity, op, cut in (
        ("positive-words.txt", pos, "positive", ">=", args.cutoff),
        ("negative-words.txt", neg, "negative", "<=", -args.cutoff),
    ):
        text = HEADER.format(polarity=polarity, op=op, cutoff=cut)
        text += "\n".join(sorted(words)) + "\n"
        (DATA / name).write_text(text, encoding="utf-8")
        print(f"{name}: {len(words)} words")

    # Balanced one-token training docs: equal class sizes make an all-unseen
    # tweet score exactly neutral. The larger side keeps its strongest words.
    n = min(len(pos), len(neg))
    with open(DATA / "polarity_seed.jsonl", "w", encoding="utf-8") as fh:
        for label, scored in (("positive", pos), ("negative", neg)):
            ranked = sorted(scored, key=lambda w: (-scored[w], w))[:n]
            for word in sorted(ranked):
                fh.write(json.dumps({"tokens": [word], "label": label}) + "\n")
    print(f"polarity_seed.jsonl: {n} docs per class")


if __name__ == "__main__":
    main()
