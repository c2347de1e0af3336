#!/usr/bin/env python3
"""Regenerates the bundled synthetic mini-corpus under data/mini/.

200 OLID-style tweets (150 train, 50 test) over a 20-word toy vocabulary,
an 8-dimensional toy .vec file and 16-dimensional precomputed sentence
vectors. Output is deterministic for a given --seed.
"""

import argparse
import pathlib

import numpy as np

OFFENSIVE = ["idiot", "stupid", "moron", "trash", "loser", "dumb", "pathetic", "scum", "clown", "liar"]
NEUTRAL = ["love", "great", "happy", "friend", "music", "game", "sunny", "coffee", "thanks", "team"]
FILLER = ["the", "you", "is", "so", "and", "this", "are", "what"]
NOISE = ["@USER", "@USER @USER", "URL", "http://t.co/x1", "#MAGA", "#news #today", "100", "!!", "...", "\U0001F600"]


def make_tweet(rng, offensive):
    own, other = (OFFENSIVE, NEUTRAL) if offensive else (NEUTRAL, OFFENSIVE)
    words = []
    for _ in range(rng.integers(3, 9)):
        r = rng.random()
        if r < 0.55:
            words.append(own[rng.integers(len(own))])
        elif r < 0.7:
            words.append(other[rng.integers(len(other))])
        elif r < 0.85:
            words.append(FILLER[rng.integers(len(FILLER))])
        else:
            words.append(NOISE[rng.integers(len(NOISE))])
    if rng.random() < 0.3:
        words[0] = words[0].capitalize()
    return " ".join(words)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "mini"))
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    rows = []
    for i in range(200):
        offensive = rng.random() < 0.33
        text = make_tweet(rng, offensive)
        if i % 37 == 5:
            text = "@USER the URL #tag 42 !!"  # empties out after cleaning
        rows.append((f"{10000 + i}", text, "OFF" if offensive else "NOT"))
    train, test = rows[:150], rows[150:]

    with open(out / "train.tsv", "w", encoding="utf-8") as f:
        f.write("id\ttweet\tsubtask_a\tsubtask_b\tsubtask_c\n")
        for id_, text, label in train:
            f.write(f"{id_}\t{text}\t{label}\tNULL\tNULL\n")
    with open(out / "test.tsv", "w", encoding="utf-8") as f:
        f.write("id\ttweet\n")
        for id_, text, _ in test:
            f.write(f"{id_}\t{text}\n")
    with open(out / "test_labels.csv", "w", encoding="utf-8") as f:
        for id_, _, label in test:
            f.write(f"{id_},{label}\n")

    dim = 8
    with open(out / "toy.vec", "w", encoding="utf-8") as f:
        f.write(f"{len(OFFENSIVE) + len(NEUTRAL)} {dim}\n")
        for word in OFFENSIVE + NEUTRAL:
            centre = 0.6 if word in OFFENSIVE else -0.6
            vec = rng.normal(0.0, 0.5, dim)
            vec[:3] += centre
            f.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")

    pdim = 16
    with open(out / "precomputed.txt", "w", encoding="utf-8") as f:
        for id_, _, label in rows:
            vec = rng.normal(0.0, 1.0, pdim)
            vec[:4] += 1.2 if label == "OFF" else -0.4
            f.write(id_ + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")


if __name__ == "__main__":
    main()
