#!/usr/bin/env python3
"""Regenerates data/desk/, the small end-to-end fixture.

The output is fully determined by the seed, so rerunning this script must
not change any checked-in file.
"""
import argparse
import json
from pathlib import Path

import numpy as np

DIM = 16

# Six semantic groups of five adjectives; the first five lean towards one
# Big Five trait each, the sixth is a trait-neutral distractor group.
GROUPS = {
    "O": ["creative", "curious", "imaginative", "artistic", "inventive"],
    "C": ["organized", "careful", "diligent", "punctual", "tidy"],
    "E": ["talkative", "outgoing", "bold", "energetic", "lively"],
    "A": ["kind", "warm", "gentle", "generous", "polite"],
    "N": ["anxious", "moody", "nervous", "touchy", "insecure"],
    "X": ["tall", "young", "famous", "busy", "ordinary"],
}

MARKERS = {
    "O": ["creative", "imaginative", "artistic"],
    "C": ["organized", "careful", "tidy"],
    "E": ["talkative", "bold", "energetic"],
    "A": ["kind", "warm", "generous"],
    "N": ["anxious", "moody", "nervous"],
}

ITEMS = {
    "O": ["Have a vivid imagination", "Love to think up new ways of doing things", "Enjoy hearing new ideas",
          "Believe in the importance of art"],
    "C": ["Get chores done right away", "Like order", "Pay attention to details", "Make plans and stick to them"],
    "E": ["Talk to a lot of different people at parties", "Feel comfortable around people",
          "Start conversations", "Love excitement"],
    "A": ["Sympathize with others' feelings", "Make people feel at ease", "Trust others", "Love to help others"],
    "N": ["Worry about things", "Get stressed out easily", "Panic easily", "Have frequent mood swings"],
}

# Each community prefers a few adjective groups.
COMMUNITIES = {
    "AskScience": ["O", "C", "X"],
    "Parenting": ["A", "N", "C"],
    "CasualConversation": ["E", "A", "X"],
    "Anxiety": ["N", "N", "A"],
    "ArtHistory": ["O", "O", "X"],
}

FILLER = "the a my our this that really so very quite was is felt seemed looked today yesterday always".split()


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "desk")
    parser.add_argument("--seed", type=int, default=20240601)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    centers = {g: rng.normal(0.0, 1.0, DIM) * 3.0 for g in GROUPS}
    rows = []
    for g, words in GROUPS.items():
        for w in words:
            rows.append((w, centers[g] + rng.normal(0.0, 0.6, DIM)))
    # Words that appear in the corpus but are not in the lexicon.
    for w in ["blue", "quick", "loud"]:
        rows.append((w, rng.normal(0.0, 3.0, DIM)))
    for t, texts in ITEMS.items():
        for text in texts:
            rows.append((text.lower(), centers[t] * 0.8 + rng.normal(0.0, 1.2, DIM)))

    with open(out / "vectors.tsv", "w", encoding="utf-8") as f:
        f.write("# desk fixture embeddings, dim %d\n" % DIM)
        for key, vec in rows:
            f.write(key + "\t" + " ".join("%.6f" % v for v in vec) + "\n")

    with open(out / "adjectives.txt", "w", encoding="utf-8") as f:
        for words in GROUPS.values():
            for w in words:
                f.write(w + "\n")

    with open(out / "markers.txt", "w", encoding="utf-8") as f:
        f.write("# desk marker adjectives (subset of adjectives.txt)\n")
        for t, words in MARKERS.items():
            f.write(t + ":" + ",".join(words) + "\n")

    with open(out / "ipip.csv", "w", encoding="utf-8") as f:
        f.write("key,text,trait,facet\n")
        n = 0
        for t, texts in ITEMS.items():
            for text in texts:
                n += 1
                f.write('%s,"%s",%s,\n' % ("+" if n % 3 else "-", text, t))

    names = sorted(COMMUNITIES)
    with open(out / "corpus.jsonl", "w", encoding="utf-8") as f:
        for i in range(200):
            sub = names[int(rng.integers(len(names)))]
            words = []
            for _ in range(int(rng.integers(4, 12))):
                if rng.random() < 0.3:
                    g = COMMUNITIES[sub][int(rng.integers(3))]
                    words.append(GROUPS[g][int(rng.integers(4))])  # the fifth word never occurs
                elif rng.random() < 0.05:
                    words.append(["blue", "quick", "loud"][int(rng.integers(3))])
                else:
                    words.append(FILLER[int(rng.integers(len(FILLER)))])
            body = " ".join(words)
            if rng.random() < 0.2:
                body = body.capitalize() + "!"
            record = {"id": "t1_%04d" % i, "subreddit": sub, "body": body, "score": int(rng.integers(-3, 50))}
            f.write(json.dumps(record) + "\n")

    (out / "desk.conf").write_text(
        "# Desk fixture run: paths are relative to this file.\n"
        "lexicon = adjectives.txt\n"
        "vectors = vectors.tsv\n"
        "corpus = corpus.jsonl\n"
        "ipip = ipip.csv\n"
        "markers = markers.txt\n"
        "seed = 42\n"
        "k = 6\n"
        "ipip_k = 5\n"
        "top = 5\n"
        "scan_kmax = 8\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
