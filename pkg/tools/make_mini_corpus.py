"""Generate the deterministic 4-topic/40-argument mini corpus fixture.

Writes tests/data/mini_corpus.csv. The fixture is checked in; rerun this
script only when the construction rules change. Properties the tests rely
on: 4 topics with 10 arguments each, expert 1 always equals the majority
score, scores correlate loosely with text length and marker usage, and the
texts reuse wordlist vocabulary with a few injected misspellings so the
text-quality features vary.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

from argquality.corpus import DIMENSIONS

TOPICS = {
    "plastic bags": ("plastic bags", "waste", "the city", "clean streets"),
    "school uniforms": ("school uniforms", "children", "the school",
                        "simple clothes"),
    "remote work": ("remote work", "people", "the office", "travel time"),
    "public transport": ("public transport", "buses and trains", "the city",
                         "cheap tickets"),
}

OPENERS = (
    "I think {a} should matter to everyone.",
    "We must talk about {a} today.",
    "Many people have strong views on {a}.",
    "In my view {a} deserves more attention.",
)
PREMISES = (
    "This is true because {b} can change for the better.",
    "Since {b} costs money and time, the point stands.",
    "For example, {b} shows the problem every day.",
    "Studies show that {b} matters for health and safety.",
    "The evidence is that {b} helps families save money.",
)
CONCLUSIONS = (
    "Therefore we should support {a}.",
    "Thus the answer is clear to me.",
    "So the community should act on {a} now.",
    "Hence I believe this is the right way.",
)
STRUCTURE = (
    "First, {b} is easy to improve.",
    "Second, {b} is good for everyone.",
    "On the other hand, some people disagree about {b}.",
    "1. Better rules. 2. Lower costs.",
)
FILLERS = (
    "It is simple and fair.",
    "Everyone can see this.",
    "That is just my view.",
    "Nothing else works as well.",
    "You can check the facts.",
)


def build_text(rng: random.Random, nouns: tuple[str, ...],
               quality: int) -> str:
    """Compose a text whose richness loosely tracks the quality level."""
    a = rng.choice(nouns)
    b = rng.choice(nouns)
    sentences = [rng.choice(OPENERS).format(a=a)]
    if quality >= 2:
        sentences.append(rng.choice(PREMISES).format(b=b))
        sentences.append(rng.choice(STRUCTURE).format(b=rng.choice(nouns)))
    if quality >= 3:
        sentences.append(rng.choice(PREMISES).format(b=rng.choice(nouns)))
        sentences.append(rng.choice(CONCLUSIONS).format(a=a))
    if quality == 1 and rng.random() < 0.5:
        sentences.append(rng.choice(FILLERS))
    if quality >= 2 and rng.random() < 0.4:
        sentences.append(rng.choice(FILLERS))
    text = " ".join(sentences)
    if rng.random() < 0.25:
        text = text.replace("the ", "teh ", 1)
    return text


def score_triple(rng: random.Random, base: int) -> tuple[int, int, int]:
    """Three expert scores whose majority is a noisy copy of base."""
    majority = base
    if rng.random() < 0.3:
        majority = min(3, max(1, base + rng.choice((-1, 1))))
    first = majority
    if rng.random() < 0.45:
        second = rng.choice((1, 2, 3))
    else:
        second = majority
    third = majority if second != majority else rng.choice((1, 2, 3))
    return first, second, third


def main() -> None:
    rng = random.Random(7)
    out_path = Path(__file__).resolve().parents[1] / "tests" / "data" / "mini_corpus.csv"
    header = ["id", "topic", "text"]
    header += [f"{dim.value}:{expert}" for dim in DIMENSIONS
               for expert in (1, 2, 3)]
    rows = []
    arg_number = 0
    for topic, nouns in TOPICS.items():
        for _ in range(10):
            arg_number += 1
            quality = rng.choice((1, 2, 2, 3, 3))
            text = build_text(rng, nouns, quality)
            row = [f"arg{arg_number:03d}", topic, text]
            for _dim in DIMENSIONS:
                row.extend(score_triple(rng, quality))
            rows.append(row)
    with open(out_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {len(rows)} arguments to {out_path}")


if __name__ == "__main__":
    main()
