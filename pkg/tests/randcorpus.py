"""Seeded random corpora over a small Cyrillic alphabet rich in rule suffixes."""

from __future__ import annotations

import random

from surzhyk.text import CorpusIndex, Document

STEM_LETTERS = "абвдкмнопрстуеєиїіь"
ENDINGS = ("ем", "єм", "им", "їм", "м", "ти", "ть", "мо", "")
WORDS = ("ми", "самі", "ти", "їм", "ім", "под", "подвів", "будем", "ходить", "руками", "МИ")
PUNCT = ("—", ",", "...", "!")


def random_word(rng: random.Random) -> str:
    roll = rng.random()
    if roll < 0.25:
        return rng.choice(WORDS)
    if roll < 0.30:
        return rng.choice(PUNCT)
    stem = "".join(rng.choice(STEM_LETTERS) for _ in range(rng.randint(0, 4)))
    if rng.random() < 0.15:
        stem = "под" + stem
    word = stem + rng.choice(ENDINGS)
    return word or "м"


def random_line(rng: random.Random, max_tokens: int = 50) -> str:
    return " ".join(random_word(rng) for _ in range(rng.randint(0, max_tokens)))


def random_corpus(rng: random.Random, max_files: int = 2, max_lines: int = 20, max_tokens: int = 50) -> CorpusIndex:
    nfiles = rng.randint(1, max_files)
    budget = rng.randint(0, max_lines)
    docs = []
    for f in range(nfiles):
        n = budget if f == nfiles - 1 else rng.randint(0, budget)
        budget -= n
        docs.append(Document.from_text(f"f{f}.txt", "\n".join(random_line(rng, max_tokens) for _ in range(n))))
    return CorpusIndex.from_documents(docs)
