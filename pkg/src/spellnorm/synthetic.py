"""Deterministic synthetic corpus for smoke-testing all backends.

Modern pseudo-words are built from syllables over an alphabet without
``v``, ``y``, ``ſ`` and without doubled letters, so the historical
spellings derived from them can be undone unambiguously:

* ``u`` written as ``v``
* non-final ``s`` written as long ``ſ``
* ``i`` before a consonant written as ``y``
* a word-final consonant doubled
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Dataset, Lexicon, TokenPair

CONSONANTS = "bcdfghklmnprstwz"
VOWELS = "aeiou"


def modern_words(n_types: int = 1200, seed: int = 1) -> list[str]:
    rng = random.Random(seed)
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n_types:
        word = ""
        for syllable in range(rng.choice((1, 2, 2, 3))):
            onset = rng.choice(CONSONANTS) if syllable or rng.random() < 0.8 else ""
            coda = rng.choice(CONSONANTS) if rng.random() < 0.4 else ""
            word += onset + rng.choice(VOWELS) + coda
        if len(word) < 2 or any(a == b for a, b in zip(word, word[1:])) or word in seen:
            continue
        seen.add(word)
        words.append(word)
    return words


def historicize(word: str, rng: random.Random, rate: float = 0.5) -> str:
    chars = []
    for i, c in enumerate(word):
        nxt = word[i + 1] if i + 1 < len(word) else ""
        if c == "u" and rng.random() < rate:
            c = "v"
        elif c == "s" and nxt and rng.random() < rate:
            c = "ſ"
        elif c == "i" and nxt in CONSONANTS and nxt and rng.random() < rate:
            c = "y"
        chars.append(c)
    if word[-1] in CONSONANTS and rng.random() < rate:
        chars.append(word[-1])
    return "".join(chars)


def modernize(historical: str) -> str:
    """Exact inverse of :func:`historicize`."""
    word = historical.replace("v", "u").replace("ſ", "s").replace("y", "i")
    if len(word) > 1 and word[-1] == word[-2]:
        word = word[:-1]
    return word


@dataclass(frozen=True)
class SyntheticCorpus:
    train: Dataset
    test: Dataset
    lexicon: Lexicon
    words: tuple[str, ...]


def build_corpus(
    n_train: int = 2000, n_test: int = 500, n_types: int = 1200, seed: int = 1
) -> SyntheticCorpus:
    """Token streams drawn from a Zipf-like distribution over the modern words."""
    words = modern_words(n_types, seed)
    rng = random.Random(seed + 1)
    weights = [1.0 / (rank + 1) ** 0.8 for rank in range(len(words))]

    def sample(n: int) -> tuple[TokenPair, ...]:
        tokens = rng.choices(words, weights, k=n)
        return tuple(TokenPair(historicize(w, rng), w) for w in tokens)

    train = Dataset("synthetic", sample(n_train), "train")
    test = Dataset("synthetic", sample(n_test), "test")
    lexicon = Lexicon({w: 1 for w in words})
    return SyntheticCorpus(train, test, lexicon, tuple(words))
