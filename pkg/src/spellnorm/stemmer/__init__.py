"""Stemmers for the stem-accuracy metric.

English uses the Porter algorithm.  German, Spanish, Hungarian, Portuguese
and Swedish use coarse suffix tables shipped with the package (replaceable
by user-supplied ``suffix<TAB>replacement<TAB>minlen`` files); diacritics
are folded away before suffix stripping.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple

from ..errors import ConfigurationError
from .porter import porter_stem

PORTER_ENGLISH = "porter-english"
SUFFIX_TABLE = "suffix-table"

SUFFIX_LANGUAGES = ("de", "es", "hu", "pt", "sv")
SUPPORTED_LANGUAGES = ("en",) + SUFFIX_LANGUAGES
# Languages without a stemmer in the evaluation; reported as unavailable.
UNSUPPORTED_LANGUAGES = ("is", "sl")


class SuffixRule(NamedTuple):
    suffix: str
    replacement: str
    min_stem: int


def fold_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    return unicodedata.normalize("NFC", stripped)


@dataclass(frozen=True)
class StemmerSpec:
    language: str
    algorithm: str
    rules: tuple[SuffixRule, ...] = ()

    def __post_init__(self):
        if self.algorithm not in (PORTER_ENGLISH, SUFFIX_TABLE):
            raise ConfigurationError(f"unknown stemming algorithm {self.algorithm!r}")
        for rule in self.rules:
            if rule.min_stem < 1:
                raise ConfigurationError(f"min stem length must be >= 1 in {rule}")
            if len(rule.replacement) > len(rule.suffix):
                raise ConfigurationError(f"replacement longer than suffix in {rule}")
        # longest suffix first; stable for equal lengths
        ordered = tuple(sorted(self.rules, key=lambda r: -len(r.suffix)))
        object.__setattr__(self, "rules", ordered)


def parse_suffix_rules(lines: Iterable[str]) -> tuple[SuffixRule, ...]:
    rules = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise ConfigurationError(f"suffix table line {lineno}: expected 3 columns")
        suffix, replacement, minlen = columns
        rules.append(SuffixRule(fold_diacritics(suffix), fold_diacritics(replacement), int(minlen)))
    return tuple(rules)


def load_suffix_table(path: str | Path, language: str) -> StemmerSpec:
    with open(path, encoding="utf-8") as f:
        return StemmerSpec(language, SUFFIX_TABLE, parse_suffix_rules(f))


def get_stemmer(language: str) -> StemmerSpec:
    """Built-in stemmer for an ISO 639-1 language code."""
    if language == "en":
        return StemmerSpec("en", PORTER_ENGLISH)
    if language in SUFFIX_LANGUAGES:
        text = resources.files("spellnorm.data").joinpath(f"stem_{language}.tsv").read_text("utf-8")
        return StemmerSpec(language, SUFFIX_TABLE, parse_suffix_rules(text.splitlines()))
    raise ConfigurationError(
        f"no stemmer for language {language!r}; supported: {', '.join(SUPPORTED_LANGUAGES)}"
    )


def stem(spec: StemmerSpec, word: str) -> str:
    if spec.algorithm == PORTER_ENGLISH:
        return porter_stem(word)
    word = fold_diacritics(word)
    for rule in spec.rules:
        if word.endswith(rule.suffix) and len(word) - len(rule.suffix) >= rule.min_stem:
            return word[: len(word) - len(rule.suffix)] + rule.replacement
    return word
