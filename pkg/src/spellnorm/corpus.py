"""Reading, preprocessing and writing token-pair datasets and lexicons.

Datasets are UTF-8 files with one ``historical<TAB>normalized`` pair per
line.  Every pair is passed through :func:`preprocess_pair`; pairs that do
not survive are counted and logged, never fatal.
"""

from __future__ import annotations

import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import ConfigurationError, IngestionError, ParseError

log = logging.getLogger(__name__)

JOIN_SYMBOL = "▁"
SPLITS = ("train", "dev", "test")

_DIGIT = re.compile(r"\d")


def is_punctuation(text: str) -> bool:
    """True if every character is in one of the Unicode ``P*`` categories."""
    return bool(text) and all(unicodedata.category(c).startswith("P") for c in text)


def _digits(text: str) -> list[str]:
    return _DIGIT.findall(text)


def _strip_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


@dataclass(frozen=True)
class TokenPair:
    source: str
    target: str


def preprocess_pair(raw_source: str, raw_target: str) -> TokenPair | None:
    """Normalize one raw pair, or return ``None`` if it has to be dropped.

    Steps, in order: lowercase; drop empty sides; drop punctuation-only
    sides; zero all digits iff both sides carry the same digit sequence;
    replace spaces with :data:`JOIN_SYMBOL`; NFC.
    """
    source = raw_source.lower().strip()
    target = raw_target.lower().strip()
    if not source or not target:
        return None
    if is_punctuation(source) or is_punctuation(target):
        return None
    if _digits(source) == _digits(target):
        source = _DIGIT.sub("0", source)
        target = _DIGIT.sub("0", target)
    source = source.replace(" ", JOIN_SYMBOL)
    target = target.replace(" ", JOIN_SYMBOL)
    return TokenPair(
        unicodedata.normalize("NFC", source), unicodedata.normalize("NFC", target)
    )


def preprocess_token(raw: str) -> str | None:
    """Preprocess a standalone word (lexicon side).

    Same pipeline as :func:`preprocess_pair`, except that surrounding
    punctuation is stripped and digits are always zeroed.
    """
    token = _strip_punctuation(raw.lower().strip())
    if not token or is_punctuation(token):
        return None
    token = _DIGIT.sub("0", token).replace(" ", JOIN_SYMBOL)
    return unicodedata.normalize("NFC", token)


@dataclass(frozen=True)
class Dataset:
    name: str
    pairs: tuple[TokenPair, ...]
    split: str = "train"
    dropped: int = 0

    def __post_init__(self):
        if self.split not in SPLITS:
            raise ConfigurationError(f"unknown split {self.split!r}, expected one of {SPLITS}")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[TokenPair]:
        return iter(self.pairs)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Dataset(self.name, self.pairs[index], self.split)
        return self.pairs[index]

    @property
    def sources(self) -> list[str]:
        return [p.source for p in self.pairs]

    @property
    def targets(self) -> list[str]:
        return [p.target for p in self.pairs]

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, str] | TokenPair], name: str = "", split: str = "train"
    ) -> "Dataset":
        """Build a dataset from already-preprocessed pairs (no filtering)."""
        items = tuple(p if isinstance(p, TokenPair) else TokenPair(*p) for p in pairs)
        return cls(name, items, split)


def _decoded_lines(path: Path) -> Iterator[tuple[int, str]]:
    data = path.read_bytes()
    if not data:
        return
    raw_lines = data.split(b"\n")
    if raw_lines[-1] == b"":
        raw_lines.pop()
    for lineno, raw in enumerate(raw_lines, start=1):
        if raw.endswith(b"\r"):
            raw = raw[:-1]
        try:
            yield lineno, raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IngestionError(f"invalid UTF-8 in {path}: {exc.reason}", line=lineno) from None


def read_pairs(path: str | Path) -> Iterator[tuple[int, str, str]]:
    """Yield ``(line_number, source, target)`` for each non-blank line, unprocessed."""
    path = Path(path)
    for lineno, line in _decoded_lines(path):
        if not line.strip():
            continue
        if JOIN_SYMBOL in line:
            raise IngestionError(
                f"reserved join symbol U+2581 occurs in {path}", line=lineno
            )
        columns = line.split("\t")
        if len(columns) != 2:
            raise ParseError(
                f"expected 2 tab-separated columns in {path}, got {len(columns)}", line=lineno
            )
        yield lineno, columns[0], columns[1]


def load_dataset(path: str | Path, split: str = "train", name: str | None = None) -> Dataset:
    path = Path(path)
    pairs = []
    dropped = 0
    for lineno, source, target in read_pairs(path):
        pair = preprocess_pair(source, target)
        if pair is None:
            dropped += 1
            log.debug("%s:%d: dropped pair %r -> %r", path, lineno, source, target)
        else:
            pairs.append(pair)
    if dropped:
        log.info("%s: dropped %d of %d pairs", path, dropped, dropped + len(pairs))
    return Dataset(name if name is not None else path.stem, tuple(pairs), split, dropped)


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pair in dataset.pairs:
            f.write(f"{pair.source}\t{pair.target}\n")


@dataclass(frozen=True)
class Lexicon:
    """Contemporary word types with corpus frequencies."""

    entries: Mapping[str, int] = field(default_factory=dict)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def frequency(self, word: str) -> int:
        return self.entries.get(word, 0)

    def merge(self, other: "Lexicon") -> "Lexicon":
        counts = Counter(self.entries)
        counts.update(other.entries)
        return Lexicon(dict(counts))

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Lexicon":
        return cls(dict(Counter(words)))


def _corpus_tokens(path: Path) -> Iterator[str]:
    for _, line in _decoded_lines(path):
        for raw in line.split():
            token = preprocess_token(raw)
            if token is not None:
                yield token


def build_lexicon(
    corpus_paths: Iterable[str | Path] = (), extra_wordlists: Iterable[str | Path] = ()
) -> Lexicon:
    """Count preprocessed whitespace tokens of running text, plus wordlist types."""
    corpus_paths = [Path(p) for p in corpus_paths]
    extra_wordlists = [Path(p) for p in extra_wordlists]
    if not corpus_paths and not extra_wordlists:
        raise ConfigurationError("build_lexicon needs at least one corpus or wordlist")
    counts: Counter[str] = Counter()
    for path in corpus_paths:
        counts.update(_corpus_tokens(path))
    for path in extra_wordlists:
        for _, line in _decoded_lines(path):
            token = preprocess_token(line)
            if token is not None and token not in counts:
                counts[token] = 1
    return Lexicon(dict(counts))


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for word in sorted(lexicon.entries):
            f.write(f"{word}\t{lexicon.entries[word]}\n")


def load_lexicon(path: str | Path) -> Lexicon:
    """Read a ``type<TAB>frequency`` file; a bare one-column line counts as frequency 1."""
    path = Path(path)
    entries: dict[str, int] = {}
    for lineno, line in _decoded_lines(path):
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) == 1:
            word, freq = columns[0], 1
        elif len(columns) == 2:
            word = columns[0]
            try:
                freq = int(columns[1])
            except ValueError:
                raise ParseError(f"bad frequency {columns[1]!r} in {path}", line=lineno) from None
            if freq < 1:
                raise ParseError(f"frequency must be >= 1 in {path}", line=lineno)
        else:
            raise ParseError(f"expected 1 or 2 columns in {path}, got {len(columns)}", line=lineno)
        entries[word] = entries.get(word, 0) + freq
    return Lexicon(entries)
