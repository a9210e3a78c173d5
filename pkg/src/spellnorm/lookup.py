"""Memorization baseline: each seen historical type maps to its most frequent normalization."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .candidate import Candidate, identity
from .corpus import TokenPair

ORIGIN = "lookup"


class LookupEntry(NamedTuple):
    target: str
    count: int
    total: int


@dataclass(frozen=True)
class LookupTable:
    mapping: dict[str, LookupEntry] = field(default_factory=dict)

    def __contains__(self, token: object) -> bool:
        return token in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)

    def to_lines(self) -> list[str]:
        return [
            f"{source}\t{e.target}\t{e.count}\t{e.total}"
            for source, e in sorted(self.mapping.items())
        ]

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "LookupTable":
        mapping = {}
        for line in lines:
            source, target, count, total = line.split("\t")
            mapping[source] = LookupEntry(target, int(count), int(total))
        return cls(mapping)


def majority_map(pairs: Iterable[TokenPair]) -> dict[str, LookupEntry]:
    """Per source type, the most frequent target (ties: smallest code-point order)."""
    counts: dict[str, Counter[str]] = defaultdict(Counter)
    for pair in pairs:
        counts[pair.source][pair.target] += 1
    mapping = {}
    for source, targets in counts.items():
        target, count = min(targets.items(), key=lambda tc: (-tc[1], tc[0]))
        mapping[source] = LookupEntry(target, count, sum(targets.values()))
    return mapping


def train_lookup(pairs: Iterable[TokenPair]) -> LookupTable:
    return LookupTable(majority_map(pairs))


def lookup_normalize(table: LookupTable, token: str) -> Candidate:
    entry = table.mapping.get(token)
    if entry is None:
        return identity(token, ORIGIN)
    return Candidate(entry.target, math.log(entry.count / entry.total), ORIGIN)
