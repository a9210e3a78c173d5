"""Context-aware character rewrite rules induced from aligned training pairs.

Every source character gets exactly one rule at decoding time.  A rule is
keyed by the character and its immediate left/right neighbours in the
source word (``#`` at word edges); inserted characters are folded into the
rule of the preceding source position (the following one at word start).
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .aligner import INSERT, align
from .candidate import Candidate, identity
from .corpus import TokenPair
from .errors import TrainingError

ORIGIN = "rules"
BOUNDARY = "#"


class RuleKey(NamedTuple):
    source: str
    left: str
    right: str


class Rule(NamedTuple):
    left: str
    source: str
    right: str
    target: str
    count: int


def position_rewrites(source: str, target: str) -> list[tuple[str, str]]:
    """Split an alignment into one ``(source_char, target_segment)`` per source position."""
    rewrites: list[list[str]] = []
    pending = ""  # word-initial inserts
    for op in align(source, target):
        if op.kind == INSERT:
            if rewrites:
                rewrites[-1][1] += op.target
            else:
                pending += op.target
        else:
            rewrites.append([op.source, pending + op.target])
            pending = ""
    return [(s, t) for s, t in rewrites]


def context_key(word: str, i: int) -> RuleKey:
    left = word[i - 1] if i > 0 else BOUNDARY
    right = word[i + 1] if i + 1 < len(word) else BOUNDARY
    return RuleKey(word[i], left, right)


@dataclass(frozen=True)
class RuleSet:
    rules: dict[RuleKey, dict[str, int]] = field(default_factory=dict)
    context_totals: dict[RuleKey, int] = field(default_factory=dict)
    # context-free aggregation per source character, the first backoff level
    by_char: dict[str, dict[str, int]] = field(default_factory=dict)
    char_totals: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, counts: dict[RuleKey, Counter]) -> "RuleSet":
        rules = {key: dict(sorted(targets.items())) for key, targets in sorted(counts.items())}
        by_char: dict[str, Counter] = defaultdict(Counter)
        for key, targets in rules.items():
            by_char[key.source].update(targets)
        return cls(
            rules=rules,
            context_totals={key: sum(t.values()) for key, t in rules.items()},
            by_char={c: dict(sorted(t.items())) for c, t in sorted(by_char.items())},
            char_totals={c: sum(t.values()) for c, t in by_char.items()},
        )

    def __iter__(self):
        for key, targets in self.rules.items():
            for target, count in targets.items():
                yield Rule(key.left, key.source, key.right, target, count)

    def options(self, word: str, i: int) -> list[tuple[str, int, int]]:
        """``(target, count, total)`` choices for position ``i``, after backoff."""
        key = context_key(word, i)
        targets = self.rules.get(key)
        if targets is not None:
            total = self.context_totals[key]
        else:
            targets = self.by_char.get(key.source)
            if targets is None:
                return []
            total = self.char_totals[key.source]
        return [(t, c, total) for t, c in targets.items()]

    def to_lines(self) -> list[str]:
        return sorted(f"{r.left}\t{r.source}\t{r.right}\t{r.target}\t{r.count}" for r in self)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "RuleSet":
        counts: dict[RuleKey, Counter] = defaultdict(Counter)
        for line in lines:
            left, source, right, target, count = line.split("\t")
            counts[RuleKey(source, left, right)][target] += int(count)
        return cls.from_counts(counts)


def learn_rules(pairs: Iterable[TokenPair]) -> RuleSet:
    counts: dict[RuleKey, Counter] = defaultdict(Counter)
    seen = False
    for pair in pairs:
        seen = True
        rewrites = position_rewrites(pair.source, pair.target)
        for i, (_, target) in enumerate(rewrites):
            counts[context_key(pair.source, i)][target] += 1
    if not seen:
        raise TrainingError("cannot learn rules from an empty dataset")
    return RuleSet.from_counts(counts)


def apply_rules(rules: RuleSet, token: str) -> Candidate:
    """Rewrite each character with its most probable rule.

    Positions are independent, so the per-position argmax maximizes the
    product of rule probabilities.  Ties go to the higher count, then the
    smaller target string.
    """
    pieces = []
    score = 0.0
    matched = False
    for i, char in enumerate(token):
        options = rules.options(token, i)
        if not options:
            pieces.append(char)
            continue
        matched = True
        target, count, total = min(options, key=lambda o: (-o[1], o[0]))
        pieces.append(target)
        score += math.log(count / total)
    form = "".join(pieces)
    if not matched or not form:
        return identity(token, ORIGIN)
    return Candidate(form, score, ORIGIN)
