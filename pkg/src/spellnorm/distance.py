"""Weighted Levenshtein normalizer: learned edit costs plus nearest-lexicon search."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .aligner import MATCH, align, edit_distance
from .candidate import Candidate, identity
from .corpus import Lexicon, TokenPair
from .errors import ConfigurationError, TrainingError

ORIGIN = "distance"
DEFAULT_THRESHOLD = 0.5
DEFAULT_ITERATIONS = 2
MIN_COST = 0.05


@dataclass(frozen=True)
class EditWeightMatrix:
    """Costs of non-match edit operations; ``""`` stands for the empty side."""

    costs: dict[tuple[str, str], float] = field(default_factory=dict)
    default_cost: float = 1.0

    def cost(self, source: str, target: str) -> float:
        if source == target:
            return 0.0
        return self.costs.get((source, target), self.default_cost)

    def min_indel_cost(self) -> float:
        """Lower bound on the cost of any single insertion or deletion."""
        indels = [c for (s, t), c in self.costs.items() if not s or not t]
        return min(indels + [self.default_cost])

    def to_lines(self) -> list[str]:
        lines = [f"#default\t{self.default_cost!r}"]
        lines += [f"{s}\t{t}\t{c!r}" for (s, t), c in sorted(self.costs.items())]
        return lines

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "EditWeightMatrix":
        lines = iter(lines)
        tag, default = next(lines).split("\t")
        if tag != "#default":
            raise ValueError("weights file must start with a '#default' header line")
        costs = {}
        for line in lines:
            s, t, c = line.split("\t")
            costs[(s, t)] = float(c)
        return cls(costs, float(default))


def _scaled_costs(op_counts: Counter) -> dict[tuple[str, str], float]:
    total = sum(op_counts.values())
    neglog = {op: -math.log(n / total) for op, n in op_counts.items()}
    top = max(neglog.values())
    if top == 0.0:
        return {op: MIN_COST for op in neglog}
    return {op: max(MIN_COST, v / top) for op, v in sorted(neglog.items())}


def learn_weights(
    pairs: Sequence[TokenPair], iterations: int = DEFAULT_ITERATIONS
) -> EditWeightMatrix:
    """Estimate edit costs by repeated alignment.

    Each round aligns every pair under the current costs, counts the
    non-match operations and sets ``cost = -log(relative frequency)``
    divided by the largest such value, floored at ``MIN_COST``.
    Operations never observed keep the unit cost.
    """
    if iterations < 1:
        raise ConfigurationError("iterations must be a positive integer")
    pairs = list(pairs)
    if not pairs:
        raise TrainingError("cannot learn edit weights from an empty dataset")
    # identical pairs and repeated types align the same way
    type_counts = Counter((p.source, p.target) for p in pairs if p.source != p.target)
    weights = EditWeightMatrix()
    for _ in range(iterations):
        op_counts: Counter = Counter()
        for (source, target), n in sorted(type_counts.items()):
            for op in align(source, target, weights):
                if op.kind != MATCH:
                    op_counts[(op.source, op.target)] += n
        if not op_counts:
            break
        weights = EditWeightMatrix(_scaled_costs(op_counts))
    return weights


class LexiconIndex:
    """Lexicon entries bucketed by length, for the length-difference prune."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        buckets: dict[int, list[str]] = defaultdict(list)
        for word in sorted(lexicon.entries, key=lambda w: (-lexicon.entries[w], w)):
            buckets[len(word)].append(word)
        self.buckets = dict(buckets)

    def lengths_by_gap(self, length: int) -> list[tuple[int, int]]:
        """``(gap, bucket_length)`` pairs in increasing gap order."""
        return sorted((abs(n - length), n) for n in self.buckets)


def nearest(
    weights: EditWeightMatrix, index: LexiconIndex, token: str
) -> tuple[str, float] | None:
    """Closest lexicon entry to ``token`` and its distance.

    Ties go to the more frequent entry, then the smaller string.
    """
    if not index.buckets:
        return None
    freq = index.lexicon.entries
    indel = weights.min_indel_cost()
    best_word, best = None, math.inf
    for gap, n in index.lengths_by_gap(len(token)):
        if gap * indel > best:
            break
        for word in index.buckets[n]:
            d = edit_distance(token, word, weights, bound=best)
            if d > best:
                continue
            if d < best or (-freq[word], word) < (-freq[best_word], best_word):
                best_word, best = word, d
    return best_word, best


def distance_normalize(
    weights: EditWeightMatrix,
    lexicon: Lexicon | LexiconIndex,
    token: str,
    threshold: float = DEFAULT_THRESHOLD,
) -> Candidate:
    index = lexicon if isinstance(lexicon, LexiconIndex) else LexiconIndex(lexicon)
    if not index.buckets:
        raise ConfigurationError("distance normalization needs a non-empty lexicon")
    word, dist = nearest(weights, index, token)
    if dist / max(1, len(token)) > threshold:
        return identity(token, ORIGIN)
    return Candidate(word, -dist, ORIGIN)
