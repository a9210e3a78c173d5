"""Learning curves over equidistant training chunks."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from statistics import fmean
from typing import Any, Sequence, TextIO

from .core import normalize_all, train
from .corpus import Dataset, Lexicon
from .errors import ConfigurationError, SpellnormError
from .evaluation import word_accuracy

log = logging.getLogger(__name__)

DEFAULT_SIZES = (100, 250, 500, 1000, 2500, 5000, 10000, 25000, 50000)
DEFAULT_MAX_SPLITS = 10


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def chunk_starts(total: int, n: int, max_splits: int = DEFAULT_MAX_SPLITS) -> list[int]:
    """Start offsets of the equidistant ``n``-token chunks of a ``total``-token set.

    Chunks are spread from the first to the last possible offset; their
    number is capped so that two chunks never share more than half of
    their tokens.
    """
    if n < 1 or max_splits < 1:
        raise ConfigurationError("chunk size and max_splits must be positive")
    if n > total:
        raise ConfigurationError(f"chunk size {n} exceeds training set size {total}")
    k = min(max_splits, (total - n) // max(1, math.ceil(n / 2)) + 1)
    while True:
        if k == 1:
            return [0]
        starts = [_round_half_up(i * (total - n) / (k - 1)) for i in range(k)]
        if all(n - (b - a) <= n // 2 for a, b in zip(starts, starts[1:])):
            return starts
        k -= 1


def make_splits(train_set: Dataset, n: int, max_splits: int = DEFAULT_MAX_SPLITS) -> list[Dataset]:
    return [train_set[s:s + n] for s in chunk_starts(len(train_set), n, max_splits)]


@dataclass
class CurvePoint:
    n: int
    per_split_accuracies: list[float]
    split_ids: list[int] = field(default_factory=list)
    failed_splits: list[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.per_split_accuracies)

    @property
    def mean_accuracy(self) -> float | None:
        return fmean(self.per_split_accuracies) if self.per_split_accuracies else None


def learning_curve(
    train_set: Dataset,
    dev: Dataset,
    backend: str,
    sizes: Sequence[int] | None = None,
    config: dict[str, Any] | None = None,
    lexicon: Lexicon | None = None,
    max_splits: int = DEFAULT_MAX_SPLITS,
    threads: int = 1,
) -> list[CurvePoint]:
    """Train one model per chunk for each size and score it on ``dev``.

    A split whose training fails is recorded in ``failed_splits`` and the
    run carries on.
    """
    if sizes is None:
        sizes = [s for s in DEFAULT_SIZES if s <= len(train_set)]
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ConfigurationError("learning-curve sizes must be sorted ascending")
    gold = dev.targets
    points = []
    for n in sizes:
        if n > len(train_set):
            log.warning("skipping size %d: training set has only %d pairs", n, len(train_set))
            continue
        point = CurvePoint(n, [])
        for i, chunk in enumerate(make_splits(train_set, n, max_splits)):
            try:
                model = train(backend, chunk, lexicon, config)
            except SpellnormError as exc:
                log.warning("size %d split %d failed: %s", n, i, exc)
                point.failed_splits.append(i)
                continue
            pred = normalize_all(model, dev.sources, threads)
            point.per_split_accuracies.append(word_accuracy(gold, pred))
            point.split_ids.append(i)
        points.append(point)
    return points


def write_curve_csv(backend: str, points: Sequence[CurvePoint], out: TextIO) -> None:
    """``backend,n,split,accuracy`` rows plus a ``mean`` row per size."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["backend", "n", "split", "accuracy"])
    for point in points:
        for i, acc in zip(point.split_ids, point.per_split_accuracies):
            writer.writerow([backend, point.n, i, repr(acc)])
        mean = point.mean_accuracy
        writer.writerow([backend, point.n, "mean", "" if mean is None else repr(mean)])
