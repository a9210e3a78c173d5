"""Character-level Levenshtein alignment with optional learned costs.

``weights`` arguments take any object with a ``cost(source, target)``
method, where either side may be the empty string (insert/delete).  The
learned :class:`~spellnorm.distance.EditWeightMatrix` is the usual one;
``None`` means unit costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Protocol

MATCH, SUBSTITUTE, INSERT, DELETE = "match", "substitute", "insert", "delete"


class CostModel(Protocol):
    def cost(self, source: str, target: str) -> float: ...


class EditOp(NamedTuple):
    kind: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"{self.kind}({self.source or '-'}>{self.target or '-'})"


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]

    @property
    def source(self) -> str:
        return "".join(op.source for op in self.ops)

    @property
    def target(self) -> str:
        return "".join(op.target for op in self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def cost(self, weights: CostModel | None = None) -> float:
        if weights is None:
            return float(sum(op.kind != MATCH for op in self.ops))
        return sum(weights.cost(op.source, op.target) for op in self.ops)


def _unit_distance(a: str, b: str, bound: float) -> float:
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        if min(current) > bound:
            return math.inf
        previous = current
    return float(previous[-1])


def edit_distance(
    a: str, b: str, weights: CostModel | None = None, bound: float = math.inf
) -> float:
    """Minimal total edit cost turning ``a`` into ``b``.

    If ``bound`` is given, the computation may stop early and return
    ``inf`` once every cell of a DP row exceeds it.
    """
    if weights is None:
        return _unit_distance(a, b, bound)
    cost = weights.cost
    ins = [cost("", cb) for cb in b]
    previous = [0.0]
    for c in ins:
        previous.append(previous[-1] + c)
    for ca in a:
        dele = cost(ca, "")
        current = [previous[0] + dele]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j - 1] + cost(ca, cb),
                    previous[j] + dele,
                    current[j - 1] + ins[j - 1],
                )
            )
        if min(current) > bound:
            return math.inf
        previous = current
    return previous[-1]


def _table(a: str, b: str, weights: CostModel | None) -> list[list[float]]:
    if weights is None:
        cost = lambda s, t: 0.0 if s == t else 1.0  # noqa: E731
    else:
        cost = weights.cost
    n, m = len(a), len(b)
    d = [[0.0] * (m + 1) for _ in range(n + 1)]
    for j in range(1, m + 1):
        d[0][j] = d[0][j - 1] + cost("", b[j - 1])
    for i in range(1, n + 1):
        d[i][0] = d[i - 1][0] + cost(a[i - 1], "")
        for j in range(1, m + 1):
            d[i][j] = min(
                d[i - 1][j - 1] + cost(a[i - 1], b[j - 1]),
                d[i - 1][j] + cost(a[i - 1], ""),
                d[i][j - 1] + cost("", b[j - 1]),
            )
    return d


def align(a: str, b: str, weights: CostModel | None = None) -> Alignment:
    """One optimal alignment of ``a`` to ``b``.

    Backtracking starts at the end of both strings and prefers, among
    optimal moves, match > substitute > delete > insert, which makes the
    result reproducible.
    """
    if weights is None:
        cost = lambda s, t: 0.0 if s == t else 1.0  # noqa: E731
    else:
        cost = weights.cost
    d = _table(a, b, weights)
    ops: list[EditOp] = []
    i, j = len(a), len(b)
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0:
            ca, cb = a[i - 1], b[j - 1]
            if d[i - 1][j - 1] + cost(ca, cb) == here:
                ops.append(EditOp(MATCH if ca == cb else SUBSTITUTE, ca, cb))
                i, j = i - 1, j - 1
                continue
        if i > 0 and d[i - 1][j] + cost(a[i - 1], "") == here:
            ops.append(EditOp(DELETE, a[i - 1], ""))
            i -= 1
            continue
        ops.append(EditOp(INSERT, "", b[j - 1]))
        j -= 1
    ops.reverse()
    return Alignment(tuple(ops))
