from __future__ import annotations

import math
from dataclasses import dataclass

# Score of an identity candidate produced because a backend had nothing to say.
SENTINEL_SCORE = -1e9


@dataclass(frozen=True)
class Candidate:
    """A proposed normalization; higher scores are better (log-space)."""

    form: str
    score: float
    origin: str

    def __post_init__(self):
        if not self.form:
            raise ValueError("candidate form must be non-empty")
        if not math.isfinite(self.score):
            raise ValueError(f"candidate score must be finite, got {self.score}")

    @property
    def is_fallback(self) -> bool:
        return self.score == SENTINEL_SCORE


def identity(token: str, origin: str) -> Candidate:
    return Candidate(token, SENTINEL_SCORE, origin)
