"""Character-level noisy-channel normalizer.

A substitution table ``p(target_unit | source_unit)`` over short character
units, a character n-gram language model over normalized forms, and a
monotone beam-search decoder combining the two in log space.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .aligner import MATCH, align
from .candidate import Candidate, identity
from .corpus import TokenPair
from .errors import ConfigurationError, TrainingError

ORIGIN = "channel"

BOS = "\ue000"
EOS = "\ue001"

SMOOTHING = 0.1
COPY_LOGPROB = math.log(1e-4)
UNK_LM_LOGPROB = math.log(1e-6)

DEFAULT_ORDER = 5
DEFAULT_MAX_UNIT = 3
MAX_TARGET_UNIT = 3
DEFAULT_BEAM = 10
DEFAULT_LM_WEIGHT = 1.0


# -- language model -----------------------------------------------------------


@dataclass(frozen=True)
class CharLM:
    """Character n-gram model with interpolated Witten-Bell smoothing.

    ``counts`` maps every context of length ``0..order-1`` to the counts of
    the characters (including :data:`EOS`) that followed it.  Words are
    padded on the left with ``order - 1`` copies of :data:`BOS`.
    """

    order: int
    counts: dict[str, dict[str, int]]
    alphabet: frozenset[str] = field(default_factory=frozenset)

    @property
    def vocabulary_size(self) -> int:
        return len(self.alphabet) + 1  # + EOS

    @cached_property
    def _context_stats(self) -> dict[str, tuple[int, int]]:
        return {ctx: (sum(f.values()), len(f)) for ctx, f in self.counts.items()}

    def prob(self, char: str, history: str) -> float:
        """``p(char | history)``; ``char`` may be :data:`EOS`."""
        if char != EOS and char not in self.alphabet:
            return 0.0
        history = (BOS * (self.order - 1) + history)[-(self.order - 1):] if self.order > 1 else ""
        p = 1.0 / self.vocabulary_size
        for k in range(len(history) + 1):
            ctx = history[len(history) - k:]
            following = self.counts.get(ctx)
            if following is None:
                break
            total, types = self._context_stats[ctx]
            p = (following.get(char, 0) + types * p) / (total + types)
        return p

    def logprob(self, char: str, history: str) -> float:
        p = self.prob(char, history)
        return math.log(p) if p > 0 else UNK_LM_LOGPROB

    def score(self, word: str) -> float:
        """Log probability of ``word`` followed by end-of-word."""
        total = 0.0
        for i, char in enumerate(word):
            total += self.logprob(char, word[:i])
        return total + self.logprob(EOS, word)


def train_lm(
    targets: Iterable[str], extra_corpus: Iterable[str] | None = None, order: int = DEFAULT_ORDER
) -> CharLM:
    if order < 1:
        raise ConfigurationError(f"LM order must be >= 1, got {order}")
    words = list(targets)
    if extra_corpus is not None:
        words.extend(extra_corpus)
    if not words:
        raise TrainingError("language model needs at least one training string")
    counts: dict[str, Counter] = defaultdict(Counter)
    alphabet: set[str] = set()
    pad = BOS * (order - 1)
    for word in words:
        alphabet.update(word)
        padded = pad + word + EOS
        for i in range(len(pad), len(padded)):
            char = padded[i]
            for k in range(order):
                counts[padded[i - k:i]][char] += 1
    frozen = {ctx: dict(sorted(c.items())) for ctx, c in sorted(counts.items())}
    return CharLM(order, frozen, frozenset(alphabet))


# -- substitution table -------------------------------------------------------


@dataclass(frozen=True)
class SubstitutionTable:
    """``p(target_unit | source_unit)`` for source units of 1..max_unit characters."""

    entries: dict[str, dict[str, float]] = field(default_factory=dict)
    counts: dict[str, dict[str, int]] = field(default_factory=dict)
    max_unit: int = DEFAULT_MAX_UNIT

    def options(self, source_unit: str) -> dict[str, float]:
        return self.entries.get(source_unit, {})


def minimal_units(source: str, target: str, max_unit: int) -> list[tuple[str, str]]:
    """Alignment-derived units: matches stay single, non-match runs merge.

    Runs of consecutive non-match operations become one unit, split so no
    unit covers more than ``max_unit`` source characters.  Insert-only
    runs are attached to the previous unit (the next one at word start),
    and deletion-only runs are joined with the following unit (the
    previous one at word end) when that fits in ``max_unit``, so a bare
    ``x -> ""`` unit only survives when nothing else is possible.
    """
    units: list[list[str]] = []
    run: list[list[str]] = []
    pending = ""

    def flush():
        nonlocal pending
        for s, t in run:
            if not s:
                if units:
                    units[-1][1] += t
                else:
                    pending += t
            else:
                units.append([s, pending + t])
                pending = ""
        run.clear()

    for op in align(source, target):
        if op.kind == MATCH:
            flush()
            units.append([op.source, pending + op.target])
            pending = ""
            continue
        if not run or (op.source and len(run[-1][0]) >= max_unit):
            run.append([op.source, op.target])
        else:
            run[-1][0] += op.source
            run[-1][1] += op.target
    flush()
    if pending:  # target longer than an empty source; cannot happen for real pairs
        units.append(["", pending])

    merged: list[list[str]] = []
    carry = ""  # deleted source chars waiting for the next unit
    for s, t in units:
        if carry and len(carry) + len(s) <= max_unit:
            s, carry = carry + s, ""
        elif carry:
            merged.append([carry, ""])
            carry = ""
        if s and not t:
            carry = s
            continue
        merged.append([s, t])
    if carry:
        if merged and len(merged[-1][0]) + len(carry) <= max_unit:
            merged[-1][0] += carry
        else:
            merged.append([carry, ""])
    return [(s, t) for s, t in merged]


def extract_units(pairs: Iterable[TokenPair], max_unit: int = DEFAULT_MAX_UNIT) -> SubstitutionTable:
    """Count every span of adjacent minimal units up to ``max_unit`` source chars.

    Probabilities are relative frequencies with add-``SMOOTHING`` over the
    observed targets of a source unit plus its identity rewrite.  Spans
    whose target exceeds ``MAX_TARGET_UNIT`` characters are not counted.
    """
    if not 1 <= max_unit <= 3:
        raise ConfigurationError(f"max_unit must be in [1, 3], got {max_unit}")
    counts: dict[str, Counter] = defaultdict(Counter)
    type_counts = Counter((p.source, p.target) for p in pairs)
    if not type_counts:
        raise TrainingError("cannot extract substitution units from an empty dataset")
    for (source, target), n in sorted(type_counts.items()):
        units = minimal_units(source, target, max_unit)
        for start in range(len(units)):
            src, tgt = "", ""
            for s, t in units[start:]:
                src += s
                tgt += t
                if len(src) > max_unit:
                    break
                if src and len(tgt) <= MAX_TARGET_UNIT:
                    counts[src][tgt] += n
    entries = {}
    frozen_counts = {}
    for src in sorted(counts):
        observed = dict(sorted(counts[src].items()))
        smoothed = {t: c + SMOOTHING for t, c in observed.items()}
        smoothed.setdefault(src, SMOOTHING)
        norm = sum(smoothed.values())
        entries[src] = {t: v / norm for t, v in sorted(smoothed.items())}
        frozen_counts[src] = observed
    return SubstitutionTable(entries, frozen_counts, max_unit)


# -- decoding -----------------------------------------------------------------


class Hypothesis(NamedTuple):
    form: str
    score: float
    units: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class ChannelModel:
    table: SubstitutionTable
    lm: CharLM
    lm_weight: float = DEFAULT_LM_WEIGHT
    beam_width: int = DEFAULT_BEAM

    def __post_init__(self):
        if self.beam_width < 1:
            raise ConfigurationError("beam_width must be >= 1")
        if not self.lm_weight > 0:
            raise ConfigurationError("lm_weight must be > 0")


def unit_options(table: SubstitutionTable, token: str, start: int) -> list[tuple[str, str, float]]:
    """``(source_unit, target_unit, log p)`` choices that consume ``token`` from ``start``."""
    options = []
    for k in range(1, table.max_unit + 1):
        if start + k > len(token):
            break
        src = token[start:start + k]
        for tgt, p in table.options(src).items():
            options.append((src, tgt, math.log(p)))
    if token[start] not in table.entries:
        options.append((token[start], token[start], COPY_LOGPROB))
    return options


def _extend_lm(lm: CharLM, prefix: str, addition: str) -> float:
    total = 0.0
    for char in addition:
        total += lm.logprob(char, prefix)
        prefix += char
    return total


def decode_hypothesis(model: ChannelModel, token: str) -> Hypothesis | None:
    """Best complete, non-empty hypothesis, or ``None`` if there is none.

    Hypotheses are grouped by the number of source characters consumed;
    each group keeps its ``beam_width`` best entries before expanding.
    Hypotheses with identical output in the same group are recombined.
    """
    n = len(token)
    buckets: list[dict[str, Hypothesis]] = [dict() for _ in range(n + 1)]
    buckets[0][""] = Hypothesis("", 0.0, ())
    options_at = [unit_options(model.table, token, i) for i in range(n)]
    for i in range(n):
        beam = sorted(buckets[i].values(), key=lambda h: (-h.score, h.form))[: model.beam_width]
        for hyp in beam:
            for src, tgt, logp in options_at[i]:
                score = hyp.score + logp + model.lm_weight * _extend_lm(model.lm, hyp.form, tgt)
                form = hyp.form + tgt
                bucket = buckets[i + len(src)]
                old = bucket.get(form)
                if old is None or score > old.score:
                    bucket[form] = Hypothesis(form, score, hyp.units + ((src, tgt),))
    finals = [
        h._replace(score=h.score + model.lm_weight * model.lm.logprob(EOS, h.form))
        for h in buckets[n].values()
        if h.form
    ]
    if not finals:
        return None
    return min(finals, key=lambda h: (-h.score, h.form))


def decode(model: ChannelModel, token: str) -> Candidate:
    hyp = decode_hypothesis(model, token)
    if hyp is None:
        return identity(token, ORIGIN)
    return Candidate(hyp.form, hyp.score, ORIGIN)


def derivation_score(model: ChannelModel, units: Sequence[tuple[str, str]]) -> float:
    """Recompute a derivation's score from its parts."""
    channel = 0.0
    for src, tgt in units:
        p = model.table.options(src).get(tgt)
        channel += math.log(p) if p is not None else COPY_LOGPROB
    form = "".join(t for _, t in units)
    return channel + model.lm_weight * model.lm.score(form)


def train_channel(
    pairs: Sequence[TokenPair],
    extra_lm: Iterable[str] | None = None,
    order: int = DEFAULT_ORDER,
    max_unit: int = DEFAULT_MAX_UNIT,
    lm_weight: float = DEFAULT_LM_WEIGHT,
    beam_width: int = DEFAULT_BEAM,
) -> ChannelModel:
    table = extract_units(pairs, max_unit)
    lm = train_lm([p.target for p in pairs], extra_lm, order)
    return ChannelModel(table, lm, lm_weight, beam_width)
