"""Evaluation metrics: accuracy, baselines, CER, stem accuracy, seen/unseen, McNemar."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .aligner import edit_distance
from .corpus import Dataset, TokenPair
from .errors import ConfigurationError, EvaluationError
from .lookup import majority_map
from .stemmer import UNSUPPORTED_LANGUAGES, StemmerSpec, get_stemmer, stem

REPORT_FORMAT = "spellnorm-eval-report"
REPORT_VERSION = 1

CHI2_CRITICAL_05 = 3.841
EXACT_TEST_BELOW = 25
ALPHA = 0.05


def _check_aligned(gold: Sequence[str], pred: Sequence[str]) -> None:
    if len(gold) != len(pred):
        raise EvaluationError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted tokens")


def correctness(gold: Sequence[str], pred: Sequence[str]) -> list[bool]:
    _check_aligned(gold, pred)
    return [g == p for g, p in zip(gold, pred)]


def word_accuracy(gold: Sequence[str], pred: Sequence[str]) -> float:
    _check_aligned(gold, pred)
    if not gold:
        raise EvaluationError("cannot compute accuracy over zero tokens")
    return sum(correctness(gold, pred)) / len(gold)


def identity_baseline(dataset: Iterable[TokenPair]) -> float:
    """Share of pairs that need no normalization."""
    pairs = list(dataset)
    if not pairs:
        raise EvaluationError("identity baseline of an empty dataset")
    return sum(p.source == p.target for p in pairs) / len(pairs)


def maximum_accuracy(dataset: Iterable[TokenPair]) -> float:
    """Accuracy of the per-type majority map built on, and scored on, ``dataset``."""
    pairs = list(dataset)
    if not pairs:
        raise EvaluationError("maximum accuracy of an empty dataset")
    best = majority_map(pairs)
    return sum(best[p.source].target == p.target for p in pairs) / len(pairs)


def cer(gold: Sequence[str], pred: Sequence[str], incorrect_only: bool = False) -> float | None:
    """Mean per-token ``edit_distance(pred, gold) / len(gold)``.

    With ``incorrect_only`` the mean runs over wrongly normalized tokens
    only; ``None`` if no token is selected.
    """
    _check_aligned(gold, pred)
    rates = [
        edit_distance(p, g) / len(g)
        for g, p in zip(gold, pred)
        if not (incorrect_only and g == p)
    ]
    if not rates:
        return None
    return sum(rates) / len(rates)


def resolve_stemmer(language_or_spec: str | StemmerSpec | None) -> tuple[StemmerSpec | None, str | None]:
    """Stemmer for the argument, or ``(None, reason)`` when there is none."""
    if language_or_spec is None:
        return None, "no stemmer language given"
    if isinstance(language_or_spec, StemmerSpec):
        return language_or_spec, None
    if language_or_spec in UNSUPPORTED_LANGUAGES:
        return None, f"unsupported: no stemmer for {language_or_spec!r}"
    try:
        return get_stemmer(language_or_spec), None
    except ConfigurationError as exc:
        return None, f"unsupported: {exc}"


def stem_accuracy_incorrect(
    gold: Sequence[str], pred: Sequence[str], spec: str | StemmerSpec | None
) -> float | None:
    """Among wrong predictions, the share whose stem equals the gold stem."""
    _check_aligned(gold, pred)
    stemmer, _ = resolve_stemmer(spec)
    if stemmer is None:
        return None
    wrong = [(g, p) for g, p in zip(gold, pred) if g != p]
    if not wrong:
        return None
    return sum(stem(stemmer, g) == stem(stemmer, p) for g, p in wrong) / len(wrong)


@dataclass
class SubReport:
    n: int
    n_correct: int

    @property
    def accuracy(self) -> float | None:
        return self.n_correct / self.n if self.n else None


def seen_unseen_split(
    train_vocab: set[str] | frozenset[str],
    gold: Sequence[str],
    pred: Sequence[str],
    source: Sequence[str],
) -> tuple[SubReport, SubReport]:
    _check_aligned(gold, pred)
    _check_aligned(gold, source)
    seen, unseen = SubReport(0, 0), SubReport(0, 0)
    for g, p, s in zip(gold, pred, source):
        part = seen if s in train_vocab else unseen
        part.n += 1
        part.n_correct += g == p
    return seen, unseen


# -- significance ---------------------------------------------------------------


@dataclass(frozen=True)
class Contingency:
    """Per-token outcome counts; ``n01`` = A wrong and B right."""

    n00: int
    n01: int
    n10: int
    n11: int

    def __post_init__(self):
        if min(self.n00, self.n01, self.n10, self.n11) < 0:
            raise ValueError("contingency counts must be non-negative")

    @property
    def total(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    @classmethod
    def from_vectors(cls, a: Sequence[bool], b: Sequence[bool]) -> "Contingency":
        if len(a) != len(b):
            raise EvaluationError(f"correctness vectors differ in length: {len(a)} vs {len(b)}")
        counts = [0, 0, 0, 0]
        for x, y in zip(a, b):
            counts[2 * bool(x) + bool(y)] += 1
        return cls(*counts)


class McNemarResult(NamedTuple):
    statistic: float
    significant: bool
    p_value: float
    exact: bool


def binomial_two_sided(k: int, n: int) -> float:
    """Exact two-sided p-value of ``k`` successes in ``n`` fair coin flips."""
    k = min(k, n - k)
    tail = sum(math.comb(n, i) for i in range(k + 1)) / 2**n
    return min(1.0, 2 * tail)


def mcnemar(c: Contingency) -> McNemarResult:
    """McNemar's test on the discordant counts.

    The statistic is always the continuity-corrected chi-square value.  The
    verdict uses it (against 3.841) when there are at least 25 discordant
    tokens, and the exact binomial test below that.
    """
    discordant = c.n01 + c.n10
    if discordant == 0:
        return McNemarResult(0.0, False, 1.0, True)
    statistic = (abs(c.n01 - c.n10) - 1) ** 2 / discordant
    if discordant < EXACT_TEST_BELOW:
        p = binomial_two_sided(min(c.n01, c.n10), discordant)
        return McNemarResult(statistic, p < ALPHA, p, True)
    p = math.erfc(math.sqrt(statistic / 2))
    return McNemarResult(statistic, statistic > CHI2_CRITICAL_05, p, False)


def compare_systems(a: Sequence[bool], b: Sequence[bool]) -> tuple[Contingency, McNemarResult]:
    c = Contingency.from_vectors(a, b)
    return c, mcnemar(c)


def significance_marks(systems: dict[str, Sequence[bool]]) -> dict[str, str]:
    """Mark each system against the most accurate one.

    ``"best"`` for the top system, ``"*"`` where the difference to it is not
    significant, ``""`` otherwise.
    """
    if not systems:
        return {}
    best = max(systems, key=lambda name: (sum(systems[name]), name))
    marks = {}
    for name, vector in systems.items():
        if name == best:
            marks[name] = "best"
        else:
            marks[name] = "" if compare_systems(systems[best], vector)[1].significant else "*"
    return marks


# -- reports ----------------------------------------------------------------------


@dataclass
class EvalReport:
    n_total: int
    n_correct: int
    word_accuracy: float
    identity_baseline: float | None
    maximum_accuracy: float | None
    cer: float
    cer_incorrect: float | None
    stem_accuracy_incorrect: float | None
    seen: SubReport | None
    unseen: SubReport | None
    per_token_correctness: list[bool]
    name: str = ""
    absent: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["per_token_correctness"] = "".join("1" if x else "0" for x in self.per_token_correctness)
        return {"format": REPORT_FORMAT, "version": REPORT_VERSION, **data}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        if data.get("format") != REPORT_FORMAT:
            raise EvaluationError(f"not an evaluation report (format={data.get('format')!r})")
        if data.get("version") != REPORT_VERSION:
            raise EvaluationError(f"unsupported report version {data.get('version')!r}")
        data = {k: v for k, v in data.items() if k not in ("format", "version")}
        data["per_token_correctness"] = [ch == "1" for ch in data["per_token_correctness"]]
        for part in ("seen", "unseen"):
            if data[part] is not None:
                data[part] = SubReport(**data[part])
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        return cls.from_dict(json.loads(text))

    def table_row(self) -> dict[str, object]:
        """Flat view for assembling result tables."""

        def pct(x):
            return None if x is None else round(100 * x, 2)

        return {
            "name": self.name,
            "n": self.n_total,
            "accuracy": pct(self.word_accuracy),
            "identity": pct(self.identity_baseline),
            "maximum": pct(self.maximum_accuracy),
            "cer": self.cer,
            "cer_i": self.cer_incorrect,
            "stem_acc_i": pct(self.stem_accuracy_incorrect),
            "seen_n": self.seen.n if self.seen else None,
            "seen_acc": pct(self.seen.accuracy) if self.seen else None,
            "unseen_n": self.unseen.n if self.unseen else None,
            "unseen_acc": pct(self.unseen.accuracy) if self.unseen else None,
        }


def evaluate(
    gold: Sequence[str],
    pred: Sequence[str],
    source: Sequence[str] | None = None,
    train_vocab: set[str] | frozenset[str] | None = None,
    stemmer: str | StemmerSpec | None = None,
    name: str = "",
) -> EvalReport:
    """Full report for one system's predictions.

    ``source`` enables the identity/maximum baselines; ``train_vocab``
    (with ``source``) enables the seen/unseen breakdown.
    """
    flags = correctness(gold, pred)
    if not flags:
        raise EvaluationError("cannot evaluate zero tokens")
    absent: dict[str, str] = {}
    ident = maximum = None
    seen = unseen = None
    if source is not None:
        _check_aligned(gold, source)
        pairs = [TokenPair(s, g) for s, g in zip(source, gold)]
        ident = identity_baseline(pairs)
        maximum = maximum_accuracy(pairs)
        if train_vocab is not None:
            seen, unseen = seen_unseen_split(train_vocab, gold, pred, source)
        else:
            absent["seen_unseen"] = "no training vocabulary given"
    else:
        absent["identity_baseline"] = absent["maximum_accuracy"] = "no source tokens given"
        absent["seen_unseen"] = "no source tokens given"
    cer_i = cer(gold, pred, incorrect_only=True)
    if cer_i is None:
        absent["cer_incorrect"] = "no incorrect predictions"
    spec, reason = resolve_stemmer(stemmer)
    stem_acc = stem_accuracy_incorrect(gold, pred, spec) if spec is not None else None
    if stem_acc is None:
        absent["stem_accuracy_incorrect"] = reason or "no incorrect predictions"
    return EvalReport(
        n_total=len(flags),
        n_correct=sum(flags),
        word_accuracy=sum(flags) / len(flags),
        identity_baseline=ident,
        maximum_accuracy=maximum,
        cer=cer(gold, pred),
        cer_incorrect=cer_i,
        stem_accuracy_incorrect=stem_acc,
        seen=seen,
        unseen=unseen,
        per_token_correctness=flags,
        name=name,
        absent=absent,
    )


def evaluate_dataset(
    dataset: Dataset,
    pred: Sequence[str],
    train_vocab=None,
    stemmer=None,
    name: str = "",
) -> EvalReport:
    return evaluate(dataset.targets, pred, dataset.sources, train_vocab, stemmer, name)
