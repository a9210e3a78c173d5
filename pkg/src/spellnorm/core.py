"""Normalizer contract shared by all backends.

:func:`train` builds a :class:`NormalizerModel` for a backend id,
:func:`normalize` maps one token to exactly one :class:`Candidate`, and
:func:`normalize_hybrid` implements the lookup-on-seen / model-on-unseen
strategy.  Models serialize to a versioned JSON container.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import channel as channel_mod
from . import distance as distance_mod
from .candidate import Candidate, identity
from .channel import CharLM, ChannelModel, SubstitutionTable
from .corpus import Dataset, Lexicon, TokenPair
from .distance import EditWeightMatrix, LexiconIndex
from .errors import ConfigurationError, TrainingError
from .lookup import LookupTable, lookup_normalize, train_lookup
from .rules import RuleSet, apply_rules, learn_rules

MODEL_FORMAT = "spellnorm-model"
MODEL_VERSION = 1

LOOKUP, RULES, DISTANCE, CHAIN, CHANNEL, HYBRID = (
    "lookup", "rules", "distance", "chain", "channel", "hybrid",
)
BACKENDS = (LOOKUP, RULES, DISTANCE, CHAIN, CHANNEL)
NEEDS_LEXICON = (DISTANCE, CHAIN)

DEFAULT_CONFIG: dict[str, dict[str, Any]] = {
    LOOKUP: {},
    RULES: {},
    DISTANCE: {"iterations": distance_mod.DEFAULT_ITERATIONS, "threshold": distance_mod.DEFAULT_THRESHOLD},
    CHAIN: {"iterations": distance_mod.DEFAULT_ITERATIONS, "threshold": distance_mod.DEFAULT_THRESHOLD},
    CHANNEL: {
        "order": channel_mod.DEFAULT_ORDER,
        "max_unit": channel_mod.DEFAULT_MAX_UNIT,
        "beam_width": channel_mod.DEFAULT_BEAM,
        "lm_weight": channel_mod.DEFAULT_LM_WEIGHT,
        "use_lexicon_lm": False,
    },
}


@dataclass(frozen=True)
class DistanceModel:
    weights: EditWeightMatrix
    lexicon: Lexicon
    threshold: float = distance_mod.DEFAULT_THRESHOLD

    @cached_property
    def index(self) -> LexiconIndex:
        return LexiconIndex(self.lexicon)

    def normalize(self, token: str) -> Candidate:
        return distance_mod.distance_normalize(self.weights, self.index, token, self.threshold)


@dataclass(frozen=True)
class ChainModel:
    """Lookup, then lexicon-verified rules, then thresholded distance, then identity.

    Rules are only consulted together with a distance model, since their
    output is checked against its lexicon.  Missing submodels are skipped.
    """

    lookup: LookupTable
    rules: RuleSet | None = None
    distance: DistanceModel | None = None

    def normalize(self, token: str) -> Candidate:
        if token in self.lookup:
            return lookup_normalize(self.lookup, token)
        if self.distance is None:
            return identity(token, CHAIN)
        if self.rules is not None:
            candidate = apply_rules(self.rules, token)
            if not candidate.is_fallback and candidate.form in self.distance.lexicon:
                return candidate
        candidate = self.distance.normalize(token)
        if not candidate.is_fallback:
            return candidate
        return identity(token, CHAIN)


@dataclass(frozen=True)
class HybridModel:
    lookup: "NormalizerModel"
    backoff: "NormalizerModel"


@dataclass(frozen=True)
class NormalizerModel:
    backend: str
    state: Any
    source_vocabulary: frozenset[str]
    config: dict[str, Any] = field(default_factory=dict)

    def normalize(self, token: str) -> Candidate:
        return normalize(self, token)


def _resolve_config(backend: str, config: dict[str, Any] | None) -> dict[str, Any]:
    merged = dict(DEFAULT_CONFIG[backend])
    for key, value in (config or {}).items():
        if key not in merged:
            raise ConfigurationError(
                f"unknown option {key!r} for backend {backend!r}; known: {sorted(merged)}"
            )
        merged[key] = value
    return merged


def train(
    backend: str,
    pairs: Dataset | Sequence[TokenPair],
    lexicon: Lexicon | None = None,
    config: dict[str, Any] | None = None,
    extra_lm: Iterable[str] | None = None,
) -> NormalizerModel:
    """Train one backend.

    ``extra_lm`` adds monolingual target-side words to the channel model's
    language model; ``use_lexicon_lm`` does the same with the lexicon types.
    """
    if backend not in BACKENDS:
        raise ConfigurationError(f"unknown backend {backend!r}; choose from {', '.join(BACKENDS)}")
    if backend in NEEDS_LEXICON and lexicon is None:
        raise ConfigurationError(f"backend {backend!r} needs a lexicon")
    cfg = _resolve_config(backend, config)
    pairs = list(pairs)
    if not pairs and backend != LOOKUP:
        raise TrainingError(f"backend {backend!r} needs at least one training pair")
    vocab = frozenset(p.source for p in pairs)

    if backend == LOOKUP:
        state: Any = train_lookup(pairs)
    elif backend == RULES:
        state = learn_rules(pairs)
    elif backend == DISTANCE:
        weights = distance_mod.learn_weights(pairs, cfg["iterations"])
        state = DistanceModel(weights, lexicon, cfg["threshold"])
    elif backend == CHAIN:
        weights = distance_mod.learn_weights(pairs, cfg["iterations"])
        state = ChainModel(
            train_lookup(pairs), learn_rules(pairs), DistanceModel(weights, lexicon, cfg["threshold"])
        )
    else:
        extra = list(extra_lm or [])
        if cfg["use_lexicon_lm"]:
            if lexicon is None:
                raise ConfigurationError("use_lexicon_lm requires a lexicon")
            extra.extend(sorted(lexicon.entries))
        state = channel_mod.train_channel(
            pairs,
            extra_lm=extra or None,
            order=cfg["order"],
            max_unit=cfg["max_unit"],
            lm_weight=cfg["lm_weight"],
            beam_width=cfg["beam_width"],
        )
    return NormalizerModel(backend, state, vocab, cfg)


def make_hybrid(lookup: NormalizerModel, backoff: NormalizerModel) -> NormalizerModel:
    _check_hybrid(lookup, backoff)
    return NormalizerModel(HYBRID, HybridModel(lookup, backoff), lookup.source_vocabulary, {})


def _check_hybrid(lookup: NormalizerModel, backoff: NormalizerModel) -> None:
    if lookup.backend != LOOKUP:
        raise ConfigurationError(f"hybrid needs a lookup model first, got {lookup.backend!r}")
    if lookup.source_vocabulary != backoff.source_vocabulary:
        raise ConfigurationError(
            "lookup and backoff models were trained on different data "
            f"({len(lookup.source_vocabulary)} vs {len(backoff.source_vocabulary)} source types)"
        )


def normalize_hybrid(lookup: NormalizerModel, backoff: NormalizerModel, token: str) -> Candidate:
    _check_hybrid(lookup, backoff)
    if token in lookup.source_vocabulary:
        return normalize(lookup, token)
    return normalize(backoff, token)


def normalize(model: NormalizerModel, token: str) -> Candidate:
    backend, state = model.backend, model.state
    if backend == LOOKUP:
        return lookup_normalize(state, token)
    if backend == RULES:
        return apply_rules(state, token)
    if backend in (DISTANCE, CHAIN):
        return state.normalize(token)
    if backend == CHANNEL:
        return channel_mod.decode(state, token)
    if backend == HYBRID:
        if token in state.lookup.source_vocabulary:
            return normalize(state.lookup, token)
        return normalize(state.backoff, token)
    raise ConfigurationError(f"unknown backend {backend!r}")


def _normalize_types(args: tuple[NormalizerModel, list[str]]) -> list[str]:
    model, tokens = args
    return [normalize(model, t).form for t in tokens]


def normalize_all(model: NormalizerModel, tokens: Sequence[str], threads: int = 1) -> list[str]:
    """Normalized forms for a token stream; each distinct type is decoded once."""
    types = sorted(set(tokens))
    if threads > 1 and len(types) > threads:
        chunks = [types[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(_normalize_types, [(model, c) for c in chunks])
            forms = {}
            for chunk, out in zip(chunks, results):
                forms.update(zip(chunk, out))
    else:
        forms = dict(zip(types, _normalize_types((model, types))))
    return [forms[t] for t in tokens]


# -- serialization ----------------------------------------------------------------


def _channel_payload(model: ChannelModel) -> dict:
    return {
        "table": {
            "max_unit": model.table.max_unit,
            "counts": model.table.counts,
            "entries": model.table.entries,
        },
        "lm": {
            "order": model.lm.order,
            "alphabet": sorted(model.lm.alphabet),
            "counts": model.lm.counts,
        },
        "lm_weight": model.lm_weight,
        "beam_width": model.beam_width,
    }


def _channel_from(payload: dict) -> ChannelModel:
    t, lm = payload["table"], payload["lm"]
    return ChannelModel(
        SubstitutionTable(t["entries"], t["counts"], t["max_unit"]),
        CharLM(lm["order"], lm["counts"], frozenset(lm["alphabet"])),
        payload["lm_weight"],
        payload["beam_width"],
    )


def _distance_payload(model: DistanceModel) -> dict:
    return {
        "weights": model.weights.to_lines(),
        "lexicon": dict(sorted(model.lexicon.entries.items())),
        "threshold": model.threshold,
    }


def _distance_from(payload: dict) -> DistanceModel:
    return DistanceModel(
        EditWeightMatrix.from_lines(payload["weights"]), Lexicon(payload["lexicon"]), payload["threshold"]
    )


def model_to_dict(model: NormalizerModel) -> dict:
    backend, state = model.backend, model.state
    if backend == LOOKUP:
        payload: dict = {"table": state.to_lines()}
    elif backend == RULES:
        payload = {"rules": state.to_lines()}
    elif backend == DISTANCE:
        payload = _distance_payload(state)
    elif backend == CHAIN:
        payload = {
            "lookup": state.lookup.to_lines(),
            "rules": None if state.rules is None else state.rules.to_lines(),
            "distance": None if state.distance is None else _distance_payload(state.distance),
        }
    elif backend == CHANNEL:
        payload = _channel_payload(state)
    elif backend == HYBRID:
        payload = {"lookup": model_to_dict(state.lookup), "backoff": model_to_dict(state.backoff)}
    else:
        raise ConfigurationError(f"unknown backend {backend!r}")
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "backend": backend,
        "config": model.config,
        "source_vocabulary": sorted(model.source_vocabulary),
        "payload": payload,
    }


def model_from_dict(data: dict) -> NormalizerModel:
    if data.get("format") != MODEL_FORMAT:
        raise ConfigurationError(f"not a model file (format={data.get('format')!r})")
    if data.get("version") != MODEL_VERSION:
        raise ConfigurationError(f"unsupported model version {data.get('version')!r}")
    backend, payload = data["backend"], data["payload"]
    if backend == LOOKUP:
        state: Any = LookupTable.from_lines(payload["table"])
    elif backend == RULES:
        state = RuleSet.from_lines(payload["rules"])
    elif backend == DISTANCE:
        state = _distance_from(payload)
    elif backend == CHAIN:
        rules, dist = payload.get("rules"), payload.get("distance")
        state = ChainModel(
            LookupTable.from_lines(payload["lookup"]),
            None if rules is None else RuleSet.from_lines(rules),
            None if dist is None else _distance_from(dist),
        )
    elif backend == CHANNEL:
        state = _channel_from(payload)
    elif backend == HYBRID:
        state = HybridModel(model_from_dict(payload["lookup"]), model_from_dict(payload["backoff"]))
    else:
        raise ConfigurationError(f"unknown backend {backend!r}")
    return NormalizerModel(backend, state, frozenset(data["source_vocabulary"]), data["config"])


def dumps_model(model: NormalizerModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def loads_model(text: str) -> NormalizerModel:
    return model_from_dict(json.loads(text))


def save_model(model: NormalizerModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path) -> NormalizerModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))
