"""Train, apply and evaluate token-level historical spelling normalizers."""

from .candidate import Candidate
from .core import (
    BACKENDS,
    NormalizerModel,
    load_model,
    make_hybrid,
    normalize,
    normalize_all,
    normalize_hybrid,
    save_model,
    train,
)
from .corpus import Dataset, Lexicon, TokenPair, build_lexicon, load_dataset, preprocess_pair
from .evaluation import EvalReport, evaluate, mcnemar, word_accuracy

__version__ = "0.1.0"

__all__ = [
    "BACKENDS",
    "Candidate",
    "Dataset",
    "EvalReport",
    "Lexicon",
    "NormalizerModel",
    "TokenPair",
    "build_lexicon",
    "evaluate",
    "load_dataset",
    "load_model",
    "make_hybrid",
    "mcnemar",
    "normalize",
    "normalize_all",
    "normalize_hybrid",
    "preprocess_pair",
    "save_model",
    "train",
    "word_accuracy",
]
