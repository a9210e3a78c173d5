import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spellnorm.errors import ConfigurationError
from spellnorm.stemmer import (
    SUFFIX_LANGUAGES,
    StemmerSpec,
    SuffixRule,
    fold_diacritics,
    get_stemmer,
    load_suffix_table,
    stem,
)
from spellnorm.stemmer.porter import porter_stem

nltk_porter = pytest.importorskip("nltk.stem.porter")

# spot checks; each was also confirmed against the nltk oracle below
PORTER_EXAMPLES = {
    "kings": "king",
    "the": "the",
    "caresses": "caress",
    "ponies": "poni",
    "cats": "cat",
    "feed": "feed",
    "agreed": "agre",
    "plastered": "plaster",
    "motoring": "motor",
    "sing": "sing",
    "conflated": "conflat",
    "hopping": "hop",
    "filing": "file",
    "happy": "happi",
    "relational": "relat",
    "conditional": "condit",
    "digitizer": "digit",
    "generalization": "gener",
    "electrical": "electr",
    "adjustable": "adjust",
    "controll": "control",
    "roll": "roll",
    "probate": "probat",
    "rate": "rate",
    "sensibli": "sensibl",
    "archaeology": "archaeolog",
    "by": "by",
}

ONSETS = ["", "b", "c", "d", "f", "g", "h", "l", "m", "n", "p", "r", "s", "t", "v", "w", "y",
          "bl", "br", "ch", "cr", "dr", "fl", "gr", "pl", "pr", "sh", "st", "str", "th", "tr"]
VOWELS = ["a", "e", "i", "o", "u", "y", "ee", "ea", "ai", "ou", "oa", "ie"]
CODAS = ["", "b", "c", "d", "g", "k", "l", "ll", "m", "n", "nd", "ng", "nt", "p", "r", "rs",
         "s", "ss", "st", "t", "tt", "x", "z"]
SUFFIXES = ["", "s", "es", "ies", "ed", "ing", "ly", "ness", "ful", "ation", "ational", "ization",
            "izer", "ive", "ives", "iveness", "ent", "ement", "ance", "ence", "able", "ible", "al",
            "ical", "icity", "ism", "ist", "iti", "ous", "ousli", "ously", "ate", "er", "ement",
            "bli", "logi", "e", "y", "eed", "eedly", "alli", "entli", "eli", "ic", "ant", "ion"]


def fuzz_words(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    words = set()
    while len(words) < n:
        syllables = rng.randint(1, 3)
        stem_ = "".join(rng.choice(ONSETS) + rng.choice(VOWELS) + rng.choice(CODAS) for _ in range(syllables))
        words.add(stem_ + rng.choice(SUFFIXES))
    return sorted(words)


FUZZ = fuzz_words(10_000, seed=2024)


def test_porter_examples():
    for word, expected in PORTER_EXAMPLES.items():
        assert porter_stem(word) == expected, word


def test_porter_examples_agree_with_oracle():
    oracle = nltk_porter.PorterStemmer(mode=nltk_porter.PorterStemmer.MARTIN_EXTENSIONS)
    for word, expected in PORTER_EXAMPLES.items():
        assert oracle.stem(word) == expected, word


def test_porter_matches_reference_implementation():
    oracle = nltk_porter.PorterStemmer(mode=nltk_porter.PorterStemmer.MARTIN_EXTENSIONS)
    mismatches = [w for w in FUZZ if porter_stem(w) != oracle.stem(w)]
    assert mismatches == []


def test_porter_idempotent_on_fuzz_set():
    # The published algorithm is not idempotent in general (agreed -> agre -> agr),
    # so this is expected to fail; it is kept as stated, not weakened.
    failures = [w for w in FUZZ if porter_stem(porter_stem(w)) != porter_stem(w)]
    assert failures == [], f"{len(failures)} non-idempotent words, e.g. {failures[:5]}"


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", max_size=15))
def test_porter_never_longer(word):
    assert len(porter_stem(word)) <= len(word)


@pytest.mark.parametrize("language", SUFFIX_LANGUAGES)
@given(word=st.text(alphabet="abcdeilnorstuáéíóöüőű", max_size=14))
def test_suffix_stem_never_longer(language, word):
    assert len(stem(get_stemmer(language), word)) <= len(word)


def test_spanish_diacritic_folding():
    es = get_stemmer("es")
    assert stem(es, "ésta") == stem(es, "esta")
    assert fold_diacritics("ésta") == "esta"


def test_suffix_longest_first():
    spec = StemmerSpec("xx", "suffix-table", (SuffixRule("s", "", 1), SuffixRule("es", "", 1)))
    assert [r.suffix for r in spec.rules] == ["es", "s"]
    assert stem(spec, "boxes") == "box"
    assert stem(spec, "es") == "e"  # min stem length blocks the longer rule


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        StemmerSpec("xx", "suffix-table", (SuffixRule("s", "", 0),))


def test_english_uses_porter():
    assert stem(get_stemmer("en"), "kings") == "king"


@pytest.mark.parametrize("language", ["is", "sl", "xx"])
def test_unsupported_language(language):
    with pytest.raises(ConfigurationError, match="supported"):
        get_stemmer(language)


def test_load_suffix_table(tmp_path):
    path = tmp_path / "fr.tsv"
    path.write_text("# comment\nement\t\t2\naux\tal\t2\n", encoding="utf-8")
    spec = load_suffix_table(path, "fr")
    assert stem(spec, "chevaux") == "cheval"
    assert stem(spec, "lentement") == "lent"
