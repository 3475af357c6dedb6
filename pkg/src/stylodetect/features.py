"""Fixed document-level feature schema built from text statistics and a lexicon."""
from __future__ import annotations

import hashlib
import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateStats, EmptyDocument
from .lexicon import CATEGORIES, EmotionLexicon
from .textproc import TextStats, compute_stats, tokenize

STRUCTURAL_FEATURES = (
    "char_count",
    "word_count",
    "sentence_count",
    "avg_sentence_length",
    "avg_word_length",
    "exclamation_ratio",
    "question_ratio",
    "comma_ratio",
    "punct_ratio",
    "caps_ratio",
)
LEXICAL_FEATURES = ("type_token_ratio",)
READABILITY_FEATURES = (
    "flesch_reading_ease",
    "flesch_kincaid_grade",
    "smog_index",
    "coleman_liau_index",
)
EMOTION_FEATURES = tuple(f"emotion_{c}" for c in CATEGORIES)

FEATURE_NAMES: tuple[str, ...] = (
    STRUCTURAL_FEATURES + LEXICAL_FEATURES + READABILITY_FEATURES + EMOTION_FEATURES
)
N_FEATURES = len(FEATURE_NAMES)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}


def schema_hash(names: Sequence[str] = FEATURE_NAMES) -> str:
    return hashlib.sha256(",".join(names).encode("utf-8")).hexdigest()


class Readability(NamedTuple):
    flesch_reading_ease: float
    flesch_kincaid_grade: float
    smog_index: float
    coleman_liau_index: float


def type_token_ratio(words: Sequence[str]) -> float:
    if not words:
        raise EmptyDocument("type-token ratio needs at least one word")
    return len({w.lower() for w in words}) / len(words)


def readability_indices(stats: TextStats) -> Readability:
    """Flesch Reading Ease, Flesch-Kincaid Grade, SMOG and Coleman-Liau.

    SMOG uses the ``30 / sentences`` normalisation directly, whatever the
    sentence count. Coleman-Liau counts letters, not characters.
    """
    words = stats.word_count
    sentences = stats.sentence_count
    if words < 1 or sentences < 1:
        raise DegenerateStats(f"need words >= 1 and sentences >= 1, got {words}, {sentences}")

    words_per_sentence = words / sentences
    syllables_per_word = stats.syllable_count / words
    fre = 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word
    fkg = 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59
    smog = 1.0430 * math.sqrt(stats.polysyllable_count * 30 / sentences) + 3.1291
    letters_per_100 = stats.letter_count / words * 100
    sentences_per_100 = sentences / words * 100
    cli = 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8
    return Readability(fre, fkg, smog, cli)


def emotion_proportions(words: Sequence[str], lex: EmotionLexicon) -> list[float]:
    """Share of tokens tagged with each category, in ``CATEGORIES`` order."""
    if not words:
        raise EmptyDocument("emotion proportions need at least one word")
    counts = dict.fromkeys(CATEGORIES, 0)
    for w in words:
        for c in lex.emotions_of(w):
            counts[c] += 1
    return [counts[c] / len(words) for c in CATEGORIES]


def features_from_text(text: str, lex: EmotionLexicon) -> np.ndarray:
    stats = compute_stats(text)
    words = tokenize(text)
    if not words:
        raise EmptyDocument("document contains no words")
    n = stats.word_count
    structural = [
        float(stats.char_count),
        float(n),
        float(stats.sentence_count),
        n / stats.sentence_count,
        stats.letter_count / n,
        stats.exclamation_count / n,
        stats.question_count / n,
        stats.comma_count / n,
        stats.punct_count / n,
        stats.uppercase_letter_count / stats.letter_count,
    ]
    values = (
        structural
        + [type_token_ratio(words)]
        + list(readability_indices(stats))
        + emotion_proportions(words, lex)
    )
    return np.array(values, dtype=np.float64)


def extract_features(doc, lex: EmotionLexicon) -> np.ndarray:
    """Feature vector for a document (anything with a ``text`` attribute)."""
    return features_from_text(doc.text, lex)
