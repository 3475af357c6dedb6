"""Deterministic text measurement: words, sentences, syllables and counts.

Conventions:

* A word is a maximal run of alphabetic characters that may contain internal
  apostrophes or hyphens (never leading or trailing). Words are lowercased.
* A sentence boundary is a maximal run of ``.``, ``!`` or ``?`` followed by
  whitespace or end of text. Trailing text after the last boundary counts as
  one more sentence when it contains a word. There is no abbreviation list.
* Syllables are vowel groups over ``aeiouy`` with a silent-e correction.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .errors import EmptyText

VOWELS = frozenset("aeiouy")
JOINERS = frozenset("'’-")

_BOUNDARY = re.compile(r"[.!?]+(?=\s|$)")


@dataclass(frozen=True)
class TextStats:
    char_count: int
    letter_count: int
    uppercase_letter_count: int
    word_count: int
    unique_word_count: int
    sentence_count: int
    syllable_count: int
    polysyllable_count: int
    period_count: int
    comma_count: int
    exclamation_count: int
    question_count: int
    punct_count: int


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercased words.

    >>> tokenize("don't stop-go")
    ["don't", 'stop-go']
    """
    words = []
    n = len(text)
    i = 0
    while i < n:
        if not text[i].isalpha():
            i += 1
            continue
        start = i
        i += 1
        while i < n:
            c = text[i]
            if c.isalpha():
                i += 1
            elif c in JOINERS and i + 1 < n and text[i + 1].isalpha():
                i += 2
            else:
                break
        words.append(text[start:i].lower())
    return words


def segment_sentences(text: str) -> int:
    """Estimate the number of sentences in ``text``."""
    count = 0
    tail_start = 0
    for m in _BOUNDARY.finditer(text):
        count += 1
        tail_start = m.end()
    if any(c.isalpha() for c in text[tail_start:]):
        count += 1
    return count


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate for a lowercased word, never below 1."""
    count = 0
    prev_vowel = False
    for c in word:
        is_vowel = c in VOWELS
        if is_vowel and not prev_vowel:
            count += 1
        prev_vowel = is_vowel
    if len(word) > 2 and word.endswith("e") and word[-2] not in VOWELS:
        # consonant + "le" is pronounced ("table")
        if not (word[-2] == "l" and word[-3] not in VOWELS):
            count -= 1
    return max(1, count)


def is_punctuation(c: str) -> bool:
    return unicodedata.category(c).startswith("P")


def compute_stats(text: str) -> TextStats:
    """Collect every count the features are built from.

    Raises:
        EmptyText: if ``text`` is empty after trimming whitespace.
    """
    if not text.strip():
        raise EmptyText("text is empty after trimming whitespace")

    words = tokenize(text)
    syllables = [count_syllables(w) for w in words]
    letters = upper = punct = 0
    for c in text:
        if c.isalpha():
            letters += 1
            if c.isupper():
                upper += 1
        elif is_punctuation(c):
            punct += 1

    return TextStats(
        char_count=len(text),
        letter_count=letters,
        uppercase_letter_count=upper,
        word_count=len(words),
        unique_word_count=len(set(words)),
        sentence_count=segment_sentences(text),
        syllable_count=sum(syllables),
        polysyllable_count=sum(1 for s in syllables if s >= 3),
        period_count=text.count("."),
        comma_count=text.count(","),
        exclamation_count=text.count("!"),
        question_count=text.count("?"),
        punct_count=punct,
    )
