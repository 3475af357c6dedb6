"""Word to emotion-category lexicon in the NRC word-level format.

Each line is ``word<TAB>category<TAB>flag`` with ``flag`` in ``{0, 1}``.
Only flagged lines create an association.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import BinaryIO, Mapping

from .errors import MalformedLine

CATEGORIES: tuple[str, ...] = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
    "negative",
    "positive",
)
_CATEGORY_SET = frozenset(CATEGORIES)


@dataclass(frozen=True)
class EmotionLexicon:
    entries: Mapping[str, frozenset[str]] = field(default_factory=dict)
    categories: tuple[str, ...] = CATEGORIES

    def emotions_of(self, word: str) -> frozenset[str]:
        return self.entries.get(word.lower(), frozenset())

    def words_in(self, category: str) -> list[str]:
        """Sorted words associated with ``category``."""
        return sorted(w for w, cats in self.entries.items() if category in cats)

    def __len__(self):
        return len(self.entries)


def emotions_of(lex: EmotionLexicon, word: str) -> frozenset[str]:
    return lex.emotions_of(word)


def load_lexicon(source: BinaryIO) -> EmotionLexicon:
    """Parse an NRC-format byte stream.

    Raises:
        MalformedLine: on a wrong field count, unknown category or bad flag.
            The line number is 1-based.
    """
    text = io.TextIOWrapper(source, encoding="utf-8", newline=None)
    found: dict[str, set[str]] = {}
    for line_no, line in enumerate(text, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedLine(line_no, f"expected 3 tab-separated fields, got {len(parts)}")
        word, category, flag = parts
        word = word.strip().lower()
        category = category.strip()
        flag = flag.strip()
        if not word:
            raise MalformedLine(line_no, "empty word")
        if category not in _CATEGORY_SET:
            raise MalformedLine(line_no, f"unknown category {category!r}")
        if flag not in ("0", "1"):
            raise MalformedLine(line_no, f"flag must be 0 or 1, got {flag!r}")
        if flag == "1":
            found.setdefault(word, set()).add(category)
    entries = {w: frozenset(c) for w, c in sorted(found.items())}
    return EmotionLexicon(entries=MappingProxyType(entries))


def load_lexicon_path(path: str | Path) -> EmotionLexicon:
    with open(path, "rb") as fh:
        return load_lexicon(fh)


def fixture_lexicon() -> EmotionLexicon:
    """The small bundled lexicon used by tests and the synthetic corpus."""
    data = resources.files("stylodetect").joinpath("data/emotion_fixture.tsv").read_bytes()
    return load_lexicon(io.BytesIO(data))


def fixture_lexicon_path() -> Path:
    return Path(str(resources.files("stylodetect").joinpath("data/emotion_fixture.tsv")))
