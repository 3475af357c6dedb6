"""Seeded synthetic paired corpus with per-class stylistic knobs.

Documents are sentences of pseudo-words. Each class has its own vocabulary
whose words are built from single-vowel syllables (vowels ``a i o u``,
consonants without ``y``), so every word's extracted syllable count is known
by construction and its letter count is drawn from the class word-length
distribution. Lexicon words are injected at per-category rates.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .dataset import ClassLabel, RawDocument
from .errors import ConfigInvalid
from .lexicon import CATEGORIES, EmotionLexicon, fixture_lexicon
from .rng import derive_seed

SYNTH_VOWELS = "aiou"
SYNTH_CONSONANTS = "bcdfghjklmnprstvwz"


def _rates(value: float) -> dict:
    return {c: value for c in CATEGORIES}


@dataclass
class SynthConfig:
    n_per_class: int = 250
    vocab_size_human: int = 1500
    vocab_size_ai: int = 1500
    mean_sentence_len_human: float = 18.0
    mean_sentence_len_ai: float = 18.0
    sentence_len_spread: float = 6.0
    mean_word_len_human: float = 5.0
    mean_word_len_ai: float = 5.0
    word_len_spread: float = 2.0
    polysyllable_rate_human: float = 0.1
    polysyllable_rate_ai: float = 0.1
    emotion_rates_human: dict = field(default_factory=lambda: _rates(0.004))
    emotion_rates_ai: dict = field(default_factory=lambda: _rates(0.004))
    doc_words_min: int = 250
    doc_words_max: int = 350
    comma_rate: float = 0.05
    seed: int = 0

    def validate(self) -> None:
        counts = ("n_per_class", "vocab_size_human", "vocab_size_ai", "doc_words_min",
                  "doc_words_max")
        for name in counts:
            if int(getattr(self, name)) < 1:
                raise ConfigInvalid(f"{name} must be >= 1")
        if self.doc_words_max < self.doc_words_min:
            raise ConfigInvalid("doc_words_max must be >= doc_words_min")
        for name in ("polysyllable_rate_human", "polysyllable_rate_ai", "comma_rate"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigInvalid(f"{name} must be in [0, 1]")
        for name in ("mean_sentence_len_human", "mean_sentence_len_ai", "mean_word_len_human",
                     "mean_word_len_ai"):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"{name} must be >= 1")
        if self.sentence_len_spread < 0 or self.word_len_spread < 0:
            raise ConfigInvalid("spreads must be >= 0")
        for name in ("emotion_rates_human", "emotion_rates_ai"):
            rates = getattr(self, name)
            if set(rates) - set(CATEGORIES):
                raise ConfigInvalid(f"{name} has unknown categories {set(rates) - set(CATEGORIES)}")
            if any(not 0 <= r <= 1 for r in rates.values()):
                raise ConfigInvalid(f"{name} rates must be in [0, 1]")
            if sum(rates.values()) > 1:
                raise ConfigInvalid(f"{name} rates sum above 1")

    def class_params(self, label: ClassLabel) -> dict:
        suffix = "human" if label == ClassLabel.HUMAN else "ai"
        return {
            "vocab_size": int(getattr(self, f"vocab_size_{suffix}")),
            "sentence_len": getattr(self, f"mean_sentence_len_{suffix}"),
            "word_len": getattr(self, f"mean_word_len_{suffix}"),
            "polysyllable_rate": getattr(self, f"polysyllable_rate_{suffix}"),
            "emotion_rates": getattr(self, f"emotion_rates_{suffix}"),
        }

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "SynthConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def readability_shift(cls, seed: int = 0, n_per_class: int = 250) -> "SynthConfig":
        """Human text with a +2.0 Coleman-Liau shift and mildly higher TTR.

        Human words are drawn 0.37 letters longer on average, which after the
        dilution by injected lexicon words moves the Coleman-Liau mean by
        about 2 points. Emotion rates are equal across classes.
        """
        return cls(n_per_class=n_per_class, seed=seed, vocab_size_human=1500,
                   vocab_size_ai=900, mean_word_len_human=5.37, mean_word_len_ai=5.0)

    @classmethod
    def null(cls, seed: int = 0, n_per_class: int = 250) -> "SynthConfig":
        """Identical class parameters: there is nothing to learn."""
        return cls(n_per_class=n_per_class, seed=seed)


def expected_coleman_liau(mean_word_len: float, mean_sentence_len: float) -> float:
    """Coleman-Liau index of a text with the given average lengths."""
    return 0.0588 * 100 * mean_word_len - 0.296 * 100 / mean_sentence_len - 15.8


def make_pseudo_word(rng: np.random.Generator, letters: int, syllables: int) -> str:
    """A word with ``syllables`` single-vowel groups and ``letters`` letters."""
    letters = max(letters, 2 * syllables - 1)
    extra = letters - syllables - (syllables - 1)
    # slots: onset, the s-1 gaps between vowels, coda
    slots = np.ones(syllables + 1, dtype=np.int64)
    slots[0] = slots[-1] = 0
    for _ in range(extra):
        # keep clusters at two consonants while any slot has room
        open_slots = np.flatnonzero(slots < 2)
        if len(open_slots) == 0:
            open_slots = np.arange(syllables + 1)
        slots[open_slots[rng.integers(0, len(open_slots))]] += 1
    out = []
    for k in range(syllables + 1):
        out.extend(SYNTH_CONSONANTS[i] for i in rng.integers(0, len(SYNTH_CONSONANTS), slots[k]))
        if k < syllables:
            out.append(SYNTH_VOWELS[rng.integers(0, len(SYNTH_VOWELS))])
    return "".join(out)


def _syllable_plan(size, polysyllable_rate):
    n_poly = int(round(polysyllable_rate * size))
    n_four = n_poly // 4
    n_one = (size - n_poly) // 2
    return [4] * n_four + [3] * (n_poly - n_four) + [1] * n_one + [2] * (size - n_poly - n_one)


def build_vocabulary(rng, size, word_len, spread, polysyllable_rate, exclude=frozenset()):
    """``size`` distinct pseudo-words.

    Target lengths are evenly spaced quantiles of ``word_len +- spread`` and
    syllable counts hit ``polysyllable_rate`` exactly, so the vocabulary's
    shape does not fluctuate from seed to seed; only the spelling is random.
    """
    lo, hi = word_len - spread, word_len + spread
    lengths = [int(round(lo + (hi - lo) * (k + 0.5) / size)) for k in range(size)]
    lengths = [lengths[i] for i in rng.permutation(size)]
    plan = _syllable_plan(size, polysyllable_rate)
    plan = [plan[i] for i in rng.permutation(size)]
    vocab: list[str] = []
    seen = set(exclude)
    for letters, syl in zip(lengths, plan):
        while True:
            word = make_pseudo_word(rng, max(letters, 1), syl)
            if word not in seen:
                break
        seen.add(word)
        vocab.append(word)
    return vocab


def _document(rng, cfg: SynthConfig, vocab, params, emotion_pools) -> str:
    target = int(rng.integers(cfg.doc_words_min, cfg.doc_words_max + 1))
    rates = [params["emotion_rates"].get(c, 0.0) for c in CATEGORIES]
    cum = np.cumsum(rates)
    sentences = []
    total = 0
    while total < target:
        length = max(2, int(round(rng.uniform(params["sentence_len"] - cfg.sentence_len_spread,
                                              params["sentence_len"] + cfg.sentence_len_spread))))
        words = []
        for pos in range(length):
            u = rng.random()
            k = int(np.searchsorted(cum, u, side="right"))
            if k < len(CATEGORIES) and emotion_pools[k]:
                pool = emotion_pools[k]
                w = pool[rng.integers(0, len(pool))]
            else:
                w = vocab[rng.integers(0, len(vocab))]
            if pos < length - 1 and rng.random() < cfg.comma_rate:
                w += ","
            words.append(w)
        words[0] = words[0][0].upper() + words[0][1:]
        sentences.append(" ".join(words) + ".")
        total += length
    return " ".join(sentences)


def generate_synthetic_corpus(cfg: SynthConfig, lex: EmotionLexicon | None = None) -> list[RawDocument]:
    """Paired corpus: human and AI documents ``i`` share ``pair_id`` ``p{i}``.

    Output order is human 0, AI 0, human 1, AI 1, ... and is fully
    determined by ``cfg.seed``.
    """
    cfg.validate()
    lex = fixture_lexicon() if lex is None else lex
    pools = [lex.words_in(c) for c in CATEGORIES]
    exclude = frozenset(lex.entries)

    params = {label: cfg.class_params(label) for label in (ClassLabel.HUMAN, ClassLabel.AI)}
    # A word list depends only on its shape parameters, so classes that share
    # them draw prefixes of one list and differ in nothing but size.
    lists: dict[tuple, list[str]] = {}
    for label, p in params.items():
        key = (p["word_len"], cfg.word_len_spread, p["polysyllable_rate"])
        size = max(q["vocab_size"] for q in params.values()
                   if (q["word_len"], cfg.word_len_spread, q["polysyllable_rate"]) == key)
        if key not in lists:
            vocab_rng = np.random.default_rng(derive_seed(cfg.seed, "vocab", *key))
            lists[key] = build_vocabulary(vocab_rng, size, *key, exclude)
    vocabs = {label: lists[(p["word_len"], cfg.word_len_spread, p["polysyllable_rate"])]
              [:p["vocab_size"]] for label, p in params.items()}

    rng = np.random.default_rng(derive_seed(cfg.seed, "documents"))
    docs = []
    width = max(5, len(str(cfg.n_per_class)))
    for i in range(cfg.n_per_class):
        pair = f"p{i:0{width}d}"
        for label, prefix in ((ClassLabel.HUMAN, "h"), (ClassLabel.AI, "a")):
            text = _document(rng, cfg, vocabs[label], params[label], pools)
            docs.append(RawDocument(f"{prefix}{i:0{width}d}", text, label, pair))
    return docs
