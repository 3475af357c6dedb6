import threading

import pytest
from hypothesis import given, strategies as st

from stylodetect.errors import EmptyText
from stylodetect.textproc import compute_stats, count_syllables, segment_sentences, tokenize

texts = st.text(
    alphabet=st.sampled_from(list("abcdeiouyABCZ  '-.,!?\n\t0123éß’")),
    max_size=120,
)


@pytest.mark.parametrize(
    "text, words",
    [
        ("The cat sat.", ["the", "cat", "sat"]),
        ("don't stop-go", ["don't", "stop-go"]),
        ("!!! 123", []),
        ("'quoted' -dash- a--b", ["quoted", "dash", "a", "b"]),
        ("Café über", ["café", "über"]),
        ("", []),
    ],
)
def test_tokenize(text, words):
    assert tokenize(text) == words


@pytest.mark.parametrize(
    "text, n",
    [
        ("A. B? C!", 3),
        ("no terminal punctuation", 1),
        ("Wait... what?!", 2),
        ("The cat sat. The dog ran!", 2),
        ("3.14 is pi", 1),
        ("", 0),
    ],
)
def test_segment_sentences(text, n):
    assert segment_sentences(text) == n


@pytest.mark.parametrize(
    "word, n",
    [("cat", 1), ("hello", 2), ("beautiful", 3), ("make", 1), ("table", 2),
     ("the", 1), ("true", 1), ("nobody", 3), ("whale", 1), ("agree", 2)],
)
def test_count_syllables(word, n):
    assert count_syllables(word) == n


def test_compute_stats_two_sentences():
    s = compute_stats("The cat sat. The dog ran!")
    assert (s.word_count, s.unique_word_count, s.sentence_count) == (6, 5, 2)
    assert (s.syllable_count, s.polysyllable_count) == (6, 0)
    assert (s.period_count, s.exclamation_count, s.uppercase_letter_count) == (1, 1, 2)
    assert s.punct_count == 2
    assert s.letter_count == 18


def test_compute_stats_minimal():
    s = compute_stats("A.")
    assert (s.word_count, s.sentence_count, s.syllable_count) == (1, 1, 1)


@pytest.mark.parametrize("text", ["   ", "", "\n\t"])
def test_compute_stats_empty(text):
    with pytest.raises(EmptyText):
        compute_stats(text)


@given(texts)
def test_stats_invariants(text):
    if not text.strip():
        return
    s = compute_stats(text)
    assert min(s.__dict__.values()) >= 0
    assert s.unique_word_count <= s.word_count
    assert s.polysyllable_count <= s.word_count
    assert s.syllable_count >= s.word_count
    assert s.uppercase_letter_count <= s.letter_count <= s.char_count
    if s.word_count >= 1:
        assert s.sentence_count >= 1
    words = tokenize(text)
    assert len(words) == s.word_count
    assert s.polysyllable_count == sum(count_syllables(w) >= 3 for w in words)


@given(texts)
def test_words_are_well_formed(text):
    for w in tokenize(text):
        assert w == w.lower()
        assert w[0].isalpha() and w[-1].isalpha()
        assert count_syllables(w) >= 1


@given(texts, st.sampled_from(["Another one.", "Short", "Really? Yes!"]))
def test_appending_sentence_is_monotone(text, sentence):
    if not text.strip():
        return
    before = compute_stats(text)
    after = compute_stats(text + " " + sentence)
    assert after.word_count >= before.word_count
    assert after.char_count >= before.char_count
    assert after.sentence_count >= before.sentence_count


def test_stats_deterministic_across_threads():
    text = "Officials hate the fake report. Is it true? Nobody knows, friends! " * 20
    expected = compute_stats(text)
    results = []
    threads = [threading.Thread(target=lambda: results.append(compute_stats(text)))
               for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == expected for r in results)
