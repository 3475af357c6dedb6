import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import golden_article_vector
from stylodetect.dataset import (
    ClassLabel,
    FeatureMatrix,
    RawDocument,
    StandardizationParams,
    apply_manifest,
    apply_standardizer,
    build_matrix,
    fit_standardizer,
    load_corpus,
    read_matrix_csv,
    split_manifest,
    split_train_test,
    write_corpus,
    write_matrix_csv,
)
from stylodetect.errors import BadHeader, BadLabel, DuplicateId, SchemaMismatch, TooFewRows
from stylodetect.features import FEATURE_NAMES, N_FEATURES


def csv_bytes(text):
    return io.BytesIO(text.encode("utf-8"))


def toy_matrix(n_human, n_ai, seed=0, pairs=False):
    rng = np.random.default_rng(seed)
    n = n_human + n_ai
    ids = [f"h{i:04d}" for i in range(n_human)] + [f"a{i:04d}" for i in range(n_ai)]
    pair_ids = None
    if pairs:
        pair_ids = [f"p{i:04d}" for i in range(n_human)] + [f"p{i:04d}" for i in range(n_ai)]
    return FeatureMatrix(rng.normal(size=(n, N_FEATURES)), [0] * n_human + [1] * n_ai, ids,
                         pair_ids=pair_ids)


def matrix_from_columns(cols):
    cols = np.asarray(cols, dtype=float)
    rows = np.zeros((cols.shape[1], N_FEATURES))
    rows[:, : cols.shape[0]] = cols.T
    return FeatureMatrix(rows, [0, 1] * (len(rows) // 2) + [0] * (len(rows) % 2),
                         [f"r{i}" for i in range(len(rows))])


# -- loading -----------------------------------------------------------------

def test_load_balanced_thousand():
    lines = ["id,text,label"]
    lines += [f"h{i},Some words here.,human" for i in range(500)]
    lines += [f"a{i},\"Other words, here.\",AI" for i in range(500)]
    corpus = load_corpus(csv_bytes("\n".join(lines) + "\n"))
    labels = [d.label for d in corpus]
    assert labels.count(ClassLabel.HUMAN) == 500 and labels.count(ClassLabel.AI) == 500
    assert corpus.dropped == 0


def test_empty_text_dropped():
    corpus = load_corpus(csv_bytes('id,text,label\n1,Hello.,human\n2,"   ",ai\n3,Bye.,ai\n'))
    assert [d.id for d in corpus] == ["1", "3"]
    assert corpus.dropped == 1


def test_bad_label_reports_row():
    with pytest.raises(BadLabel) as exc:
        load_corpus(csv_bytes("id,text,label\n1,Hello.,human\n2,Fake.,real\n"))
    assert exc.value.row == 3


def test_duplicate_id():
    with pytest.raises(DuplicateId):
        load_corpus(csv_bytes("id,text,label\n1,Hello.,human\n1,Again.,ai\n"))


@pytest.mark.parametrize("header", ["id,body,label", "", "text,id,label", "id,text,label,extra"])
def test_bad_header(header):
    with pytest.raises(BadHeader):
        load_corpus(csv_bytes(header + "\n1,x,human\n" if header else ""))


def test_rfc4180_quoting_and_pairs():
    src = 'id,text,label,pair_id\n1,"He said ""hi"",\nthen left.",Human,p1\n2,Bye.,ai,\n'
    docs = load_corpus(csv_bytes(src)).documents
    assert docs[0].text == 'He said "hi",\nthen left.'
    assert docs[0].pair_id == "p1" and docs[1].pair_id is None


def test_write_then_load_round_trip():
    docs = [RawDocument("x1", 'Quote "me", please.\nNew line.', ClassLabel.AI, "p"),
            RawDocument("x2", "Plain.", ClassLabel.HUMAN, "p")]
    buf = io.StringIO()
    write_corpus(docs, buf)
    assert load_corpus(csv_bytes(buf.getvalue())).documents == docs


# -- matrix ------------------------------------------------------------------

def test_build_matrix_single_golden(lex):
    text, expected = golden_article_vector()
    m = build_matrix([RawDocument("g", text, ClassLabel.AI)], lex)
    assert m.rows.shape == (1, N_FEATURES)
    np.testing.assert_allclose(m.rows[0], expected, rtol=0, atol=1e-9)


def test_build_matrix_order_and_threads(lex):
    docs = [RawDocument(str(i), "word " * (i + 1) + ".", ClassLabel(i % 2)) for i in range(12)]
    m = build_matrix(docs, lex)
    assert m.ids == [d.id for d in docs]
    assert m.rows[:, FEATURE_NAMES.index("word_count")].tolist() == list(range(1, 13))
    assert np.array_equal(m.rows, build_matrix(docs, lex, threads=4).rows)


def test_build_matrix_errors(lex):
    with pytest.raises(TooFewRows):
        build_matrix([], lex)
    with pytest.raises(Exception, match="'bad'"):
        build_matrix([RawDocument("bad", "123", ClassLabel.AI)], lex)


def test_matrix_validation():
    with pytest.raises(SchemaMismatch):
        FeatureMatrix(np.zeros((2, 3)), [0, 1], ["a", "b"])
    rows = np.zeros((2, N_FEATURES))
    rows[0, 0] = np.nan
    with pytest.raises(SchemaMismatch):
        FeatureMatrix(rows, [0, 1], ["a", "b"])
    with pytest.raises(SchemaMismatch):
        FeatureMatrix(np.zeros((2, N_FEATURES)), [0], ["a", "b"])


def test_matrix_csv_round_trip_is_exact():
    m = toy_matrix(4, 3)
    buf = io.StringIO()
    write_matrix_csv(m, buf)
    back = read_matrix_csv(io.StringIO(buf.getvalue()))
    assert back.ids == m.ids
    assert np.array_equal(back.rows, m.rows)
    assert np.array_equal(back.labels, m.labels)


# -- splitting ---------------------------------------------------------------

def test_split_thousand():
    train, test = split_train_test(toy_matrix(500, 500), 0.8, seed=3)
    assert (len(train), len(test)) == (800, 200)
    assert train.class_counts() == (400, 400)


def test_split_ten_rows():
    train, test = split_train_test(toy_matrix(5, 5), 0.8, seed=0)
    assert train.class_counts() == (4, 4)
    assert test.class_counts() == (1, 1)


def test_split_errors():
    with pytest.raises(TooFewRows):
        split_train_test(toy_matrix(1, 5), 0.8, 0)
    with pytest.raises(ValueError):
        split_train_test(toy_matrix(5, 5), 1.0, 0)


def test_seed_changes_partition():
    m = toy_matrix(50, 50)
    partitions = {tuple(sorted(split_train_test(m, 0.8, s)[0].ids)) for s in range(10)}
    assert len(partitions) > 1


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.integers(2, 30), st.floats(0.1, 0.9), st.integers(0, 2**32))
def test_split_is_exact_partition(n_h, n_a, frac, seed):
    m = toy_matrix(n_h, n_a)
    train, test = split_train_test(m, frac, seed)
    assert sorted(train.ids + test.ids) == sorted(m.ids)
    assert train.class_counts() == (int(np.floor(frac * n_h)), int(np.floor(frac * n_a)))
    again = split_train_test(m, frac, seed)
    assert again[0].ids == train.ids


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_split_ignores_row_order(seed, rnd):
    m = toy_matrix(9, 11)
    perm = list(range(len(m)))
    rnd.shuffle(perm)
    a_train, _ = split_train_test(m, 0.8, seed)
    b_train, _ = split_train_test(m.subset(perm), 0.8, seed)
    assert sorted(a_train.ids) == sorted(b_train.ids)


def test_pair_safe_keeps_pairs_together():
    m = toy_matrix(20, 20, pairs=True)
    train, test = split_train_test(m, 0.8, seed=1, pair_safe=True)
    assert len(train) == 32
    assert not set(train.pair_ids) & set(test.pair_ids)
    with pytest.raises(ValueError):
        split_train_test(toy_matrix(5, 5), 0.8, 0, pair_safe=True)


def test_manifest_round_trip():
    m = toy_matrix(6, 6)
    train, test = split_train_test(m, 0.8, 5)
    man = split_manifest(train, test, 5, 0.8)
    assert man["n_train"] == len(train) and man["n_test"] == len(test)
    t2, s2 = apply_manifest(m, man)
    assert sorted(t2.ids) == sorted(train.ids) and sorted(s2.ids) == sorted(test.ids)
    with pytest.raises(SchemaMismatch):
        apply_manifest(toy_matrix(6, 7), man)


# -- standardization ---------------------------------------------------------

def test_standardizer_simple_column():
    p = fit_standardizer(matrix_from_columns([[1, 2, 3], [5, 5, 5]]))
    assert p.means[0] == 2 and p.stds[0] == 1
    assert p.means[1] == 5 and p.stds[1] == 1
    out = apply_standardizer(p, matrix_from_columns([[1, 2, 3], [5, 5, 5]]))
    assert out.rows[:, 0].tolist() == [-1, 0, 1]
    assert out.rows[:, 1].tolist() == [0, 0, 0]


def test_standardizer_identical_rows_and_too_few():
    m = matrix_from_columns([[1, 1], [7, 7]])
    assert np.all(fit_standardizer(m).stds == 1)
    with pytest.raises(TooFewRows):
        fit_standardizer(m.subset([0]))


def test_standardizer_row_equal_to_means():
    m = toy_matrix(5, 5)
    p = fit_standardizer(m)
    single = FeatureMatrix(p.means[None, :], [0], ["mean"])
    assert np.all(apply_standardizer(p, single).rows == 0)


def test_standardizer_schema_mismatch():
    p = fit_standardizer(toy_matrix(3, 3))
    bad = StandardizationParams(p.means[:-1], p.stds[:-1], 6, FEATURE_NAMES[:-1])
    with pytest.raises(SchemaMismatch):
        apply_standardizer(bad, toy_matrix(3, 3))


def test_standardizer_json_round_trip():
    p = fit_standardizer(toy_matrix(4, 4))
    import json
    q = StandardizationParams.from_dict(json.loads(p.dumps()))
    assert np.array_equal(p.means, q.means) and np.array_equal(p.stds, q.stds)
    assert q.fitted_on == 8


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(3, 40), st.just(N_FEATURES)),
              elements=st.floats(-1e4, 1e4, allow_nan=False)))
def test_standardized_train_has_zero_mean_unit_std(rows):
    m = FeatureMatrix(rows, [0] * len(rows), [str(i) for i in range(len(rows))])
    p = fit_standardizer(m)
    z = apply_standardizer(p, m).rows
    assert np.all(p.stds > 0)
    assert np.all(np.abs(z.mean(axis=0)) < 1e-9)
    varying = p.stds != 1.0
    assert np.all(np.abs(z[:, varying].std(axis=0, ddof=1) - 1) < 1e-9)
    constant = np.all(rows == rows[0], axis=0)
    assert np.all(z[:, constant] == 0)
