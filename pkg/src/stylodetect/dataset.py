"""Corpus ingestion, feature matrices, splitting and standardization."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from typing import BinaryIO, Sequence, TextIO

import numpy as np

from .errors import BadHeader, BadLabel, DuplicateId, SchemaMismatch, StyloError, TooFewRows
from .features import FEATURE_NAMES, extract_features
from .lexicon import EmotionLexicon

STD_FLOOR = 1e-12


class ClassLabel(IntEnum):
    HUMAN = 0
    AI = 1

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        return {"human": cls.HUMAN, "ai": cls.AI}[text.strip().lower()]

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    label: ClassLabel
    pair_id: str | None = None


@dataclass
class Corpus:
    documents: list[RawDocument]
    dropped: int = 0

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


@dataclass
class FeatureMatrix:
    rows: np.ndarray
    labels: np.ndarray
    ids: list[str]
    feature_names: tuple[str, ...] = FEATURE_NAMES
    pair_ids: list[str | None] | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.feature_names):
            raise SchemaMismatch(
                f"rows have shape {self.rows.shape}, expected (n, {len(self.feature_names)})"
            )
        if not (len(self.rows) == len(self.labels) == len(self.ids)):
            raise SchemaMismatch("row, label and id counts differ")
        if not np.all(np.isfinite(self.rows)):
            raise SchemaMismatch("feature matrix contains non-finite values")

    def __len__(self):
        return len(self.ids)

    def subset(self, index) -> "FeatureMatrix":
        index = np.asarray(index, dtype=np.int64)
        return FeatureMatrix(
            rows=self.rows[index],
            labels=self.labels[index],
            ids=[self.ids[i] for i in index],
            feature_names=self.feature_names,
            pair_ids=None if self.pair_ids is None else [self.pair_ids[i] for i in index],
        )

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.feature_names.index(name)]

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))


# -- corpus ------------------------------------------------------------------

def load_corpus(source: BinaryIO) -> Corpus:
    """Read a ``id,text,label[,pair_id]`` CSV corpus.

    Rows whose text is empty or whitespace are dropped and counted. Row
    numbers in errors count the header as row 1.
    """
    reader = csv.reader(io.TextIOWrapper(source, encoding="utf-8", newline=""))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise BadHeader("corpus is empty, expected header id,text,label[,pair_id]") from None
    if header not in (["id", "text", "label"], ["id", "text", "label", "pair_id"]):
        raise BadHeader(f"expected header id,text,label[,pair_id], got {','.join(header)}")
    has_pair = len(header) == 4

    docs: list[RawDocument] = []
    seen: set[str] = set()
    dropped = 0
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise BadHeader(f"row {row_no}: expected {len(header)} fields, got {len(row)}")
        doc_id, text, label = row[0], row[1], row[2]
        try:
            parsed = ClassLabel.parse(label)
        except KeyError:
            raise BadLabel(row_no, label) from None
        if doc_id in seen:
            raise DuplicateId(row_no, doc_id)
        seen.add(doc_id)
        if not text.strip():
            dropped += 1
            continue
        pair = row[3] if has_pair and row[3] != "" else None
        docs.append(RawDocument(doc_id, text, parsed, pair))
    return Corpus(docs, dropped)


def load_corpus_path(path) -> Corpus:
    with open(path, "rb") as fh:
        return load_corpus(fh)


def write_corpus(docs: Sequence[RawDocument], out: TextIO) -> None:
    with_pair = any(d.pair_id is not None for d in docs)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "text", "label", "pair_id"] if with_pair else ["id", "text", "label"])
    for d in docs:
        row = [d.id, d.text, str(d.label)]
        if with_pair:
            row.append(d.pair_id or "")
        writer.writerow(row)


# -- feature matrix ----------------------------------------------------------

def build_matrix(docs: Sequence[RawDocument], lex: EmotionLexicon, threads: int = 1) -> FeatureMatrix:
    if not docs:
        raise TooFewRows("cannot build a feature matrix from zero documents")

    def one(doc):
        try:
            return extract_features(doc, lex)
        except StyloError as exc:
            raise type(exc)(f"document {doc.id!r}: {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(one, docs))
    else:
        rows = [one(d) for d in docs]
    return FeatureMatrix(
        rows=np.vstack(rows),
        labels=np.array([int(d.label) for d in docs]),
        ids=[d.id for d in docs],
        pair_ids=[d.pair_id for d in docs],
    )


def write_matrix_csv(m: FeatureMatrix, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "label", *m.feature_names])
    for doc_id, label, row in zip(m.ids, m.labels, m.rows):
        writer.writerow([doc_id, str(ClassLabel(int(label))), *(repr(float(v)) for v in row)])


def read_matrix_csv(source: TextIO) -> FeatureMatrix:
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None or header[:2] != ["id", "label"] or tuple(header[2:]) != FEATURE_NAMES:
        raise SchemaMismatch("feature CSV header does not match the feature schema")
    ids, labels, rows = [], [], []
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        try:
            labels.append(int(ClassLabel.parse(row[1])))
        except KeyError:
            raise BadLabel(row_no, row[1]) from None
        ids.append(row[0])
        rows.append([float(v) for v in row[2:]])
    return FeatureMatrix(rows=np.array(rows).reshape(len(rows), len(FEATURE_NAMES)),
                         labels=np.array(labels), ids=ids)


# -- splitting ---------------------------------------------------------------

def split_train_test(
    m: FeatureMatrix, train_fraction: float = 0.8, seed: int = 0, pair_safe: bool = False
) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Seeded stratified split.

    Each class contributes ``floor(train_fraction * class_n)`` rows to the
    training side. Rows are ordered by id before shuffling so the partition
    does not depend on input row order. With ``pair_safe`` the units shuffled
    are pair groups (rows sharing a ``pair_id``), so pairs never straddle
    the partition; the training side is filled with whole groups until it
    reaches ``floor(train_fraction * n)`` rows.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    counts = m.class_counts()
    if min(counts) < 2:
        raise TooFewRows(f"need at least 2 rows per class, got {counts}")
    rng = np.random.default_rng(seed)

    if pair_safe:
        train_idx = _pair_safe_train_index(m, train_fraction, rng)
    else:
        train_idx = []
        for cls in (0, 1):
            idx = [i for i in np.flatnonzero(m.labels == cls)]
            idx.sort(key=lambda i: m.ids[i])
            perm = rng.permutation(len(idx))
            n_train = int(np.floor(train_fraction * len(idx)))
            train_idx.extend(idx[j] for j in perm[:n_train])

    in_train = np.zeros(len(m), dtype=bool)
    in_train[np.asarray(train_idx, dtype=np.int64)] = True
    return m.subset(np.flatnonzero(in_train)), m.subset(np.flatnonzero(~in_train))


def _pair_safe_train_index(m, train_fraction, rng):
    if m.pair_ids is None:
        raise ValueError("pair_safe split needs pair ids")
    groups: dict[str, list[int]] = {}
    for i, (doc_id, pair) in enumerate(zip(m.ids, m.pair_ids)):
        groups.setdefault(pair if pair is not None else f"\0{doc_id}", []).append(i)
    keys = sorted(groups)
    target = int(np.floor(train_fraction * len(m)))
    train: list[int] = []
    for k in rng.permutation(len(keys)):
        members = groups[keys[k]]
        if len(train) + len(members) <= target:
            train.extend(members)
    return train


def split_manifest(train: FeatureMatrix, test: FeatureMatrix, seed: int,
                   train_fraction: float, pair_safe: bool = False) -> dict:
    assignment = {i: "train" for i in train.ids}
    assignment.update({i: "test" for i in test.ids})
    return {
        "seed": seed,
        "train_fraction": train_fraction,
        "pair_safe": pair_safe,
        "n_train": len(train),
        "n_test": len(test),
        "assignment": dict(sorted(assignment.items())),
    }


def apply_manifest(m: FeatureMatrix, manifest: dict) -> tuple[FeatureMatrix, FeatureMatrix]:
    assignment = manifest["assignment"]
    if set(assignment) != set(m.ids):
        raise SchemaMismatch("split manifest ids do not match the feature matrix")
    train = [i for i, doc_id in enumerate(m.ids) if assignment[doc_id] == "train"]
    test = [i for i, doc_id in enumerate(m.ids) if assignment[doc_id] == "test"]
    return m.subset(train), m.subset(test)


# -- standardization ---------------------------------------------------------

@dataclass(frozen=True)
class StandardizationParams:
    means: np.ndarray
    stds: np.ndarray
    fitted_on: int
    feature_names: tuple[str, ...] = field(default=FEATURE_NAMES)

    def to_dict(self) -> dict:
        return {
            "feature_names": list(self.feature_names),
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
            "fitted_on": self.fitted_on,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StandardizationParams":
        return cls(np.array(d["means"]), np.array(d["stds"]), int(d["fitted_on"]),
                   tuple(d["feature_names"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def fit_standardizer(train: FeatureMatrix) -> StandardizationParams:
    """Column means and sample (n - 1) standard deviations.

    Columns whose std falls below 1e-12 get std 1, so they pass through
    centered.
    """
    if len(train) < 2:
        raise TooFewRows("standardizer needs at least 2 rows")
    rows = train.rows
    means = rows.mean(axis=0)
    # second pass removes the summation error, so constant columns get their exact value
    means = means + (rows - means).mean(axis=0)
    stds = np.sqrt(np.sum((rows - means) ** 2, axis=0) / (len(rows) - 1))
    stds = np.where(stds < STD_FLOOR, 1.0, stds)
    return StandardizationParams(means, stds, len(train), train.feature_names)


def apply_standardizer(p: StandardizationParams, m: FeatureMatrix) -> FeatureMatrix:
    if tuple(p.feature_names) != tuple(m.feature_names) or len(p.means) != m.rows.shape[1]:
        raise SchemaMismatch("standardizer was fitted on a different feature schema")
    return FeatureMatrix(
        rows=(m.rows - p.means) / p.stds,
        labels=m.labels.copy(),
        ids=list(m.ids),
        feature_names=m.feature_names,
        pair_ids=None if m.pair_ids is None else list(m.pair_ids),
    )
