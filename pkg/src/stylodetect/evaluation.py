"""Accuracy, ROC/AUC, single-feature AUC, importance rankings and densities."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, SingleClass, UnknownFeature


@dataclass(frozen=True)
class RocResult:
    points: list[tuple[float, float]]
    auc: float


@dataclass(frozen=True)
class FeatureAuc:
    feature: str
    raw_auc: float
    oriented_auc: float


@dataclass(frozen=True)
class DensityReport:
    feature: str
    edges: list[float]
    human_density: list[float]
    ai_density: list[float]
    human_mean: float
    ai_mean: float
    human_n: int
    ai_n: int

    def to_dict(self):
        return dict(self.__dict__)


def accuracy(predicted, truth) -> float:
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape or predicted.ndim != 1:
        raise LengthMismatch(f"prediction shape {predicted.shape} vs truth {truth.shape}")
    if len(truth) == 0:
        raise LengthMismatch("accuracy of zero observations is undefined")
    return float(np.sum(predicted == truth)) / len(truth)


def roc_auc(scores, labels) -> RocResult:
    """ROC curve over distinct score thresholds and its trapezoidal area.

    Tied scores form a single ROC point, so a positive/negative tie adds
    half a pair to the area. The area is accumulated in integer pair counts
    and divided once, which makes it equal to the Mann-Whitney statistic.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(np.int64)
    if scores.shape != labels.shape:
        raise LengthMismatch(f"scores {scores.shape} vs labels {labels.shape}")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both classes present")

    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    lab = labels[order]
    tps = np.cumsum(lab == 1)
    fps = np.cumsum(lab == 0)
    last_of_group = np.r_[s[1:] != s[:-1], True]
    tps = np.r_[0, tps[last_of_group]]
    fps = np.r_[0, fps[last_of_group]]

    twice_area = 0
    for k in range(1, len(tps)):
        twice_area += int(fps[k] - fps[k - 1]) * int(tps[k] + tps[k - 1])
    auc = twice_area / (2 * n_pos * n_neg)
    points = [(int(f) / n_neg, int(t) / n_pos) for f, t in zip(fps, tps)]
    return RocResult(points, auc)


def per_feature_auc(m) -> list[FeatureAuc]:
    """Each raw feature column used as a score for the AI class."""
    out = []
    for j, name in enumerate(m.feature_names):
        raw = roc_auc(m.rows[:, j], m.labels).auc
        out.append(FeatureAuc(name, raw, max(raw, 1.0 - raw)))
    return out


def importance_report(importances: dict, feature_names) -> dict:
    """Scale each model's importances so its top feature is 100.

    Returns ``{model: [(feature, importance, scaled), ...]}`` sorted by
    descending importance, ties by feature name.
    """
    report = {}
    for model, values in importances.items():
        values = np.asarray(values, dtype=np.float64)
        top = float(values.max()) if len(values) else 0.0
        rows = []
        for name, v in zip(feature_names, values):
            scaled = float(v) / top * 100.0 if top > 0 else 0.0
            rows.append((name, float(v), scaled))
        rows.sort(key=lambda r: (-r[1], r[0]))
        report[model] = rows
    return report


def class_density(m, feature: str, bins: int = 30) -> DensityReport:
    """Histogram density of one feature per class on shared bin edges."""
    if feature not in m.feature_names:
        raise UnknownFeature(feature)
    if bins < 2:
        raise ValueError("need at least 2 bins")
    values = m.column(feature)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    width = np.diff(edges)
    dens, means, ns = [], [], []
    for cls in (0, 1):
        v = values[m.labels == cls]
        if len(v) == 0:
            raise SingleClass(f"class {cls} has no rows")
        counts, _ = np.histogram(v, bins=edges)
        dens.append((counts / (len(v) * width)).tolist())
        means.append(float(np.mean(v)))
        ns.append(int(len(v)))
    return DensityReport(feature, edges.tolist(), dens[0], dens[1], means[0], means[1], ns[0], ns[1])
