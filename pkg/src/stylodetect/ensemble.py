"""Soft voting: the mean of member probabilities, thresholded."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import SchemaMismatch, UnfittedMember
from .features import N_FEATURES


class EnsembleModel:
    """Unweighted mean of member probabilities.

    A row is labelled AI only when the mean is strictly above ``threshold``;
    a mean exactly at the threshold is labelled human. Sums use
    ``math.fsum`` so the result does not depend on member order.
    """

    name = "ensemble"

    def __init__(self, members, threshold: float = 0.5, n_features: int = N_FEATURES):
        if len(members) < 2:
            raise ValueError("an ensemble needs at least 2 members")
        if not 0 < threshold < 1:
            raise ValueError(f"threshold must be in (0, 1), got {threshold}")
        self.members = list(members)
        self.threshold = float(threshold)
        self.n_features = n_features

    def member_probas(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise SchemaMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        out = []
        for m in self.members:
            if not hasattr(m, "predict_proba"):
                raise UnfittedMember(f"member {m!r} cannot predict probabilities")
            out.append(np.asarray(m.predict_proba(X), dtype=np.float64))
        return np.vstack(out)

    def predict_proba(self, X) -> np.ndarray:
        return mean_probability(self.member_probas(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) > self.threshold).astype(np.int64)

    def predict_one(self, x) -> tuple[float, int]:
        p = float(self.predict_proba(np.asarray(x)[None, :])[0])
        return p, int(p > self.threshold)


def mean_probability(probas: np.ndarray) -> np.ndarray:
    """Column means of a (members, rows) array, order-independent.

    The division can round one ulp past the members' range, so the result is
    clipped back into [min, max] of each column.
    """
    probas = np.asarray(probas, dtype=np.float64)
    k = probas.shape[0]
    means = np.array([math.fsum(col) / k for col in probas.T])
    return np.clip(means, probas.min(axis=0), probas.max(axis=0))


def ensemble_predict(e: EnsembleModel, x) -> tuple[float, int]:
    return e.predict_one(x)


def write_manifest(path, member_files, threshold: float) -> None:
    doc = {"members": [str(p) for p in member_files], "threshold": threshold}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_ensemble(path) -> EnsembleModel:
    """Load an ensemble manifest; member paths are relative to the manifest."""
    from .models import load_model

    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    members = [load_model(path.parent / p) for p in doc["members"]]
    return EnsembleModel(members, doc["threshold"])
