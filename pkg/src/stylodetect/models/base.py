from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import SchemaMismatch


class Classifier(ABC):
    """Binary classifier returning the probability of the AI class."""

    name: str = "classifier"

    def __init__(self, hyperparams: dict | None = None):
        self.hyperparams = dict(hyperparams or {})

    @abstractmethod
    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Real-valued score, larger meaning more likely AI."""

    @abstractmethod
    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        ...

    def predict(self, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) > threshold).astype(np.int64)

    @abstractmethod
    def get_state(self) -> dict:
        """JSON-compatible learned parameters."""

    @classmethod
    @abstractmethod
    def from_state(cls, hyperparams: dict, state: dict) -> "Classifier":
        ...


def check_xy(X, y=None):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise SchemaMismatch(f"expected a 2-D feature array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature array contains non-finite values")
    if y is None:
        return X
    y = np.asarray(y, dtype=np.int64)
    if y.shape != (len(X),):
        raise SchemaMismatch(f"labels have shape {y.shape}, expected ({len(X)},)")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return X, y


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_loss(y, p, eps=1e-15):
    p = np.clip(p, eps, 1 - eps)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def logistic_loss_from_scores(y, z) -> float:
    """Mean log loss computed stably from raw scores ``z``."""
    # log(1 + exp(z)) - y z
    return float(np.mean(np.logaddexp(0.0, z) - y * z))
