from __future__ import annotations

import numpy as np

from ..errors import NonFiniteLoss
from .base import Classifier, check_xy, logistic_loss_from_scores, sigmoid

DEFAULTS = {"l2_lambda": 0.01, "learning_rate": 0.1, "epochs": 1000}


class LogisticRegression(Classifier):
    name = "logistic"

    def __init__(self, weights, bias, hyperparams=None):
        super().__init__(hyperparams)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)

    def decision_function(self, X):
        X = check_xy(X)
        return X @ self.weights + self.bias

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

    def get_state(self):
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_state(cls, hyperparams, state):
        return cls(state["weights"], state["bias"], hyperparams)


def logistic_objective(w, b, X, y, l2_lambda):
    """L2-regularised mean log loss and its gradient ``(loss, dw, db)``.

    The penalty ``l2_lambda / 2 * |w|^2`` leaves the bias unpenalised.
    """
    z = X @ w + b
    loss = logistic_loss_from_scores(y, z) + 0.5 * l2_lambda * float(w @ w)
    residual = sigmoid(z) - y
    dw = X.T @ residual / len(y) + l2_lambda * w
    db = float(np.mean(residual))
    return loss, dw, db


def fit_logistic(X, y, l2_lambda=DEFAULTS["l2_lambda"], learning_rate=DEFAULTS["learning_rate"],
                 epochs=DEFAULTS["epochs"]) -> LogisticRegression:
    """Full-batch gradient descent from zero weights.

    The penalty is applied as a proximal step,
    ``w <- (w - lr * grad_data) / (1 + lr * l2_lambda)``, which stays stable
    for arbitrarily large ``l2_lambda``.

    Raises:
        NonFiniteLoss: if the loss becomes NaN or infinite.
    """
    X, y = check_xy(X, y)
    w = np.zeros(X.shape[1])
    b = 0.0
    shrink = 1.0 / (1.0 + learning_rate * l2_lambda)
    for epoch in range(int(epochs)):
        z = X @ w + b
        residual = sigmoid(z) - y
        w = (w - learning_rate * (X.T @ residual / len(y))) * shrink
        b -= learning_rate * float(np.mean(residual))
        if not (np.all(np.isfinite(w)) and np.isfinite(b)):
            raise NonFiniteLoss(f"logistic regression diverged at epoch {epoch}")
    loss = logistic_loss_from_scores(y, X @ w + b)
    if not np.isfinite(loss):
        raise NonFiniteLoss("logistic regression loss is not finite")
    hyperparams = {"l2_lambda": l2_lambda, "learning_rate": learning_rate, "epochs": int(epochs)}
    return LogisticRegression(w, b, hyperparams)
