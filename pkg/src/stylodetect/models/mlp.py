from __future__ import annotations

import numpy as np

from ..errors import NonFiniteLoss
from .base import Classifier, check_xy, logistic_loss_from_scores, sigmoid

DEFAULTS = {"hidden_sizes": (16,), "learning_rate": 0.1, "epochs": 200, "batch_size": 32,
            "seed": 0}


def init_params(sizes, rng):
    """Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases."""
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        params.append((rng.uniform(-limit, limit, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return params


def forward(params, X):
    """Return the output scores and the per-layer activations."""
    activations = [X]
    a = X
    for W, b in params[:-1]:
        a = np.maximum(a @ W + b, 0.0)
        activations.append(a)
    W, b = params[-1]
    return (a @ W + b)[:, 0], activations


def loss_and_grads(params, X, y):
    """Mean log loss and its gradients, one ``(dW, db)`` per layer."""
    z, activations = forward(params, X)
    loss = logistic_loss_from_scores(y, z)
    delta = ((sigmoid(z) - y) / len(y))[:, None]
    grads = []
    for layer in range(len(params) - 1, -1, -1):
        W, _ = params[layer]
        a_prev = activations[layer]
        grads.append((a_prev.T @ delta, delta.sum(axis=0)))
        if layer > 0:
            delta = (delta @ W.T) * (a_prev > 0)
    grads.reverse()
    return loss, grads


class MLP(Classifier):
    name = "mlp"

    def __init__(self, params, hyperparams=None, loss_history=None):
        super().__init__(hyperparams)
        self.params = [(np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64))
                       for W, b in params]
        self.loss_history = list(loss_history or [])

    def decision_function(self, X):
        return forward(self.params, check_xy(X))[0]

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

    def get_state(self):
        return {"layers": [{"W": W.tolist(), "b": b.tolist()} for W, b in self.params]}

    @classmethod
    def from_state(cls, hyperparams, state):
        return cls([(layer["W"], layer["b"]) for layer in state["layers"]], hyperparams)


def fit_mlp(X, y, hidden_sizes=DEFAULTS["hidden_sizes"], learning_rate=DEFAULTS["learning_rate"],
            epochs=DEFAULTS["epochs"], batch_size=DEFAULTS["batch_size"],
            seed=DEFAULTS["seed"]) -> MLP:
    """ReLU network with a sigmoid output, trained by mini-batch SGD on log loss.

    Raises:
        NonFiniteLoss: if the training loss becomes NaN or infinite.
    """
    X, y = check_xy(X, y)
    yf = y.astype(np.float64)
    rng = np.random.default_rng(seed)
    sizes = [X.shape[1], *hidden_sizes, 1]
    params = init_params(sizes, rng)
    history = []
    for epoch in range(int(epochs)):
        order = rng.permutation(len(X))
        for start in range(0, len(X), batch_size):
            batch = order[start:start + batch_size]
            _, grads = loss_and_grads(params, X[batch], yf[batch])
            params = [(W - learning_rate * dW, b - learning_rate * db)
                      for (W, b), (dW, db) in zip(params, grads)]
        loss = logistic_loss_from_scores(yf, forward(params, X)[0])
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"MLP training loss became {loss} at epoch {epoch}")
        history.append(loss)
    hyperparams = {"hidden_sizes": list(hidden_sizes), "learning_rate": learning_rate,
                   "epochs": int(epochs), "batch_size": batch_size, "seed": seed}
    return MLP(params, hyperparams, history)
