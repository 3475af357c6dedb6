"""Second-order gradient boosting of regression trees on the logistic loss.

Each round fits a tree to the gradient ``p - y`` and hessian ``p (1 - p)`` of
the log loss at the current scores. Split gain and leaf weights follow the
regularised Newton step: gain ``1/2 [G_L^2/(H_L+l) + G_R^2/(H_R+l) - G^2/(H+l)]``,
leaf weight ``-G / (H + l)``, scaled by the learning rate.
"""
from __future__ import annotations

import math

import numpy as np

from .base import Classifier, check_xy, logistic_loss_from_scores, sigmoid
from .tree import TreeArrays, grow_tree, newton_split

DEFAULTS = {"n_rounds": 100, "learning_rate": 0.1, "max_depth": 3, "min_child_weight": 1.0,
            "reg_lambda": 1.0}
_RATE_CLIP = 1e-6


class GradientBoosting(Classifier):
    name = "gradient_boosting"

    def __init__(self, base_score, trees: list[TreeArrays], gains, hyperparams=None,
                 loss_history=None):
        super().__init__(hyperparams)
        self.base_score = float(base_score)
        self.trees = trees
        self.gains = np.asarray(gains, dtype=np.float64)
        self.loss_history = list(loss_history or [])

    def decision_function(self, X):
        X = check_xy(X)
        z = np.full(len(X), self.base_score)
        for t in self.trees:
            z += t.predict_value(X)
        return z

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))

    def feature_importances(self) -> np.ndarray:
        s = self.gains.sum()
        return self.gains / s if s > 0 else self.gains.copy()

    def get_state(self):
        return {"base_score": self.base_score, "trees": [t.to_dict() for t in self.trees],
                "gains": self.gains.tolist(), "loss_history": self.loss_history}

    @classmethod
    def from_state(cls, hyperparams, state):
        return cls(state["base_score"], [TreeArrays.from_dict(t) for t in state["trees"]],
                   state["gains"], hyperparams, state.get("loss_history"))


def fit_gradient_boosting(X, y, n_rounds=DEFAULTS["n_rounds"],
                          learning_rate=DEFAULTS["learning_rate"],
                          max_depth=DEFAULTS["max_depth"],
                          min_child_weight=DEFAULTS["min_child_weight"],
                          reg_lambda=DEFAULTS["reg_lambda"]) -> GradientBoosting:
    X, y = check_xy(X, y)
    rate = min(max(float(np.mean(y)), _RATE_CLIP), 1 - _RATE_CLIP)
    base = math.log(rate / (1 - rate))
    z = np.full(len(X), base)
    yf = y.astype(np.float64)
    trees = []
    gains = np.zeros(X.shape[1])
    history = [logistic_loss_from_scores(yf, z)]

    for _ in range(int(n_rounds)):
        p = sigmoid(z)
        g = p - yf
        h = p * (1 - p)

        def split(idx, feats):
            return newton_split(X[idx], g[idx], h[idx], feats, min_child_weight, reg_lambda)

        def leaf_value(idx):
            return -learning_rate * float(g[idx].sum()) / (float(h[idx].sum()) + reg_lambda)

        tree, round_gains = grow_tree(X, X.shape[1], max_depth, split, leaf_value)
        trees.append(tree)
        gains += round_gains
        z = z + tree.predict_value(X)
        history.append(logistic_loss_from_scores(yf, z))

    hyperparams = {"n_rounds": int(n_rounds), "learning_rate": learning_rate,
                   "max_depth": max_depth, "min_child_weight": min_child_weight,
                   "reg_lambda": reg_lambda}
    return GradientBoosting(base, trees, gains, hyperparams, history)
