from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .base import Classifier, check_xy
from .tree import DecisionTree, TreeArrays, fit_tree

DEFAULTS = {"n_trees": 100, "max_depth": None, "min_samples_leaf": 1, "seed": 0}


class RandomForest(Classifier):
    name = "random_forest"

    def __init__(self, trees: list[DecisionTree], hyperparams=None):
        super().__init__(hyperparams)
        self.trees = trees

    def tree_probas(self, X) -> np.ndarray:
        X = check_xy(X)
        return np.vstack([t.tree.predict_value(X) for t in self.trees])

    def decision_function(self, X):
        return self.tree_probas(X).mean(axis=0)

    def predict_proba(self, X):
        return self.decision_function(X)

    def feature_importances(self) -> np.ndarray:
        total = np.sum([t.importances_raw for t in self.trees], axis=0)
        s = total.sum()
        return total / s if s > 0 else total

    def get_state(self):
        return {"trees": [t.tree.to_dict() for t in self.trees],
                "importances_raw": [t.importances_raw.tolist() for t in self.trees]}

    @classmethod
    def from_state(cls, hyperparams, state):
        trees = [DecisionTree(TreeArrays.from_dict(t), imp)
                 for t, imp in zip(state["trees"], state["importances_raw"])]
        return cls(trees, hyperparams)


def default_subset_size(n_features: int) -> int:
    return math.ceil(math.sqrt(n_features))


def fit_random_forest(X, y, n_trees=DEFAULTS["n_trees"], max_depth=DEFAULTS["max_depth"],
                      min_samples_leaf=DEFAULTS["min_samples_leaf"], seed=DEFAULTS["seed"],
                      feature_subset_size="sqrt", bootstrap=True, threads=1) -> RandomForest:
    """Bagged Gini trees with per-split feature subsampling.

    Tree ``i`` draws its bootstrap sample and feature subsets from
    ``default_rng(seed + i)``, so the fitted forest does not depend on
    ``threads``.
    """
    X, y = check_xy(X, y)
    n = len(X)
    subset = default_subset_size(X.shape[1]) if feature_subset_size == "sqrt" else feature_subset_size

    def one(i):
        rng = np.random.default_rng(seed + i)
        index = rng.integers(0, n, size=n) if bootstrap else None
        return fit_tree(X, y, max_depth=max_depth, min_samples_leaf=min_samples_leaf,
                        feature_subset_size=subset, rng=rng, sample_index=index)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            trees = list(pool.map(one, range(n_trees)))
    else:
        trees = [one(i) for i in range(n_trees)]
    hyperparams = {"n_trees": n_trees, "max_depth": max_depth,
                   "min_samples_leaf": min_samples_leaf, "seed": seed,
                   "feature_subset_size": subset, "bootstrap": bootstrap}
    return RandomForest(trees, hyperparams)
