"""Model registry, stratified k-fold hyperparameter search, importances."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import TooFewRows, UnsupportedModel
from .boosting import GradientBoosting, fit_gradient_boosting
from .forest import RandomForest, fit_random_forest
from .logistic import LogisticRegression, fit_logistic
from .mlp import MLP, fit_mlp
from .svm import SVM, fit_svm_rbf
from .tree import DecisionTree

FAMILIES = ("logistic", "random_forest", "gradient_boosting", "svm", "mlp")
TREE_FAMILIES = ("random_forest", "gradient_boosting")

MODEL_CLASSES = {
    "logistic": LogisticRegression,
    "random_forest": RandomForest,
    "gradient_boosting": GradientBoosting,
    "svm": SVM,
    "mlp": MLP,
    "tree": DecisionTree,
}
_FIT = {
    "logistic": fit_logistic,
    "random_forest": fit_random_forest,
    "gradient_boosting": fit_gradient_boosting,
    "svm": fit_svm_rbf,
    "mlp": fit_mlp,
}
_SEEDED = {"random_forest", "svm", "mlp"}


def _grid(**axes):
    keys = list(axes)
    return [dict(zip(keys, values)) for values in itertools.product(*axes.values())]


DEFAULT_GRIDS = {
    "logistic": _grid(l2_lambda=[0.001, 0.01, 0.1]),
    "random_forest": _grid(n_trees=[100, 300], max_depth=[6, None]),
    "gradient_boosting": _grid(n_rounds=[100, 300], learning_rate=[0.05, 0.1], max_depth=[3, 4]),
    "svm": _grid(C=[0.1, 1.0, 10.0], gamma=[0.01, 0.1, 1.0]),
    "mlp": _grid(learning_rate=[0.01, 0.1]),
}


def fit_model(family: str, X, y, hyperparams: dict | None = None, seed: int = 0, threads: int = 1):
    if family not in _FIT:
        raise UnsupportedModel(f"unknown model family {family!r}")
    kwargs = dict(hyperparams or {})
    if family in _SEEDED:
        kwargs.setdefault("seed", seed)
    if family == "random_forest":
        kwargs["threads"] = threads
    return _FIT[family](X, y, **kwargs)


def stratified_folds(y, k: int, seed: int) -> list[np.ndarray]:
    """Split row indices into ``k`` folds keeping class proportions.

    Each class is shuffled with ``default_rng(seed)`` and cut into ``k``
    nearly equal parts; fold ``f`` joins part ``f`` of every class.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    parts = []
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise TooFewRows(f"class {cls} has {len(idx)} rows, fewer than {k} folds")
        parts.append(np.array_split(idx[rng.permutation(len(idx))], k))
    return [np.sort(np.concatenate([p[f] for p in parts])) for f in range(k)]


@dataclass
class CVResult:
    family: str
    best: dict
    scores: list[tuple[dict, float]]

    def to_dict(self):
        return {"family": self.family, "best": self.best,
                "scores": [{"hyperparams": h, "mean_auc": s} for h, s in self.scores]}


def cross_validate(X, y, family: str, grid: list[dict] | None = None, k: int = 5, seed: int = 0,
                   threads: int = 1) -> CVResult:
    """Pick the grid setting with the highest mean validation AUC.

    Ties go to the earliest setting in ``grid``.
    """
    from ..evaluation import roc_auc

    grid = DEFAULT_GRIDS[family] if grid is None else grid
    if not grid:
        raise ValueError("hyperparameter grid is empty")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    folds = stratified_folds(y, k, seed)
    everything = np.arange(len(y))

    def score(setting, fold):
        train = np.setdiff1d(everything, fold)
        model = fit_model(family, X[train], y[train], setting, seed=seed)
        return roc_auc(model.predict_proba(X[fold]), y[fold]).auc

    jobs = [(s, f) for s in range(len(grid)) for f in range(k)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            aucs = list(pool.map(lambda j: score(grid[j[0]], folds[j[1]]), jobs))
    else:
        aucs = [score(grid[s], folds[f]) for s, f in jobs]
    means = [float(np.mean(aucs[s * k:(s + 1) * k])) for s in range(len(grid))]

    best = 0
    for s in range(1, len(grid)):
        if means[s] > means[best]:
            best = s
    return CVResult(family, dict(grid[best]), [(dict(g), m) for g, m in zip(grid, means)])


def model_importance(model) -> np.ndarray:
    """Per-feature importance summing to 1 (all zeros if the model never split)."""
    if isinstance(model, (RandomForest, GradientBoosting)):
        return model.feature_importances()
    if isinstance(model, DecisionTree):
        s = model.importances_raw.sum()
        return model.importances_raw / s if s > 0 else model.importances_raw.copy()
    raise UnsupportedModel(f"{type(model).__name__} has no model-based importance")
