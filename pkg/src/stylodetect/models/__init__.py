from .base import Classifier
from .boosting import GradientBoosting, fit_gradient_boosting
from .forest import RandomForest, fit_random_forest
from .logistic import LogisticRegression, fit_logistic, logistic_objective
from .mlp import MLP, fit_mlp
from .persist import load_model, save_model
from .selection import (
    DEFAULT_GRIDS,
    FAMILIES,
    TREE_FAMILIES,
    CVResult,
    cross_validate,
    fit_model,
    model_importance,
    stratified_folds,
)
from .svm import SVM, fit_svm_rbf, rbf_kernel
from .tree import DecisionTree, fit_tree, gini

__all__ = [
    "Classifier",
    "CVResult",
    "DEFAULT_GRIDS",
    "DecisionTree",
    "FAMILIES",
    "GradientBoosting",
    "LogisticRegression",
    "MLP",
    "RandomForest",
    "SVM",
    "TREE_FAMILIES",
    "cross_validate",
    "fit_gradient_boosting",
    "fit_logistic",
    "fit_mlp",
    "fit_model",
    "fit_random_forest",
    "fit_svm_rbf",
    "fit_tree",
    "gini",
    "load_model",
    "logistic_objective",
    "model_importance",
    "rbf_kernel",
    "save_model",
    "stratified_folds",
]
