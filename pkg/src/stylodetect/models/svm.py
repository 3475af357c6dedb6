"""RBF-kernel support vector machine trained with SMO, with Platt scaling.

The solver works on the standard dual

    min 1/2 a' Q a - sum(a)   s.t.  0 <= a <= C,  y' a = 0,
    Q_ij = y_i y_j K(x_i, x_j)

and picks the maximal violating pair at each step (the first-order working
set rule). It stops once the KKT gap ``m(a) - M(a)`` falls below ``tol``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import NoConvergence
from .base import Classifier, check_xy

DEFAULTS = {"C": 1.0, "gamma": 0.1, "tol": 1e-3, "max_iter": 100_000, "platt_folds": 5, "seed": 0}
_TAU = 1e-12


def rbf_kernel(U, V, gamma: float) -> np.ndarray:
    """``K[i, j] = exp(-gamma * |U[i] - V[j]|^2)``."""
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    return np.exp(-gamma * cdist(U, V, "sqeuclidean"))


def smo_solve(K, y_signed, C, tol=1e-3, max_iter=100_000):
    """Return ``(alpha, b)`` for kernel matrix ``K`` and labels in {-1, +1}."""
    n = len(y_signed)
    y = y_signed.astype(np.float64)
    alpha = np.zeros(n)
    grad = -np.ones(n)
    diag = np.diag(K).copy()

    for it in range(max_iter):
        score = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            break
        i = int(np.argmax(np.where(up, score, -np.inf)))
        j = int(np.argmin(np.where(low, score, np.inf)))
        if score[i] - score[j] < tol:
            break

        Qij = y[i] * y[j] * K[i, j]
        ai_old, aj_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = diag[i] + diag[j] + 2 * Qij
            delta = (-grad[i] - grad[j]) / max(quad, _TAU)
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = diag[i] + diag[j] - 2 * Qij
            delta = (grad[i] - grad[j]) / max(quad, _TAU)
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total

        alpha[i], alpha[j] = ai, aj
        grad += y * (y[i] * K[:, i] * (ai - ai_old) + y[j] * K[:, j] * (aj - aj_old))
    else:
        raise NoConvergence(max_iter)

    yg = y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        rho = float(np.mean(yg[free]))
    else:
        ub = np.inf
        lb = -np.inf
        for t in range(n):
            if (y[t] > 0 and alpha[t] >= C) or (y[t] < 0 and alpha[t] <= 0):
                lb = max(lb, yg[t])
            else:
                ub = min(ub, yg[t])
        rho = (ub + lb) / 2 if np.isfinite(ub) and np.isfinite(lb) else 0.0
    return alpha, -rho


def fit_platt(decision, labels, max_iter=100):
    """Fit ``P(ai | f) = 1 / (1 + exp(A f + B))`` by regularised Newton steps.

    Targets are smoothed to ``(n+ + 1)/(n+ + 2)`` and ``1/(n- + 2)``.
    """
    f = np.asarray(decision, dtype=np.float64)
    labels = np.asarray(labels)
    prior1 = float(np.sum(labels == 1))
    prior0 = float(len(labels) - prior1)
    hi = (prior1 + 1) / (prior1 + 2)
    lo = 1 / (prior0 + 2)
    t = np.where(labels == 1, hi, lo)
    min_step, sigma, eps = 1e-10, 1e-12, 1e-5

    def objective(A, B):
        fApB = f * A + B
        return float(np.sum(np.where(fApB >= 0, t * fApB + np.log1p(np.exp(-np.abs(fApB))),
                                     (t - 1) * fApB + np.log1p(np.exp(-np.abs(fApB))))))

    A, B = 0.0, math.log((prior0 + 1) / (prior1 + 1))
    fval = objective(A, B)
    for _ in range(max_iter):
        fApB = f * A + B
        e = np.exp(-np.abs(fApB))
        p = np.where(fApB >= 0, e / (1 + e), 1 / (1 + e))
        q = 1 - p
        d2 = p * q
        h11 = sigma + float(np.sum(f * f * d2))
        h22 = sigma + float(np.sum(d2))
        h21 = float(np.sum(f * d2))
        d1 = t - p
        g1 = float(np.sum(f * d1))
        g2 = float(np.sum(d1))
        if abs(g1) < eps and abs(g2) < eps:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        step = 1.0
        while step >= min_step:
            newA, newB = A + step * dA, B + step * dB
            newf = objective(newA, newB)
            if newf < fval + 1e-4 * step * gd:
                A, B, fval = newA, newB, newf
                break
            step /= 2
        else:
            break
    return A, B


class SVM(Classifier):
    name = "svm"

    def __init__(self, support_vectors, dual_coef, bias, gamma, platt_a, platt_b,
                 hyperparams=None):
        super().__init__(hyperparams)
        self.support_vectors = np.asarray(support_vectors, dtype=np.float64)
        self.dual_coef = np.asarray(dual_coef, dtype=np.float64)
        self.bias = float(bias)
        self.gamma = float(gamma)
        self.platt_a = float(platt_a)
        self.platt_b = float(platt_b)

    def decision_function(self, X):
        X = check_xy(X)
        if len(self.dual_coef) == 0:
            return np.full(len(X), self.bias)
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.dual_coef + self.bias

    def predict_proba(self, X):
        z = self.platt_a * self.decision_function(X) + self.platt_b
        # 1 / (1 + exp(z)) written to avoid overflow
        return np.where(z >= 0, np.exp(-np.abs(z)) / (1 + np.exp(-np.abs(z))),
                        1 / (1 + np.exp(-np.abs(z))))

    def get_state(self):
        return {"support_vectors": self.support_vectors.tolist(),
                "dual_coef": self.dual_coef.tolist(), "bias": self.bias, "gamma": self.gamma,
                "platt_a": self.platt_a, "platt_b": self.platt_b}

    @classmethod
    def from_state(cls, hyperparams, state):
        sv = np.asarray(state["support_vectors"], dtype=np.float64)
        return cls(sv.reshape(len(state["dual_coef"]), -1) if sv.size == 0 else sv,
                   state["dual_coef"], state["bias"], state["gamma"], state["platt_a"],
                   state["platt_b"], hyperparams)


def _train_raw(X, y, C, gamma, tol, max_iter):
    ys = np.where(y == 1, 1.0, -1.0)
    alpha, b = smo_solve(rbf_kernel(X, X, gamma), ys, C, tol, max_iter)
    sv = alpha > 0
    return X[sv], alpha[sv] * ys[sv], b


def _decision(sv, coef, b, X, gamma):
    if len(coef) == 0:
        return np.full(len(X), b)
    return rbf_kernel(X, sv, gamma) @ coef + b


def fit_svm_rbf(X, y, C=DEFAULTS["C"], gamma=DEFAULTS["gamma"], tol=DEFAULTS["tol"],
                max_iter=DEFAULTS["max_iter"], platt_folds=DEFAULTS["platt_folds"],
                seed=DEFAULTS["seed"]) -> SVM:
    """Fit the SVM, then calibrate it on out-of-fold decision values.

    Calibration uses a stratified ``platt_folds``-fold split of the training
    data drawn from ``seed``. When a class has fewer rows than folds, the
    in-sample decision values are used instead.

    Raises:
        NoConvergence: if SMO needs more than ``max_iter`` iterations.
    """
    from .selection import stratified_folds

    X, y = check_xy(X, y)
    sv, coef, b = _train_raw(X, y, C, gamma, tol, max_iter)

    counts = np.bincount(y, minlength=2)
    if platt_folds and platt_folds >= 2 and counts.min() >= platt_folds:
        oof = np.empty(len(X))
        for fold in stratified_folds(y, platt_folds, seed):
            train = np.setdiff1d(np.arange(len(X)), fold)
            f_sv, f_coef, f_b = _train_raw(X[train], y[train], C, gamma, tol, max_iter)
            oof[fold] = _decision(f_sv, f_coef, f_b, X[fold], gamma)
    else:
        oof = _decision(sv, coef, b, X, gamma)
    A, B = fit_platt(oof, y)
    hyperparams = {"C": C, "gamma": gamma, "tol": tol, "max_iter": max_iter,
                   "platt_folds": platt_folds, "seed": seed}
    return SVM(sv, coef, b, gamma, A, B, hyperparams)
