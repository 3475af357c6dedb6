"""CART-style trees shared by the forest and the boosting model.

A fitted tree is stored as flat arrays indexed by node id (preorder). Leaves
have ``feature == -1``. A sample goes left when ``x[feature] <= threshold``.
"""
from __future__ import annotations

import numpy as np

from .base import Classifier, check_xy

LEAF = -1
_MIN_GAIN = 1e-12


class TreeArrays:
    def __init__(self, feature, threshold, left, right, value, n_samples):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_samples = np.asarray(n_samples, dtype=np.int64)

    @property
    def n_nodes(self):
        return len(self.feature)

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf id reached by each row of ``X``."""
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            feat = self.feature[node]
            active = feat != LEAF
            if not active.any():
                return node
            r = rows[active]
            n = node[active]
            go_left = X[r, feat[active]] <= self.threshold[n]
            node[active] = np.where(go_left, self.left[n], self.right[n])

    def predict_value(self, X):
        return self.value[self.apply(X)]

    def to_dict(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "n_samples": self.n_samples.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"], d["n_samples"])


def gini(labels) -> float:
    labels = np.asarray(labels)
    if len(labels) == 0:
        return 0.0
    p = float(np.mean(labels))
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _sorted_columns(Xn):
    order = np.argsort(Xn, axis=0, kind="stable")
    return order, np.take_along_axis(Xn, order, axis=0)


def _best_of(gain, xs, feats):
    """Pick the best candidate: lowest feature index, then lowest threshold.

    ``gain`` has shape (m - 1, k) with invalid positions set to -inf; ``feats``
    is sorted ascending, so a feature-major argmax realises the tie rule.
    """
    flat = gain.T.ravel()
    best = int(np.argmax(flat))
    if not flat[best] > _MIN_GAIN:
        return None
    col, pos = divmod(best, gain.shape[0])
    lo, hi = xs[pos, col], xs[pos + 1, col]
    threshold = lo + (hi - lo) / 2.0
    if not lo <= threshold < hi:
        threshold = lo
    return int(feats[col]), float(threshold), float(flat[best])


def gini_split(Xn, yn, feats, min_samples_leaf):
    """Best Gini split of a node; returns (feature, threshold, gain) or None.

    ``gain`` is the impurity decrease in sample units,
    ``m * gini(parent) - m_left * gini(left) - m_right * gini(right)``.
    """
    m = len(yn)
    if m < 2 * min_samples_leaf or m < 2:
        return None
    order, xs = _sorted_columns(Xn[:, feats])
    ys = yn[order].astype(np.float64)
    pos_left = np.cumsum(ys, axis=0)[:-1]
    total_pos = float(yn.sum())
    n_left = np.arange(1, m, dtype=np.float64)[:, None]
    n_right = m - n_left
    pos_right = total_pos - pos_left
    weighted_left = 2.0 * pos_left * (n_left - pos_left) / n_left
    weighted_right = 2.0 * pos_right * (n_right - pos_right) / n_right
    parent = 2.0 * total_pos * (m - total_pos) / m
    gain = parent - weighted_left - weighted_right
    valid = (xs[1:] > xs[:-1]) & (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
    gain = np.where(valid, gain, -np.inf)
    return _best_of(gain, xs, feats)


def newton_split(Xn, gn, hn, feats, min_child_weight, reg_lambda):
    """Best second-order split; gain is the reduction in the regularised loss."""
    m = len(gn)
    if m < 2:
        return None
    order, xs = _sorted_columns(Xn[:, feats])
    g_left = np.cumsum(gn[order], axis=0)[:-1]
    h_left = np.cumsum(hn[order], axis=0)[:-1]
    G, H = float(gn.sum()), float(hn.sum())
    g_right = G - g_left
    h_right = H - h_left
    gain = 0.5 * (
        g_left**2 / (h_left + reg_lambda)
        + g_right**2 / (h_right + reg_lambda)
        - G * G / (H + reg_lambda)
    )
    valid = (xs[1:] > xs[:-1]) & (h_left >= min_child_weight) & (h_right >= min_child_weight)
    gain = np.where(valid, gain, -np.inf)
    return _best_of(gain, xs, feats)


def grow_tree(X, n_features, max_depth, split, leaf_value, rng=None, feature_subset_size=None,
              index=None):
    """Grow a tree depth-first.

    ``split(index, feats)`` returns ``(feature, threshold, gain)`` or None and
    ``leaf_value(index)`` the value stored at a node. Returns the tree and a
    per-feature array of summed split gains.
    """
    feature, threshold, left, right, value, n_samples = [], [], [], [], [], []
    gains = np.zeros(n_features)
    all_feats = np.arange(n_features)
    if index is None:
        index = np.arange(len(X))

    def new_node(idx):
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(leaf_value(idx))
        n_samples.append(len(idx))
        return len(feature) - 1

    root = new_node(index)
    stack = [(root, index, 0)]
    while stack:
        node, idx, depth = stack.pop()
        if max_depth is not None and depth >= max_depth:
            continue
        if feature_subset_size is None or feature_subset_size >= n_features:
            feats = all_feats
        else:
            feats = np.sort(rng.choice(n_features, size=feature_subset_size, replace=False))
        found = split(idx, feats)
        if found is None:
            continue
        f, thr, gain = found
        goes_left = X[idx, f] <= thr
        left_idx, right_idx = idx[goes_left], idx[~goes_left]
        feature[node] = f
        threshold[node] = thr
        gains[f] += gain
        l_node = new_node(left_idx)
        r_node = new_node(right_idx)
        left[node], right[node] = l_node, r_node
        # right pushed first so the left subtree is expanded (and numbered) first
        stack.append((r_node, right_idx, depth + 1))
        stack.append((l_node, left_idx, depth + 1))
    return TreeArrays(feature, threshold, left, right, value, n_samples), gains


class DecisionTree(Classifier):
    name = "tree"

    def __init__(self, tree: TreeArrays, importances_raw, hyperparams=None):
        super().__init__(hyperparams)
        self.tree = tree
        self.importances_raw = np.asarray(importances_raw, dtype=np.float64)

    def decision_function(self, X):
        return self.tree.predict_value(check_xy(X))

    def predict_proba(self, X):
        return self.decision_function(X)

    def get_state(self):
        return {"tree": self.tree.to_dict(), "importances_raw": self.importances_raw.tolist()}

    @classmethod
    def from_state(cls, hyperparams, state):
        return cls(TreeArrays.from_dict(state["tree"]), state["importances_raw"], hyperparams)


def fit_tree(X, y, max_depth=None, min_samples_leaf=1, feature_subset_size=None, rng=None,
             sample_index=None) -> DecisionTree:
    """CART classification tree with Gini impurity.

    ``sample_index`` (possibly with repeats) selects the training rows, which
    is how the forest passes bootstrap samples. Leaves store the positive
    fraction of their samples.
    """
    X, y = check_xy(X, y)
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    index = np.arange(len(X)) if sample_index is None else np.asarray(sample_index, dtype=np.int64)

    def split(idx, feats):
        return gini_split(X[idx], y[idx], feats, min_samples_leaf)

    def leaf_value(idx):
        return float(np.mean(y[idx])) if len(idx) else 0.5

    tree, gains = grow_tree(X, X.shape[1], max_depth, split, leaf_value, rng=rng,
                            feature_subset_size=feature_subset_size, index=index)
    hyperparams = {"max_depth": max_depth, "min_samples_leaf": min_samples_leaf,
                   "feature_subset_size": feature_subset_size}
    return DecisionTree(tree, gains, hyperparams)
