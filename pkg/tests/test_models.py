import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_best_split, finite_difference, relative_error
from stylodetect.errors import NoConvergence, SchemaMismatch, TooFewRows, UnsupportedModel
from stylodetect.features import FEATURE_INDEX, N_FEATURES
from stylodetect.models import (
    DEFAULT_GRIDS,
    FAMILIES,
    MLP,
    cross_validate,
    fit_gradient_boosting,
    fit_logistic,
    fit_mlp,
    fit_model,
    fit_random_forest,
    fit_svm_rbf,
    fit_tree,
    gini,
    load_model,
    logistic_objective,
    model_importance,
    rbf_kernel,
    save_model,
    stratified_folds,
)
from stylodetect.models.mlp import init_params, loss_and_grads
from stylodetect.models.persist import dumps_model, model_from_dict, model_to_dict
from stylodetect.models.svm import smo_solve

FAST = {
    "logistic": {},
    "random_forest": {"n_trees": 15},
    "gradient_boosting": {"n_rounds": 20},
    "svm": {},
    "mlp": {"epochs": 30},
}


def separable(n, d=4, seed=0, margin=1.0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
    X[:, 0] += np.where(y == 1, margin, -margin)
    return X, y


def held_out_accuracy(model, seed=99):
    X, y = separable(200, seed=seed)
    return float(np.mean(model.predict(X) == y))


# -- logistic ----------------------------------------------------------------

def test_logistic_zero_epochs():
    X, y = separable(30)
    assert np.all(fit_logistic(X, y, epochs=0).predict_proba(X) == 0.5)


def test_logistic_one_dimensional():
    X = np.array([[-1.0]] * 20 + [[1.0]] * 20)
    y = np.array([0] * 20 + [1] * 20)
    m = fit_logistic(X, y)
    assert m.weights[0] > 0
    p = m.predict_proba(np.linspace(-3, 3, 25)[:, None])
    assert np.all(np.diff(p) > 0)


def test_logistic_heavy_regularisation():
    # balanced classes, since the unpenalised bias settles at the base rate
    X, y = separable(200)
    keep = np.r_[np.flatnonzero(y == 0)[:30], np.flatnonzero(y == 1)[:30]]
    X, y = X[keep], y[keep]
    m = fit_logistic(X, y, l2_lambda=1e6)
    assert np.all(np.abs(m.weights) < 1e-2)
    assert np.all(np.abs(m.predict_proba(X) - 0.5) < 0.01)


def test_logistic_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(8, 5))
    y = rng.integers(0, 2, 8).astype(float)
    w = rng.normal(size=5)
    b = 0.3
    _, dw, db = logistic_objective(w, b, X, y, 0.1)
    num_w = finite_difference(lambda v: logistic_objective(v, b, X, y, 0.1)[0], w)
    num_b = finite_difference(lambda v: logistic_objective(w, v[0], X, y, 0.1)[0], [b])
    assert relative_error(dw, num_w) < 1e-6
    assert relative_error([db], num_b) < 1e-6


# -- tree --------------------------------------------------------------------

@pytest.mark.parametrize("labels, expected", [([0, 0, 1, 1], 0.5), ([1, 1, 1], 0.0),
                                              ([0], 0.0), ([0, 1, 1, 1], 0.375)])
def test_gini(labels, expected):
    assert gini(labels) == expected


def test_tree_single_separating_feature():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 3))
    y = (X[:, 2] > 0.1).astype(int)
    t = fit_tree(X, y)
    assert t.tree.depth() == 1
    assert t.tree.feature[0] == 2
    threshold, _ = brute_force_best_split(X[:, 2].tolist(), y.tolist())
    assert t.tree.threshold[0] == pytest.approx(threshold, abs=1e-12)
    assert np.all(t.predict(X) == y)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 1)), min_size=2, max_size=25))
def test_root_split_matches_brute_force(pairs):
    x = [float(v) for v, _ in pairs]
    y = [c for _, c in pairs]
    t = fit_tree(np.array(x)[:, None], np.array(y), max_depth=1)
    threshold, gain = brute_force_best_split(x, y)
    if threshold is None:
        assert t.tree.n_nodes == 1
    else:
        assert t.tree.threshold[0] == threshold
        assert t.importances_raw[0] == pytest.approx(gain, abs=1e-9)


def test_tree_tie_goes_to_lowest_feature():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    y = np.array([0, 1, 0, 1])
    assert fit_tree(X, y).tree.feature[0] == 0


def test_tree_max_depth_zero():
    X, y = separable(50)
    p = fit_tree(X, y, max_depth=0).predict_proba(X)
    assert np.all(p == np.mean(y))


# -- forest ------------------------------------------------------------------

def test_forest_degenerates_to_tree():
    X, y = separable(80)
    f = fit_random_forest(X, y, n_trees=1, bootstrap=False, feature_subset_size=None)
    assert np.array_equal(f.predict_proba(X), fit_tree(X, y).predict_proba(X))


def test_forest_thread_invariance_and_mean():
    X, y = separable(120, seed=2)
    a = fit_random_forest(X, y, n_trees=12, seed=5)
    b = fit_random_forest(X, y, n_trees=12, seed=5, threads=4)
    probe = separable(50, seed=3)[0]
    assert np.array_equal(a.predict_proba(probe), b.predict_proba(probe))
    per_tree = np.array([t.predict_proba(probe) for t in a.trees])
    assert np.allclose(a.predict_proba(probe), per_tree.mean(axis=0), rtol=0, atol=1e-15)


def test_forest_separable_accuracy():
    X, y = separable(200)
    assert held_out_accuracy(fit_random_forest(X, y, n_trees=50, seed=0)) >= 0.95


# -- boosting ----------------------------------------------------------------

def test_boosting_zero_rounds():
    X, y = separable(40)
    y[:30] = 1
    m = fit_gradient_boosting(X, y, n_rounds=0)
    assert np.allclose(m.predict_proba(X), np.mean(y), rtol=0, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_boosting_loss_never_increases(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 3))
    y = rng.integers(0, 2, 60)
    m = fit_gradient_boosting(X, y, n_rounds=25, max_depth=2)
    assert np.all(np.diff(m.loss_history) <= 1e-12)


def test_boosting_separable_accuracy():
    X, y = separable(200)
    assert held_out_accuracy(fit_gradient_boosting(X, y)) >= 0.95


# -- svm ---------------------------------------------------------------------

@settings(max_examples=30)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=6), st.floats(1e-6, 10))
def test_kernel_identity(x, gamma):
    x = np.array([x])
    assert rbf_kernel(x, x, gamma)[0, 0] == 1.0


def test_kernel_hand_value():
    k = rbf_kernel(np.array([[0.0, 0.0]]), np.array([[1.0, 1.0]]), 0.5)[0, 0]
    assert k == pytest.approx(np.exp(-1), abs=1e-15)
    assert round(k, 6) == 0.367879


def test_svm_xor():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]] * 10, dtype=float)
    y = np.array([0, 0, 1, 1] * 10)
    m = fit_svm_rbf(X, y, C=10, gamma=1)
    assert np.all(m.predict(X) == y)
    assert np.all(np.sign(m.decision_function(X)) == np.where(y == 1, 1, -1))


def test_svm_iteration_cap():
    X, y = separable(60, margin=0.0)
    K = rbf_kernel(X, X, 0.1)
    with pytest.raises(NoConvergence):
        smo_solve(K, np.where(y == 1, 1.0, -1.0), 10.0, max_iter=2)


def test_svm_dual_constraints():
    X, y = separable(50, seed=4)
    ys = np.where(y == 1, 1.0, -1.0)
    alpha, _ = smo_solve(rbf_kernel(X, X, 0.5), ys, 1.0)
    assert np.all((alpha >= 0) & (alpha <= 1.0 + 1e-12))
    assert abs(alpha @ ys) < 1e-9


def test_svm_platt_is_increasing():
    X, y = separable(100)
    m = fit_svm_rbf(X, y)
    assert m.platt_a < 0
    assert held_out_accuracy(m) >= 0.9


# -- mlp ---------------------------------------------------------------------

def test_mlp_zero_output_layer():
    params = init_params([3, 16, 1], np.random.default_rng(0))
    params[-1] = (np.zeros((16, 1)), np.zeros(1))
    assert np.all(MLP(params).predict_proba(np.ones((4, 3))) == 0.5)


def test_mlp_gradients_match_finite_differences():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(6, 4))
    y = rng.integers(0, 2, 6).astype(float)
    params = init_params([4, 5, 3, 1], rng)
    params = [(W, rng.normal(scale=0.1, size=b.shape)) for W, b in params]
    _, grads = loss_and_grads(params, X, y)
    for layer, (dW, db) in enumerate(grads):
        W, b = params[layer]

        def loss_w(v, layer=layer, b=b):
            p = list(params)
            p[layer] = (v, b)
            return loss_and_grads(p, X, y)[0]

        def loss_b(v, layer=layer, W=W):
            p = list(params)
            p[layer] = (W, v)
            return loss_and_grads(p, X, y)[0]

        assert relative_error(dW, finite_difference(loss_w, W)) < 1e-4
        assert relative_error(db, finite_difference(loss_b, b)) < 1e-4


def test_mlp_learns_and():
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * 10, dtype=float)
    y = np.array([0, 0, 0, 1] * 10)
    m = fit_mlp(X, y, epochs=500, seed=0)
    assert np.all(m.predict(X) == y)


# -- contract and reproducibility -------------------------------------------

@pytest.mark.parametrize("family", FAMILIES)
def test_contract_and_reproducibility(family):
    X, y = separable(80, d=5)
    probe = np.random.default_rng(7).normal(scale=50, size=(30, 5))
    a = fit_model(family, X, y, FAST[family], seed=11)
    b = fit_model(family, X, y, FAST[family], seed=11)
    pa, pb = a.predict_proba(probe), b.predict_proba(probe)
    assert np.all((pa >= 0) & (pa <= 1))
    if family in ("random_forest", "gradient_boosting"):
        assert np.array_equal(pa, pb)
    else:
        assert np.allclose(pa, pb, rtol=0, atol=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_persistence_round_trip(family, tmp_path):
    X, y = separable(60, d=N_FEATURES)
    m = fit_model(family, X, y, FAST[family], seed=1)
    path = tmp_path / f"{family}.json"
    save_model(m, path)
    back = load_model(path)
    assert type(back) is type(m)
    assert np.array_equal(back.predict_proba(X), m.predict_proba(X))
    assert dumps_model(back) == path.read_text()


def test_persistence_rejects_other_schema():
    X, y = separable(30, d=N_FEATURES)
    doc = model_to_dict(fit_logistic(X, y, epochs=5))
    doc["feature_schema_hash"] = "0" * 64
    with pytest.raises(SchemaMismatch):
        model_from_dict(json.loads(json.dumps(doc)))
    with pytest.raises(UnsupportedModel):
        fit_model("knn", X, y)


# -- cross-validation --------------------------------------------------------

def test_default_grid_sizes():
    sizes = {k: len(v) for k, v in DEFAULT_GRIDS.items()}
    assert sizes == {"logistic": 3, "random_forest": 4, "gradient_boosting": 8, "svm": 9, "mlp": 2}


def test_stratified_folds():
    y = np.array([0, 1] * 50)
    folds = stratified_folds(y, 5, seed=0)
    assert [len(f) for f in folds] == [20] * 5
    assert all(np.sum(y[f]) == 10 for f in folds)
    assert sorted(np.concatenate(folds).tolist()) == list(range(100))
    with pytest.raises(TooFewRows):
        stratified_folds(np.array([0, 0, 0, 1, 1]), 3, 0)


def test_cv_single_setting():
    X, y = separable(40)
    res = cross_validate(X, y, "logistic", [{"l2_lambda": 0.5}], k=4)
    assert res.best == {"l2_lambda": 0.5}
    assert len(res.scores) == 1


def test_cv_picks_working_gamma():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]] * 10, dtype=float)
    X += np.random.default_rng(0).normal(scale=0.05, size=X.shape)
    y = np.array([0, 0, 1, 1] * 10)
    res = cross_validate(X, y, "svm", [{"C": 10.0, "gamma": 1e-6}, {"C": 10.0, "gamma": 1.0}], k=5)
    assert res.best["gamma"] == 1.0
    assert res.scores[1][1] > res.scores[0][1]


def test_cv_ties_go_to_first_setting():
    X, y = separable(40)
    # zero epochs gives constant scores, so both settings tie at AUC 0.5
    grid = [{"l2_lambda": 0.5, "epochs": 0}, {"l2_lambda": 0.1, "epochs": 0}]
    res = cross_validate(X, y, "logistic", grid, k=4)
    assert res.scores[0][1] == res.scores[1][1] == 0.5
    assert res.best == grid[0]


# -- importance --------------------------------------------------------------

def test_single_split_importance():
    X = np.zeros((20, 4))
    X[:, 2] = np.arange(20)
    y = (X[:, 2] >= 10).astype(int)
    t = fit_tree(X, y)
    assert model_importance(t).tolist() == [0, 0, 1, 0]
    f = fit_random_forest(X, y, n_trees=1, bootstrap=False, feature_subset_size=None)
    assert model_importance(f).tolist() == [0, 0, 1, 0]
    g = fit_gradient_boosting(X, y, n_rounds=1, max_depth=1)
    assert model_importance(g).tolist() == [0, 0, 1, 0]


@pytest.mark.parametrize("family", ["logistic", "svm", "mlp"])
def test_importance_unsupported(family):
    X, y = separable(30)
    with pytest.raises(UnsupportedModel):
        model_importance(fit_model(family, X, y, FAST[family]))


def test_shifted_coleman_liau_ranks_first():
    rng = np.random.default_rng(0)
    y = np.array([0, 1] * 100)
    X = rng.normal(size=(200, N_FEATURES))
    X[:, FEATURE_INDEX["coleman_liau_index"]] += np.where(y == 0, 1.5, -1.5)
    for family in ("random_forest", "gradient_boosting"):
        imp = model_importance(fit_model(family, X, y, FAST[family], seed=0))
        assert np.all(imp >= 0) and abs(imp.sum() - 1) < 1e-9
        assert int(np.argmax(imp)) == FEATURE_INDEX["coleman_liau_index"]
