"""Feature extraction and the native regression baselines."""
import numpy as np
import pytest

from breadsched.baselines import (
    K_GRID,
    LAMBDA_GRID,
    N_FEATURES,
    RegressorSpec,
    design_matrix,
    featurize,
    fit,
    mae,
    predict_baseline,
    standardize_apply,
    standardize_fit,
    target_hours,
)
from breadsched.consumer import simulate
from breadsched.prices import TariffZones, generate_price_horizon
from breadsched.config import TariffConfig


@pytest.fixture(scope="module")
def some_runs():
    zones = TariffZones.from_config(TariffConfig())
    prices = generate_price_horizon(22, "medium", seed=3, zones=zones)
    return simulate(20, prices, seed=4)


def synthetic(n: int, p: int, seed: int = 0, noise: float = 0.0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    w = rng.normal(size=p)
    y = X @ w + 2.5 + noise * rng.normal(size=n)
    return X, y


class TestFeatures:
    def test_arity_is_279(self, some_runs):
        assert N_FEATURES == 279
        assert featurize(some_runs[0]).shape == (279,)

    def test_identical_runs_identical_vectors(self, some_runs):
        assert np.array_equal(featurize(some_runs[0]), featurize(some_runs[0]))

    def test_layout_order(self, some_runs):
        run = some_runs[0]
        x = featurize(run)
        assert np.array_equal(x[:96], run.stock_history)
        assert np.array_equal(x[96:278], run.costs)
        assert x[278] == run.periods_since_last

    def test_target_in_hours(self, some_runs):
        run = some_runs[0]
        assert target_hours(run) == run.chosen_offset * 0.25

    def test_design_matrix_shapes(self, some_runs):
        X, y = design_matrix(some_runs)
        assert X.shape == (len(some_runs), 279)
        assert y.shape == (len(some_runs),)


class TestStandardize:
    def test_idempotence(self):
        X = np.random.default_rng(1).normal(3.0, 2.0, size=(40, 6))
        m, s = standardize_fit(X)
        Xs = standardize_apply(X, m, s)
        m2, s2 = standardize_fit(Xs)
        assert np.allclose(standardize_apply(Xs, m2, s2), Xs, atol=1e-9)

    def test_constant_columns_map_to_zero(self):
        X = np.ones((10, 3))
        X[:, 1] = np.arange(10)
        m, s = standardize_fit(X)
        Xs = standardize_apply(X, m, s)
        assert np.all(Xs[:, 0] == 0.0) and np.all(Xs[:, 2] == 0.0)


class TestFit:
    def test_mean_of_four_and_six_predicts_five(self):
        X = np.zeros((2, 3))
        model = fit(RegressorSpec(kind="mean"), X, np.array([4.0, 6.0]))
        assert np.allclose(predict_baseline(model, np.zeros((5, 3))), 5.0)

    def test_ridge_shrinks_to_the_mean(self):
        X, y = synthetic(30, 5, seed=2)
        model = fit(RegressorSpec(kind="ridge", alpha=1e12), X, y)
        preds = predict_baseline(model, X)
        assert np.allclose(preds, y.mean(), atol=1e-6)

    def test_ridge_matches_independent_dense_solver(self):
        X, y = synthetic(10, 5, seed=3, noise=0.3)
        alpha = 2.0
        model = fit(RegressorSpec(kind="ridge", alpha=alpha), X, y)
        m, s = standardize_fit(X)
        Xs = standardize_apply(X, m, s)
        yc = y - y.mean()
        coef = np.linalg.inv(Xs.T @ Xs + alpha * np.eye(5)) @ Xs.T @ yc
        assert np.allclose(model.coef, coef, atol=1e-9)
        assert np.allclose(predict_baseline(model, X), Xs @ coef + y.mean(), atol=1e-9)

    def test_lasso_satisfies_the_kkt_conditions(self):
        X, y = synthetic(30, 8, seed=4, noise=0.5)
        alpha = 0.1
        model = fit(RegressorSpec(kind="lasso", alpha=alpha), X, y)
        Xs = standardize_apply(X, model.x_mean, model.x_std)
        resid = (y - model.y_mean) - Xs @ model.coef
        grad = Xs.T @ resid / X.shape[0]
        for j in range(8):
            if model.coef[j] != 0.0:
                assert grad[j] == pytest.approx(alpha * np.sign(model.coef[j]), abs=1e-5)
            else:
                assert abs(grad[j]) <= alpha + 1e-5

    def test_ols_interpolates_a_linear_target(self):
        X, y = synthetic(40, 6, seed=5)
        model = fit(RegressorSpec(kind="ols"), X, y)
        assert np.allclose(predict_baseline(model, X), y, atol=1e-8)

    def test_ols_refuses_underdetermined_systems(self):
        X, y = synthetic(5, 9, seed=6)
        with pytest.raises(ValueError, match="use ridge instead"):
            fit(RegressorSpec(kind="ols"), X, y)

    def test_ols_min_norm_fallback_interpolates(self):
        X, y = synthetic(5, 9, seed=7)
        model = fit(RegressorSpec(kind="ols", underdetermined="min-norm"), X, y)
        assert np.allclose(predict_baseline(model, X), y, atol=1e-8)

    def test_knn_with_k_equal_n_predicts_the_mean(self):
        X, y = synthetic(12, 4, seed=8, noise=1.0)
        model = fit(RegressorSpec(kind="knn", k=12), X, y)
        assert np.allclose(predict_baseline(model, X), y.mean(), atol=1e-12)

    def test_knn_k_one_memorizes(self):
        X, y = synthetic(12, 4, seed=9, noise=1.0)
        model = fit(RegressorSpec(kind="knn", k=1), X, y)
        assert np.allclose(predict_baseline(model, X), y, atol=1e-12)

    def test_validation_errors(self):
        X, y = synthetic(10, 3, seed=10)
        with pytest.raises(ValueError):
            fit(RegressorSpec(kind="ridge", alpha=0.0), X, y)
        with pytest.raises(ValueError):
            fit(RegressorSpec(kind="lasso", alpha=-1.0), X, y)
        with pytest.raises(ValueError):
            fit(RegressorSpec(kind="knn", k=11), X, y)
        with pytest.raises(ValueError):
            fit(RegressorSpec(kind="spline"), X, y)
        with pytest.raises(ValueError):
            fit(RegressorSpec(kind="mean"), X, y[:-1])

    def test_predict_rejects_wrong_arity(self):
        X, y = synthetic(10, 3, seed=11)
        model = fit(RegressorSpec(kind="ridge", alpha=1.0), X, y)
        with pytest.raises(ValueError):
            predict_baseline(model, np.zeros((2, 5)))


class TestMae:
    def test_identical_vectors(self):
        assert mae(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0

    def test_two_periods_everywhere_is_half_an_hour(self):
        actual = np.array([10, 40, 90]) * 0.25
        predicted = np.array([12, 42, 92]) * 0.25
        assert mae(predicted, actual) == pytest.approx(0.5)

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(12)
        a, b = rng.normal(size=50), rng.normal(size=50)
        expected = sum(abs(x - y) for x, y in zip(a, b)) / 50
        assert mae(a, b) == pytest.approx(expected, rel=1e-12)

    def test_symmetry_and_translation_invariance(self):
        rng = np.random.default_rng(13)
        a, b = rng.normal(size=20), rng.normal(size=20)
        assert mae(a, b) == mae(b, a)
        assert mae(a + 3.0, b + 3.0) == pytest.approx(mae(a, b), rel=1e-12)

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            mae(np.array([]), np.array([]))
        with pytest.raises(ValueError):
            mae(np.array([1.0]), np.array([1.0, 2.0]))


def test_hyperparameter_grids():
    assert len(LAMBDA_GRID) == 7
    assert LAMBDA_GRID[0] == pytest.approx(1e-3) and LAMBDA_GRID[-1] == pytest.approx(1e3)
    assert K_GRID == (3, 5, 7)
