"""Native regression baselines over flat run features.

Feature layout: 96 stock-history entries, 182 scenario costs, and the periods
since the previous run (279 columns). Targets are finish offsets in hours.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import lasso_cd
from .config import PERIOD_HOURS
from .consumer import SimRun

N_FEATURES = 96 + 182 + 1


def featurize(run: SimRun) -> np.ndarray:
    return np.concatenate([
        run.stock_history, run.costs, [float(run.periods_since_last)]
    ])


def target_hours(run: SimRun) -> float:
    return run.chosen_offset * PERIOD_HOURS


def design_matrix(runs: list[SimRun]) -> tuple[np.ndarray, np.ndarray]:
    X = np.stack([featurize(r) for r in runs])
    y = np.array([target_hours(r) for r in runs])
    return X, y


def standardize_fit(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column means and stddevs; constant columns get stddev 1 so they map to 0."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0.0] = 1.0
    return mean, std


def standardize_apply(X: np.ndarray, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    return (X - mean) / std


@dataclass(frozen=True)
class RegressorSpec:
    """kind: mean | ols | ridge | lasso | knn.

    alpha is the ridge/lasso penalty; k the neighbour count. OLS refuses
    underdetermined systems unless underdetermined="min-norm", which falls
    back to the minimum-norm least-squares solution.
    """

    kind: str
    alpha: float = 1.0
    k: int = 5
    underdetermined: str = "error"


@dataclass
class FittedModel:
    spec: RegressorSpec
    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: float
    coef: np.ndarray | None = None
    train_X: np.ndarray | None = None    # standardized; kNN only
    train_y: np.ndarray | None = None


LAMBDA_GRID = tuple(float(v) for v in np.logspace(-3, 3, 7))
K_GRID = (3, 5, 7)
LASSO_TOL = 1e-6
LASSO_MAX_ITER = 20000


def _fit_lasso(Xs: np.ndarray, yc: np.ndarray, alpha: float) -> np.ndarray:
    """Coordinate descent on (1/2n)||y - Xb||^2 + alpha * ||b||_1."""
    col_norm = (Xs * Xs).sum(axis=0) / Xs.shape[0]
    cols = np.ascontiguousarray(Xs.T)
    return lasso_cd(cols, yc, float(alpha), col_norm, LASSO_MAX_ITER, LASSO_TOL)


def fit(spec: RegressorSpec, X: np.ndarray, y: np.ndarray) -> FittedModel:
    if X.ndim != 2 or X.shape[0] != y.size or X.shape[0] == 0:
        raise ValueError("bad training shapes")
    x_mean, x_std = standardize_fit(X)
    Xs = standardize_apply(X, x_mean, x_std)
    y_mean = float(y.mean())
    yc = y - y_mean
    model = FittedModel(spec=spec, x_mean=x_mean, x_std=x_std, y_mean=y_mean)
    n, p = Xs.shape

    if spec.kind == "mean":
        pass
    elif spec.kind == "ols":
        if n <= p:
            if spec.underdetermined != "min-norm":
                raise ValueError(
                    "singular system: fewer samples than features; use ridge instead"
                )
            model.coef = np.linalg.lstsq(Xs, yc, rcond=None)[0]
        else:
            gram = Xs.T @ Xs
            try:
                model.coef = np.linalg.solve(gram, Xs.T @ yc)
            except np.linalg.LinAlgError:
                raise ValueError("singular system: use ridge instead") from None
    elif spec.kind == "ridge":
        if spec.alpha <= 0:
            raise ValueError("ridge penalty must be positive")
        gram = Xs.T @ Xs + spec.alpha * np.eye(p)
        model.coef = np.linalg.solve(gram, Xs.T @ yc)
    elif spec.kind == "lasso":
        if spec.alpha <= 0:
            raise ValueError("lasso penalty must be positive")
        model.coef = _fit_lasso(Xs, yc, spec.alpha)
    elif spec.kind == "knn":
        if not 1 <= spec.k <= n:
            raise ValueError(f"k must lie in [1, {n}]")
        model.train_X = Xs
        model.train_y = y.copy()
    else:
        raise ValueError(f"unknown regressor kind: {spec.kind}")
    return model


def predict_baseline(model: FittedModel, X: np.ndarray) -> np.ndarray:
    Xs = standardize_apply(X, model.x_mean, model.x_std)
    kind = model.spec.kind
    if kind == "mean":
        return np.full(X.shape[0], model.y_mean)
    if kind in ("ols", "ridge", "lasso"):
        return Xs @ model.coef + model.y_mean
    if kind == "knn":
        preds = np.empty(X.shape[0])
        for i, row in enumerate(Xs):
            dist = np.sqrt(((model.train_X - row) ** 2).sum(axis=1))
            nearest = np.argpartition(dist, model.spec.k - 1)[: model.spec.k]
            preds[i] = model.train_y[nearest].mean()
        return preds
    raise ValueError(f"unknown regressor kind: {kind}")


def mae(predicted: np.ndarray, actual: np.ndarray) -> float:
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if predicted.shape != actual.shape or predicted.size == 0:
        raise ValueError("predictions and actuals must be matching nonempty arrays")
    return float(np.mean(np.abs(predicted - actual)))
