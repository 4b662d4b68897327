"""Score gradient-boosting, SVR, random-forest and PLS regressors on a
breadsched dataset using the benchmark's own split file.

The coupling with the scheduling package is purely file-based: the dataset CSV
(one row per appliance run, 279 feature columns, target in periods), the split
CSV (run_id,role), and the shared results CSV schema. Nothing is imported from
it, so either side can be rebuilt independently.

Hyperparameters are tuned on the tuning folds only; the winner is refit on the
whole training share and scored once on the hold-out. Output files are written
atomically, and the sidecar metadata records the id sets actually used so a
reviewer can verify no internal re-splitting happened.
"""
from __future__ import annotations

import configparser
import csv
import hashlib
import io
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.cross_decomposition import PLSRegression
from sklearn.ensemble import GradientBoostingRegressor, RandomForestRegressor
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler
from sklearn.svm import SVR

PERIOD_HOURS = 0.25
N_HIST = 96
N_COSTS = 182
ID_COLUMN = "run_id"
TARGET_COLUMN = "chosen_delta"
FEATURE_COLUMNS = (
    [f"hist_{i}" for i in range(N_HIST)]
    + [f"cost_{i}" for i in range(N_COSTS)]
    + ["periods_since_last"]
)
RESULT_COLUMNS = ["method", "dataset", "split", "mae_hours", "n_train", "seed"]
METHODS = ("gb", "svr", "rf", "pls")
FOLD_ROLES = tuple(f"fold{i}" for i in range(1, 6))
KNOWN_ROLES = ("train",) + FOLD_ROLES + ("holdout",)

TREE_DEPTHS = (3, 6)
TREE_ESTIMATORS = (100, 300)
SVR_C = (1.0, 10.0)
PLS_COMPONENTS = (2, 5, 10)


class JobError(ValueError):
    """Bad inputs: schema mismatch, unknown roles, or id-set violations."""


@dataclass(frozen=True)
class BaselineJob:
    data: str
    splits: str
    out: str
    seed: int = 0


def read_table(path: str | Path) -> tuple[list[int], np.ndarray, np.ndarray, str]:
    """Dataset CSV -> (run ids, feature matrix, target hours, dataset label)."""
    path = Path(path)
    if not path.exists():
        raise JobError(f"no such dataset: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in [ID_COLUMN, TARGET_COLUMN, *FEATURE_COLUMNS] if c not in header]
        if missing:
            raise JobError(
                f"dataset schema mismatch: {len(missing)} columns missing, "
                f"first {missing[:3]}"
            )
        ids: list[int] = []
        features: list[list[float]] = []
        target: list[float] = []
        for row in reader:
            ids.append(int(row[ID_COLUMN]))
            features.append([float(row[c]) for c in FEATURE_COLUMNS])
            target.append(float(row[TARGET_COLUMN]))
    if not ids:
        raise JobError(f"dataset is empty: {path}")
    if len(set(ids)) != len(ids):
        raise JobError("dataset run ids are not unique")
    label = path.stem
    sidecar = path.with_suffix(".meta")
    if sidecar.exists():
        parser = configparser.ConfigParser()
        parser.read(sidecar)
        if parser.has_option("dataset", "volatility"):
            label = parser["dataset"]["volatility"]
    X = np.asarray(features, dtype=float)
    y = np.asarray(target, dtype=float) * PERIOD_HOURS
    return ids, X, y, label


def read_split(path: str | Path) -> dict[int, str]:
    path = Path(path)
    if not path.exists():
        raise JobError(f"no such split file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["run_id", "role"]:
            raise JobError(f"split schema mismatch: header {header}")
        roles: dict[int, str] = {}
        for line in reader:
            if len(line) != 2:
                raise JobError(f"split schema mismatch: row {line}")
            run_id, role = int(line[0]), line[1]
            if role not in KNOWN_ROLES:
                raise JobError(f"unknown split role: {role}")
            if run_id in roles:
                raise JobError(f"run id {run_id} assigned twice in the split")
            roles[run_id] = role
    if not roles:
        raise JobError(f"split file is empty: {path}")
    return roles


def _candidates(method: str, seed: int) -> list[tuple[str, object]]:
    if method == "gb":
        return [
            (f"depth={d},estimators={m}",
             GradientBoostingRegressor(max_depth=d, n_estimators=m, random_state=seed))
            for d in TREE_DEPTHS for m in TREE_ESTIMATORS
        ]
    if method == "svr":
        return [
            (f"C={c:g}", make_pipeline(StandardScaler(), SVR(C=c))) for c in SVR_C
        ]
    if method == "rf":
        return [
            (f"depth={d},estimators={m}",
             RandomForestRegressor(max_depth=d, n_estimators=m, random_state=seed))
            for d in TREE_DEPTHS for m in TREE_ESTIMATORS
        ]
    if method == "pls":
        return [(f"components={k}", PLSRegression(n_components=k)) for k in PLS_COMPONENTS]
    raise JobError(f"unknown method: {method}")


def _predict(model, X: np.ndarray) -> np.ndarray:
    return np.asarray(model.predict(X)).reshape(-1)


def _tune(method: str, X: np.ndarray, y: np.ndarray, folds: list[np.ndarray],
          train_idx: np.ndarray, seed: int) -> tuple[str, object]:
    """Mean fold MAE decides; ties keep the earlier candidate."""
    extra = np.setdiff1d(train_idx, np.concatenate(folds))
    best = None
    best_mean = np.inf
    for label, model in _candidates(method, seed):
        maes = []
        for f, fold in enumerate(folds):
            rest = np.sort(np.concatenate(
                [g for j, g in enumerate(folds) if j != f] + [extra]
            ))
            if method == "pls" and model.n_components > min(rest.size, X.shape[1]):
                maes = None  # not enough rows for this many components
                break
            model.fit(X[rest], y[rest])
            maes.append(float(np.mean(np.abs(_predict(model, X[fold]) - y[fold]))))
        if maes is None:
            continue
        mean = float(np.mean(maes))
        if mean < best_mean:
            best, best_mean = (label, model), mean
    if best is None:
        raise JobError(f"no feasible {method} candidate for {train_idx.size} training rows")
    return best


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def run_baselines(job: BaselineJob) -> dict:
    ids, X, y, label = read_table(job.data)
    roles = read_split(job.splits)
    id_set = set(ids)
    unknown = sorted(set(roles) - id_set)
    if unknown:
        raise JobError(f"split names run ids absent from the dataset: {unknown[:5]}")

    position = {run_id: i for i, run_id in enumerate(ids)}
    train_idx = np.array(sorted(
        position[r] for r, role in roles.items() if role != "holdout"
    ), dtype=int)
    holdout_idx = np.array(sorted(
        position[r] for r, role in roles.items() if role == "holdout"
    ), dtype=int)
    folds = [
        np.array(sorted(position[r] for r, role in roles.items() if role == fold), dtype=int)
        for fold in FOLD_ROLES
    ]
    folds = [f for f in folds if f.size]
    if train_idx.size == 0 or holdout_idx.size == 0:
        raise JobError("split must provide both training and holdout rows")
    if len(folds) < 2:
        raise JobError("split must provide at least two tuning folds")

    rows: list[dict] = []
    chosen: dict[str, str] = {}
    for method in METHODS:
        spec_label, model = _tune(method, X, y, folds, train_idx, job.seed)
        chosen[method] = spec_label
        model.fit(X[train_idx], y[train_idx])
        predicted = _predict(model, X[holdout_idx])
        rows.append({
            "method": method,
            "dataset": label,
            "split": "holdout",
            "mae_hours": float(np.mean(np.abs(predicted - y[holdout_idx]))),
            "n_train": int(train_idx.size),
            "seed": job.seed,
        })

    out_path = Path(job.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(RESULT_COLUMNS)]
    for row in rows:
        lines.append(",".join([
            row["method"], row["dataset"], row["split"],
            repr(row["mae_hours"]), str(row["n_train"]), str(row["seed"]),
        ]))
    _atomic_write(out_path, "\n".join(lines) + "\n")

    used = sorted(roles)
    digest = hashlib.sha1(",".join(map(str, used)).encode()).hexdigest()
    meta = configparser.ConfigParser()
    meta["job"] = {
        "dataset": label,
        "seed": str(job.seed),
        "n_runs": str(len(ids)),
        "n_train": str(train_idx.size),
        "n_holdout": str(holdout_idx.size),
        "split_ids_sha1": digest,
        "split_ids_equal_dataset_ids": str(set(used) == id_set).lower(),
    }
    meta["hyperparameters"] = chosen
    buf = io.StringIO()
    meta.write(buf)
    meta_path = out_path.with_suffix(out_path.suffix + ".meta")
    _atomic_write(meta_path, buf.getvalue())
    return {
        "out": str(out_path),
        "meta": str(meta_path),
        "rows": rows,
        "hyperparameters": chosen,
    }
