"""Builders for synthetic inputs in the scheduling package's file formats.

The dataset and split CSVs here are written with the stdlib only, so the tests
double as a spec of the interchange schema this package depends on.
"""
from __future__ import annotations

import configparser
import csv
from pathlib import Path

import numpy as np
import pytest

from ml_baselines.runner import N_COSTS, N_HIST, BaselineJob, run_baselines

DATASET_COLUMNS = (
    ["run_id", "day", "weekend", "run_period", "stock_kg", "periods_since_last"]
    + [f"hist_{i}" for i in range(N_HIST)]
    + [f"cost_{i}" for i in range(N_COSTS)]
    + ["chosen_delta"]
)


def write_dataset(path, deltas, psl=None, volatility="medium", seed=3, sidecar=True):
    """One row per entry of deltas; feature noise is seeded for reruns."""
    rng = np.random.default_rng(seed)
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=DATASET_COLUMNS)
        writer.writeheader()
        for i, delta in enumerate(deltas):
            row = {
                "run_id": i,
                "day": 2 * i,
                "weekend": int(i % 7 in (5, 6)),
                "run_period": 84,
                "stock_kg": round(float(rng.uniform(0.0, 2.0)), 3),
                "periods_since_last": int(psl[i]) if psl is not None
                else int(rng.integers(96, 300)),
                "chosen_delta": int(delta),
            }
            for j in range(N_HIST):
                row[f"hist_{j}"] = int(rng.integers(0, 3))
            for j in range(N_COSTS):
                row[f"cost_{j}"] = round(float(rng.uniform(0.5, 3.0)), 6)
            writer.writerow(row)
    if sidecar:
        meta = configparser.ConfigParser()
        meta["dataset"] = {
            "volatility": volatility,
            "seed": str(seed),
            "n_runs": str(len(deltas)),
        }
        with open(path.with_suffix(".meta"), "w") as fh:
            meta.write(fh)
    return path


def write_split(path, assignments):
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "role"])
        for run_id, role in assignments:
            writer.writerow([run_id, role])
    return path


def round_robin_split(n: int, holdout: int = 9):
    """Last `holdout` runs held out, the rest dealt into the five folds."""
    cut = n - holdout
    return [(i, "holdout" if i >= cut else f"fold{i % 5 + 1}") for i in range(n)]


@pytest.fixture(scope="session")
def constant_job(tmp_path_factory):
    """45 runs that all chose delta 13: every method should score 3.25 h exactly."""
    root = tmp_path_factory.mktemp("constant")
    data = write_dataset(root / "data.csv", [13] * 45)
    split = write_split(root / "split.csv", round_robin_split(45))
    job = BaselineJob(data=str(data), splits=str(split), out=str(root / "results.csv"))
    return job, run_baselines(job)
