"""File formats shared with other tools: dataset CSV with a metadata sidecar,
split assignments, results tables, and prediction dumps.

Floats are written with repr so every value round-trips exactly.
"""
from __future__ import annotations

import configparser
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import PERIODS_PER_DAY
from .consumer import SimRun
from .learner import Observation

N_HIST = PERIODS_PER_DAY
N_COSTS = 182

DATASET_COLUMNS = (
    ["run_id", "day", "weekend", "run_period", "stock_kg", "periods_since_last"]
    + [f"hist_{i}" for i in range(N_HIST)]
    + [f"cost_{i}" for i in range(N_COSTS)]
    + ["chosen_delta"]
)

RESULT_COLUMNS = ["method", "dataset", "split", "mae_hours", "n_train", "seed"]


@dataclass
class Dataset:
    runs: list[SimRun]
    meta: dict[str, str] = field(default_factory=dict)

    @property
    def program_length(self) -> int:
        return int(self.meta.get("program_length", 10))

    @property
    def horizon(self) -> int:
        return int(self.meta.get("horizon", 192))

    def offsets(self) -> np.ndarray:
        return np.arange(self.program_length, self.horizon)


def _fmt(x: float) -> str:
    return repr(float(x))


def meta_path_for(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".meta")


def write_dataset(dataset: Dataset, csv_path: str | Path) -> None:
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DATASET_COLUMNS)
        for run in dataset.runs:
            if run.costs.size != N_COSTS or run.stock_history.size != N_HIST:
                raise ValueError("run shape does not match the dataset schema")
            writer.writerow(
                [run.run_id, run.day, int(run.weekend), run.run_period,
                 _fmt(run.stock_kg), run.periods_since_last]
                + [_fmt(v) for v in run.stock_history]
                + [_fmt(v) for v in run.costs]
                + [run.chosen_offset]
            )
    parser = configparser.ConfigParser()
    parser["dataset"] = {k: str(v) for k, v in sorted(dataset.meta.items())}
    with open(meta_path_for(csv_path), "w") as fh:
        parser.write(fh)


def read_dataset(csv_path: str | Path) -> Dataset:
    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise FileNotFoundError(f"dataset not found: {csv_path}")
    runs = []
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != DATASET_COLUMNS:
            raise ValueError("dataset CSV header does not match the schema")
        for row in reader:
            runs.append(SimRun(
                run_id=int(row["run_id"]),
                day=int(row["day"]),
                weekend=bool(int(row["weekend"])),
                run_period=int(row["run_period"]),
                stock_kg=float(row["stock_kg"]),
                periods_since_last=int(row["periods_since_last"]),
                stock_history=np.array([float(row[f"hist_{i}"]) for i in range(N_HIST)]),
                costs=np.array([float(row[f"cost_{i}"]) for i in range(N_COSTS)]),
                chosen_offset=int(row["chosen_delta"]),
            ))
    meta: dict[str, str] = {}
    sidecar = meta_path_for(csv_path)
    if sidecar.exists():
        parser = configparser.ConfigParser()
        parser.read(sidecar)
        if parser.has_section("dataset"):
            meta = dict(parser["dataset"])
    return Dataset(runs=runs, meta=meta)


def observation_from_run(run: SimRun) -> Observation:
    return Observation(
        stock_kg=run.stock_kg,
        weekend=run.weekend,
        costs=run.costs,
        chosen_offset=run.chosen_offset,
        run_period=run.run_period % PERIODS_PER_DAY,
    )


def write_split(assignments: list[tuple[int, str]], path: str | Path) -> None:
    """run_id,role rows; role is train, fold1..foldK, or holdout."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "role"])
        for run_id, role in assignments:
            writer.writerow([run_id, role])


def read_split(path: str | Path) -> list[tuple[int, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["run_id", "role"]:
            raise ValueError("split CSV header must be run_id,role")
        return [(int(row["run_id"]), row["role"]) for row in reader]


def write_results(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RESULT_COLUMNS)
        writer.writeheader()
        for row in rows:
            out = dict(row)
            out["mae_hours"] = _fmt(out["mae_hours"])
            writer.writerow(out)


def read_results(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULT_COLUMNS:
            raise ValueError(f"results CSV header must be {','.join(RESULT_COLUMNS)}")
        rows = []
        for row in reader:
            rows.append({
                "method": row["method"],
                "dataset": row["dataset"],
                "split": row["split"],
                "mae_hours": float(row["mae_hours"]),
                "n_train": int(row["n_train"]),
                "seed": int(row["seed"]),
            })
        return rows


def write_predictions(rows: list[dict], path: str | Path) -> None:
    """run_id, actual_hours, predicted_hours; MAE is re-derivable from these."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "actual_hours", "predicted_hours"])
        for row in rows:
            writer.writerow([
                row["run_id"], _fmt(row["actual_hours"]), _fmt(row["predicted_hours"]),
            ])


def read_predictions(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return [
            {"run_id": int(r["run_id"]),
             "actual_hours": float(r["actual_hours"]),
             "predicted_hours": float(r["predicted_hours"])}
            for r in csv.DictReader(fh)
        ]
