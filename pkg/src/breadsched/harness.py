"""Benchmark orchestration.

Dataset generation, chronological cross-validation, the learning curve, and
the cross-volatility comparison table. Every command takes explicit inputs,
writes its artifacts (CSVs, snapshots, SVG plots) under an output directory,
and returns a JSON-friendly summary dict.

Split protocol: the hold-out is the chronologically last share of runs and is
never trained on; the remaining runs form contiguous folds used only for
hyperparameter tuning. Final models are trained on the full training share
and scored on the hold-out.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless; SVG output only
import matplotlib.pyplot as plt
import numpy as np

from . import baselines, learner
from .appliance import commit_limit, default_profile
from .baselines import K_GRID, LAMBDA_GRID, RegressorSpec, design_matrix, mae
from .comfort import GridSpec, HypothesisGrid
from .config import PERIOD_HOURS, PERIODS_PER_DAY, AppConfig
from .consumer import SimRun, simulate
from .datasets import (
    Dataset,
    observation_from_run,
    read_dataset,
    read_results,
    write_dataset,
    write_predictions,
    write_results,
    write_split,
)
from .learner import LearnerParams, Observation, PenaltyTable
from .prices import TariffZones, generate_price_horizon, write_price_csv

NATIVE_METHODS = ("mean", "ols", "ridge", "lasso", "knn")
METHODS = NATIVE_METHODS + ("bayes",)
VOLATILITIES = ("low", "medium", "high")
SNAPSHOT_NAME = "penalty_table.bspt"


# --- splits -------------------------------------------------------------------


@dataclass(frozen=True)
class SplitIndices:
    """Chronological row indices: training share, hold-out, and tuning folds."""

    train: np.ndarray
    holdout: np.ndarray
    folds: tuple[np.ndarray, ...]


def chronological_split(
    n_runs: int, holdout_fraction: float = 0.2, folds: int = 5
) -> SplitIndices:
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError("holdout fraction must lie in (0, 1)")
    if folds < 2:
        raise ValueError("need at least 2 folds")
    n_holdout = max(1, round(n_runs * holdout_fraction))
    n_train = n_runs - n_holdout
    if n_train < folds:
        raise ValueError(
            f"dataset too small: {n_runs} runs leave {n_train} for {folds} folds"
        )
    train = np.arange(n_train)
    base, extra = divmod(n_train, folds)
    fold_list = []
    start = 0
    for f in range(folds):
        size = base + (1 if f < extra else 0)
        fold_list.append(train[start : start + size])
        start += size
    return SplitIndices(
        train=train, holdout=np.arange(n_train, n_runs), folds=tuple(fold_list)
    )


def split_assignments(runs: list[SimRun], split: SplitIndices) -> list[tuple[int, str]]:
    rows = []
    for f, idx in enumerate(split.folds, start=1):
        rows.extend((runs[i].run_id, f"fold{f}") for i in idx)
    rows.extend((runs[i].run_id, "holdout") for i in split.holdout)
    return rows


def _check_no_leakage(runs: list[SimRun], split: SplitIndices) -> None:
    train_ids = {runs[i].run_id for i in split.train}
    holdout_ids = {runs[i].run_id for i in split.holdout}
    if train_ids & holdout_ids:
        raise RuntimeError(f"split leaked run ids: {sorted(train_ids & holdout_ids)}")


# --- native baseline tuning -----------------------------------------------------


def _candidate_specs(kind: str) -> list[RegressorSpec]:
    if kind == "mean":
        return [RegressorSpec("mean")]
    if kind == "ols":
        # deliberately kept in the table despite n < p; min-norm shows why
        # an unregularized fit fails here
        return [RegressorSpec("ols", underdetermined="min-norm")]
    if kind == "ridge":
        return [RegressorSpec("ridge", alpha=a) for a in LAMBDA_GRID]
    if kind == "lasso":
        return [RegressorSpec("lasso", alpha=a) for a in LAMBDA_GRID]
    if kind == "knn":
        return [RegressorSpec("knn", k=k) for k in K_GRID]
    raise ValueError(f"unknown baseline kind: {kind}")


def tune_native(
    kind: str, X: np.ndarray, y: np.ndarray, folds: tuple[np.ndarray, ...]
) -> tuple[RegressorSpec, list[float]]:
    """Lowest mean fold MAE wins; ties keep the earlier (smaller) candidate."""
    best_spec = None
    best_maes: list[float] = []
    best_mean = np.inf
    for spec in _candidate_specs(kind):
        fold_maes = []
        for f in range(len(folds)):
            rest = np.concatenate([g for j, g in enumerate(folds) if j != f])
            model = baselines.fit(spec, X[rest], y[rest])
            pred = baselines.predict_baseline(model, X[folds[f]])
            fold_maes.append(mae(pred, y[folds[f]]))
        mean_mae = float(np.mean(fold_maes))
        if mean_mae < best_mean:
            best_spec, best_maes, best_mean = spec, fold_maes, mean_mae
    return best_spec, best_maes


# --- Bayesian plumbing ----------------------------------------------------------


def observations_of(runs: list[SimRun]) -> list[Observation]:
    obs = [observation_from_run(r) for r in runs]
    periods = {o.run_period for o in obs}
    if len(periods) > 1:
        raise ValueError(f"runs plan at different periods of day: {sorted(periods)}")
    return obs


def _grid_for(cfg: AppConfig, grid_stride: int | None) -> HypothesisGrid:
    stride = cfg.harness.grid_stride if grid_stride is None else grid_stride
    return HypothesisGrid(GridSpec.from_config(cfg.grid, stride))


def _offer_offsets(dataset: Dataset) -> np.ndarray:
    """The learner's offer set: scenarios whose program starts before the next
    planning moment. Later cost columns stay available as plain features."""
    offs = dataset.offsets()
    return offs[offs < commit_limit(dataset.program_length)]


def train_bayes(
    observations: list[Observation],
    grid: HypothesisGrid,
    params: LearnerParams,
    offsets: np.ndarray,
    horizon: int,
) -> PenaltyTable:
    if not observations:
        raise ValueError("cannot train on zero observations")
    table = PenaltyTable(grid, params, observations[0].run_period, offsets, horizon)
    for obs in observations:
        table.update(obs)
    return table


def _predict_hours(table: PenaltyTable, observations: list[Observation]) -> np.ndarray:
    return np.array([table.predict(o) for o in observations]) * PERIOD_HOURS


# --- generation -----------------------------------------------------------------


def _fanout_seeds(seed: int, n: int) -> list[int]:
    """Derive independent child seeds so no two stages share an RNG stream."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def finish_histogram(runs: list[SimRun]) -> list[int]:
    """Finish-time counts by hour of day."""
    hist = [0] * 24
    for run in runs:
        finish = (run.run_period + run.chosen_offset) % PERIODS_PER_DAY
        hist[finish // 4] += 1
    return hist


def cmd_generate(
    volatility: str,
    days: int,
    seed: int,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
) -> dict:
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    price_seed, sim_seed = _fanout_seeds(seed, 2)
    zones = TariffZones.from_config(cfg.tariff)
    horizon_days = -(-cfg.consumer.horizon // PERIODS_PER_DAY) + 1
    prices = generate_price_horizon(
        days + horizon_days, volatility, price_seed, zones, cfg.volatility
    )
    runs = simulate(days, prices, sim_seed, cfg.consumer, default_profile(cfg.profile))
    if not runs:
        raise ValueError(f"simulation over {days} days produced no runs")
    dataset = Dataset(
        runs=runs,
        meta={
            "volatility": str(volatility),
            "seed": str(seed),
            "days": str(days),
            "n_runs": str(len(runs)),
            "walk_mode": cfg.volatility.walk_mode,
            "program_length": str(cfg.consumer.horizon - len(runs[0].costs)),
            "horizon": str(cfg.consumer.horizon),
        },
    )
    dataset_path = out / f"dataset_{volatility}.csv"
    write_dataset(dataset, dataset_path)
    prices_path = out / f"prices_{volatility}.csv"
    write_price_csv(prices, prices_path)
    hist = finish_histogram(runs)
    evening = sum(
        1
        for run in runs
        if cfg.tariff.evening_start
        <= (run.run_period + run.chosen_offset) % PERIODS_PER_DAY
        < cfg.tariff.evening_end
    )
    return {
        "dataset": str(dataset_path),
        "prices": str(prices_path),
        "n_runs": len(runs),
        "histogram_by_hour": hist,
        "modal_hour": int(np.argmax(hist)),
        "evening_finishes": evening,
    }


# --- tune / train / predict ------------------------------------------------------


def cmd_tune(
    dataset_path: str | Path,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    grid_stride: int | None = None,
) -> dict:
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = read_dataset(dataset_path)
    split = chronological_split(
        len(dataset.runs), cfg.harness.holdout_fraction, cfg.harness.folds
    )
    train_obs = observations_of([dataset.runs[i] for i in split.train])
    grid = _grid_for(cfg, grid_stride)
    result = learner.tune(
        train_obs,
        grid,
        LearnerParams.from_config(cfg.learner),
        train_obs[0].run_period,
        _offer_offsets(dataset),
        dataset.horizon,
        cfg.learner.beta_candidates,
        cfg.learner.gamma_candidates,
    )
    report_path = out / "tune_report.csv"
    with open(report_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["beta", "gamma", "mae_hours"])
        for row in result.report:
            writer.writerow([row["beta"], row["gamma"], repr(row["mae_hours"])])
    return {
        "beta": result.beta,
        "gamma": result.gamma,
        "mae_hours": result.mae_hours,
        "n_train": len(train_obs),
        "report": result.report,
        "report_path": str(report_path),
    }


def cmd_train(
    dataset_path: str | Path,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    grid_stride: int | None = None,
    beta: float | None = None,
    gamma: float | None = None,
    use_all: bool = False,
) -> dict:
    """Train on the chronological training share (all runs with use_all)."""
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = read_dataset(dataset_path)
    if use_all:
        train_runs = dataset.runs
    else:
        split = chronological_split(
            len(dataset.runs), cfg.harness.holdout_fraction, cfg.harness.folds
        )
        train_runs = [dataset.runs[i] for i in split.train]
    base = LearnerParams.from_config(cfg.learner)
    params = LearnerParams(
        beta=base.beta if beta is None else beta,
        gamma=base.gamma if gamma is None else gamma,
        k0=base.k0,
        prior=base.prior,
        stock_weight=base.stock_weight,
        weekend_weight=base.weekend_weight,
    )
    table = train_bayes(
        observations_of(train_runs),
        _grid_for(cfg, grid_stride),
        params,
        _offer_offsets(dataset),
        dataset.horizon,
    )
    snapshot_path = out / SNAPSHOT_NAME
    table.save(snapshot_path)
    return {
        "snapshot": str(snapshot_path),
        "n_train": table.n_obs,
        "beta": params.beta,
        "gamma": params.gamma,
        "n_hypotheses": table.grid.n_hypotheses,
    }


def cmd_predict(
    dataset_path: str | Path,
    snapshot_path: str | Path,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    split_name: str = "holdout",
) -> dict:
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = read_dataset(dataset_path)
    table = PenaltyTable.load(snapshot_path)
    if split_name == "all":
        rows_idx = np.arange(len(dataset.runs))
    else:
        split = chronological_split(
            len(dataset.runs), cfg.harness.holdout_fraction, cfg.harness.folds
        )
        if split_name == "holdout":
            rows_idx = split.holdout
        elif split_name == "train":
            rows_idx = split.train
        else:
            raise ValueError(f"unknown split: {split_name}")
    runs = [dataset.runs[i] for i in rows_idx]
    obs = observations_of(runs)
    predicted = _predict_hours(table, obs)
    actual = np.array([o.chosen_offset for o in obs]) * PERIOD_HOURS
    pred_rows = [
        {"run_id": r.run_id, "actual_hours": a, "predicted_hours": p}
        for r, a, p in zip(runs, actual, predicted)
    ]
    pred_path = out / f"predictions_bayes_{split_name}.csv"
    write_predictions(pred_rows, pred_path)
    return {
        "predictions": str(pred_path),
        "split": split_name,
        "n": len(runs),
        "mae_hours": mae(predicted, actual),
    }


# --- cross-validation -------------------------------------------------------------


def cmd_crossval(
    dataset_path: str | Path,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    seed: int = 0,
    grid_stride: int | None = None,
) -> dict:
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = read_dataset(dataset_path)
    runs = dataset.runs
    if len(runs) < 10:
        raise ValueError(f"dataset too small: {len(runs)} runs, need at least 10")
    label = dataset.meta.get("volatility", "dataset")
    split = chronological_split(
        len(runs), cfg.harness.holdout_fraction, cfg.harness.folds
    )
    _check_no_leakage(runs, split)
    split_path = out / f"split_{label}.csv"
    write_split(split_assignments(runs, split), split_path)

    X, y = design_matrix(runs)
    holdout_runs = [runs[i] for i in split.holdout]
    result_rows: list[dict] = []
    fold_rows: list[dict] = []
    chosen: dict[str, str] = {}

    def emit(method: str, predicted: np.ndarray) -> None:
        pred_path = out / f"predictions_{method}_{label}.csv"
        write_predictions(
            [
                {"run_id": r.run_id, "actual_hours": a, "predicted_hours": p}
                for r, a, p in zip(holdout_runs, y[split.holdout], predicted)
            ],
            pred_path,
        )
        result_rows.append({
            "method": method,
            "dataset": label,
            "split": "holdout",
            "mae_hours": mae(predicted, y[split.holdout]),
            "n_train": split.train.size,
            "seed": seed,
        })

    for kind in NATIVE_METHODS:
        spec, fold_maes = tune_native(kind, X, y, split.folds)
        fold_rows.extend(
            {"method": kind, "fold": f + 1, "mae_hours": v}
            for f, v in enumerate(fold_maes)
        )
        chosen[kind] = _spec_label(spec)
        model = baselines.fit(spec, X[split.train], y[split.train])
        emit(kind, baselines.predict_baseline(model, X[split.holdout]))

    all_obs = observations_of(runs)
    train_obs = [all_obs[i] for i in split.train]
    grid = _grid_for(cfg, grid_stride)
    tuned = learner.tune(
        train_obs,
        grid,
        LearnerParams.from_config(cfg.learner),
        train_obs[0].run_period,
        _offer_offsets(dataset),
        dataset.horizon,
        cfg.learner.beta_candidates,
        cfg.learner.gamma_candidates,
    )
    table = tuned.tables[tuned.beta]
    chosen["bayes"] = f"beta={tuned.beta:g},gamma={tuned.gamma:g}"
    emit("bayes", _predict_hours(table, [all_obs[i] for i in split.holdout]))

    results_path = out / f"results_{label}.csv"
    write_results(result_rows, results_path)
    folds_path = out / f"folds_{label}.csv"
    with open(folds_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "fold", "mae_hours"])
        for row in fold_rows:
            writer.writerow([row["method"], row["fold"], repr(row["mae_hours"])])
    return {
        "results": str(results_path),
        "folds": str(folds_path),
        "split": str(split_path),
        "rows": result_rows,
        "hyperparameters": chosen,
        "tune": {"beta": tuned.beta, "gamma": tuned.gamma},
    }


def _spec_label(spec: RegressorSpec) -> str:
    if spec.kind in ("ridge", "lasso"):
        return f"alpha={spec.alpha:g}"
    if spec.kind == "knn":
        return f"k={spec.k}"
    return "-"


# --- learning curve ---------------------------------------------------------------


def cmd_learning_curve(
    dataset_path: str | Path,
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    seed: int = 0,
    sizes: tuple[int, ...] | None = None,
    repeats: int | None = None,
    grid_stride: int | None = None,
) -> dict:
    """Mean and stddev of hold-out MAE over random training subsets of each size.

    Hyperparameters are tuned on the full training set first, exactly as in
    cmd_crossval, so the full-size point reproduces the benchmark's Bayesian
    score. Regret vectors are computed once per training observation (float32
    cache) and recombined per subset, so the sweep costs one pass over the data.
    """
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sizes = tuple(sizes) if sizes else cfg.harness.learning_curve_sizes
    repeats = cfg.harness.learning_curve_repeats if repeats is None else repeats
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    dataset = read_dataset(dataset_path)
    split = chronological_split(
        len(dataset.runs), cfg.harness.holdout_fraction, cfg.harness.folds
    )
    all_obs = observations_of(dataset.runs)
    train_obs = [all_obs[i] for i in split.train]
    holdout_obs = [all_obs[i] for i in split.holdout]
    n_train = len(train_obs)
    bad = [n for n in sizes if not 1 <= n <= n_train]
    if bad:
        raise ValueError(f"subset sizes {bad} exceed the {n_train} training runs")

    grid = _grid_for(cfg, grid_stride)
    offsets = _offer_offsets(dataset)
    tuned = learner.tune(
        train_obs,
        grid,
        LearnerParams.from_config(cfg.learner),
        train_obs[0].run_period,
        offsets,
        dataset.horizon,
        cfg.learner.beta_candidates,
        cfg.learner.gamma_candidates,
    )
    params = tuned.tables[tuned.beta].params
    base = PenaltyTable(grid, params, train_obs[0].run_period, offsets, dataset.horizon)
    S_cache = np.empty((n_train, grid.n_params), dtype=np.float32)
    K_cache = np.empty((n_train, base.table.shape[0]))
    for i, obs in enumerate(train_obs):
        S, _ = base.regret_and_best(obs)
        S_cache[i] = S
        K_cache[i] = base.kernel_weights(obs)
    holdout_B = [base.best_responses(o.costs) for o in holdout_obs]
    holdout_cells = [o.cell.index for o in holdout_obs]
    actual = np.array([o.chosen_offset for o in holdout_obs]) * PERIOD_HOURS

    rng = np.random.default_rng(seed)
    run_rows: list[dict] = []
    summary: list[dict] = []
    for n in sizes:
        maes = []
        for r in range(repeats):
            idx = np.sort(rng.choice(n_train, size=n, replace=False))
            tab = base.table + K_cache[idx].T @ S_cache[idx].astype(np.float64)
            predicted = np.empty(len(holdout_obs))
            for j, (B, c) in enumerate(zip(holdout_B, holdout_cells)):
                row = tab[c]
                p = np.exp(-params.gamma * (row - row.min()))
                p /= p.sum()
                predicted[j] = learner.weighted_median_offset(B, p, offsets)
            m = mae(predicted * PERIOD_HOURS, actual)
            maes.append(m)
            run_rows.append({"n_train": n, "repeat": r, "mae_hours": m})
        summary.append({
            "n_train": n,
            "mean_mae_hours": float(np.mean(maes)),
            "stddev_mae_hours": float(np.std(maes)),
            "repeats": repeats,
        })

    curve_path = out / "learning_curve.csv"
    with open(curve_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_train", "mean_mae_hours", "stddev_mae_hours", "repeats"])
        for row in summary:
            writer.writerow([
                row["n_train"], repr(row["mean_mae_hours"]),
                repr(row["stddev_mae_hours"]), row["repeats"],
            ])
    runs_path = out / "learning_curve_runs.csv"
    with open(runs_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_train", "repeat", "mae_hours"])
        for row in run_rows:
            writer.writerow([row["n_train"], row["repeat"], repr(row["mae_hours"])])
    svg_path = out / "learning_curve.svg"
    plot_learning_curve(summary, svg_path)
    return {
        "curve": str(curve_path),
        "runs": str(runs_path),
        "plot": str(svg_path),
        "summary": summary,
        "seed": seed,
        "beta": params.beta,
        "gamma": params.gamma,
    }


# --- comparison -------------------------------------------------------------------


def cmd_compare(
    dataset_paths: dict[str, str | Path],
    out_dir: str | Path,
    cfg: AppConfig | None = None,
    seed: int = 0,
    grid_stride: int | None = None,
    extra_results: list[str | Path] | None = None,
) -> dict:
    """Train every method on the medium training share, score all hold-outs.

    Hyperparameters are frozen after tuning on medium. Rows from extra results
    CSVs (e.g. an external baseline harness) are appended untouched.
    """
    cfg = cfg or AppConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    missing = [v for v in VOLATILITIES if v not in dataset_paths]
    if missing:
        raise ValueError(f"missing dataset: {', '.join(missing)}")
    datasets = {v: read_dataset(dataset_paths[v]) for v in VOLATILITIES}
    splits = {
        v: chronological_split(
            len(d.runs), cfg.harness.holdout_fraction, cfg.harness.folds
        )
        for v, d in datasets.items()
    }
    for v in VOLATILITIES:
        _check_no_leakage(datasets[v].runs, splits[v])

    medium = datasets["medium"]
    msplit = splits["medium"]
    X_m, y_m = design_matrix(medium.runs)
    models = {}
    chosen: dict[str, str] = {}
    for kind in NATIVE_METHODS:
        spec, _ = tune_native(kind, X_m, y_m, msplit.folds)
        models[kind] = baselines.fit(spec, X_m[msplit.train], y_m[msplit.train])
        chosen[kind] = _spec_label(spec)

    medium_obs = observations_of(medium.runs)
    tuned = learner.tune(
        [medium_obs[i] for i in msplit.train],
        _grid_for(cfg, grid_stride),
        LearnerParams.from_config(cfg.learner),
        medium_obs[msplit.train[0]].run_period,
        _offer_offsets(medium),
        medium.horizon,
        cfg.learner.beta_candidates,
        cfg.learner.gamma_candidates,
    )
    table = tuned.tables[tuned.beta]
    chosen["bayes"] = f"beta={tuned.beta:g},gamma={tuned.gamma:g}"

    result_rows: list[dict] = []
    n_train = msplit.train.size
    for vol in VOLATILITIES:
        d, s = datasets[vol], splits[vol]
        X, y = design_matrix(d.runs)
        holdout_runs = [d.runs[i] for i in s.holdout]
        obs = observations_of(holdout_runs)
        for method in METHODS:
            if method == "bayes":
                predicted = _predict_hours(table, obs)
            else:
                predicted = baselines.predict_baseline(models[method], X[s.holdout])
            write_predictions(
                [
                    {"run_id": r.run_id, "actual_hours": a, "predicted_hours": p}
                    for r, a, p in zip(holdout_runs, y[s.holdout], predicted)
                ],
                out / f"predictions_{method}_{vol}.csv",
            )
            result_rows.append({
                "method": method,
                "dataset": vol,
                "split": "holdout",
                "mae_hours": mae(predicted, y[s.holdout]),
                "n_train": n_train,
                "seed": seed,
            })

    for path in extra_results or []:
        result_rows.extend(read_results(path))

    results_path = out / "results_compare.csv"
    write_results(result_rows, results_path)
    table_text = format_compare_table(result_rows)
    table_path = out / "compare_table.txt"
    table_path.write_text(table_text)
    svg_path = out / "compare.svg"
    plot_compare(result_rows, svg_path)
    return {
        "results": str(results_path),
        "table": str(table_path),
        "plot": str(svg_path),
        "rows": result_rows,
        "hyperparameters": chosen,
        "table_text": table_text,
    }


def format_compare_table(rows: list[dict]) -> str:
    """Methods down, datasets across, MAE hours in the cells."""
    methods = [m for m in METHODS if any(r["method"] == m for r in rows)]
    methods += [
        m for m in dict.fromkeys(r["method"] for r in rows) if m not in methods
    ]
    cols = [v for v in VOLATILITIES if any(r["dataset"] == v for r in rows)]
    cols += [d for d in dict.fromkeys(r["dataset"] for r in rows) if d not in cols]
    cell = {(r["method"], r["dataset"]): r["mae_hours"] for r in rows}
    width = max(len(m) for m in methods) + 2
    lines = ["MAE (hours)".ljust(width) + "".join(c.rjust(10) for c in cols)]
    for m in methods:
        line = m.ljust(width)
        for c in cols:
            v = cell.get((m, c))
            line += (f"{v:.3f}" if v is not None else "-").rjust(10)
        lines.append(line)
    return "\n".join(lines) + "\n"


# --- plots ------------------------------------------------------------------------


def _save_svg(fig, path: str | Path) -> None:
    plt.rcParams["svg.hashsalt"] = "breadsched"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_learning_curve(summary: list[dict], path: str | Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [row["n_train"] for row in summary]
    means = [row["mean_mae_hours"] for row in summary]
    stds = [row["stddev_mae_hours"] for row in summary]
    ax.errorbar(ns, means, yerr=stds, marker="o", capsize=3)
    ax.set_xlabel("training observations")
    ax.set_ylabel("hold-out MAE (hours)")
    ax.set_title("Learning curve")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save_svg(fig, path)


def plot_compare(rows: list[dict], path: str | Path) -> None:
    methods = list(dict.fromkeys(r["method"] for r in rows))
    cols = list(dict.fromkeys(r["dataset"] for r in rows))
    cell = {(r["method"], r["dataset"]): r["mae_hours"] for r in rows}
    fig, ax = plt.subplots(figsize=(7, 4))
    x = np.arange(len(methods))
    width = 0.8 / max(1, len(cols))
    for i, c in enumerate(cols):
        vals = [cell.get((m, c), 0.0) for m in methods]
        ax.bar(x + i * width, vals, width, label=c)
    ax.set_xticks(x + width * (len(cols) - 1) / 2)
    ax.set_xticklabels(methods)
    ax.set_ylabel("hold-out MAE (hours)")
    ax.set_title("Method comparison")
    ax.legend(title="volatility")
    fig.tight_layout()
    _save_svg(fig, path)
