"""Situation-conditioned Bayesian preference learner.

Hypotheses are (situation cell, comfort curve) pairs over the grid from
`comfort`. Each observed scheduling choice adds kernel-weighted regret to
every hypothesis: the regret of a curve is how much better (in its own terms)
the curve's preferred offsets were than the observed one, so curves that
rationalize the choice collect nothing. The posterior is a softmax of the
accumulated penalties; predictions take the posterior-weighted median of the
curves' best responses, which minimizes expected absolute error in hours.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .comfort import (
    N_CELLS,
    AxisSpec,
    ComfortParams,
    GridSpec,
    HypothesisGrid,
    SituationCell,
    comfort_eval,
    distance_rows,
    situation_of,
)
from .config import PERIOD_HOURS, PERIODS_PER_DAY, LearnerConfig

_MAGIC = b"BSPT"
_VERSION = 1


@dataclass(frozen=True)
class Observation:
    """One recorded scheduling decision, as the learner sees it."""

    stock_kg: float
    weekend: bool
    costs: np.ndarray          # money per feasible offset
    chosen_offset: int         # absolute offset (periods from the run moment)
    run_period: int            # period-of-day of the run moment

    @property
    def cell(self) -> SituationCell:
        return situation_of(self.stock_kg, self.weekend)


@dataclass(frozen=True)
class LearnerParams:
    beta: float = 5.0
    gamma: float = 5.0
    k0: float = 0.0
    prior: str = "none"
    stock_weight: float = 1.0
    weekend_weight: float = 0.3

    @classmethod
    def from_config(cls, cfg: LearnerConfig) -> "LearnerParams":
        return cls(
            beta=cfg.beta, gamma=cfg.gamma, k0=cfg.k0, prior=cfg.prior,
            stock_weight=cfg.stock_weight, weekend_weight=cfg.weekend_weight,
        )


def situation_distance(
    stock_a: float, weekend_a: bool, stock_b: float, weekend_b: bool,
    stock_weight: float = 1.0, weekend_weight: float = 0.3,
) -> float:
    """Weighted L1 distance between two situations (kg-equivalent units)."""
    return stock_weight * abs(stock_a - stock_b) + weekend_weight * abs(
        int(weekend_a) - int(weekend_b)
    )


def kernel(distance: float, beta: float) -> float:
    """Gaussian similarity exp(-beta * distance^2)."""
    return math.exp(-beta * distance * distance)


def best_response(
    params: ComfortParams, costs: np.ndarray, offsets: np.ndarray,
    run_period: int, horizon: int = 192,
) -> int:
    """Offset maximizing comfort minus cost; ties go to the smallest offset."""
    d1, d2, d3 = distance_rows(params, run_period, offsets, horizon)
    j = _kernels.best_single(
        params.heights[0], params.heights[1], params.heights[2], params.slope,
        d1, d2, d3, np.ascontiguousarray(costs, dtype=float),
    )
    return int(offsets[j])


def penalty(
    params: ComfortParams, obs: Observation, offsets: np.ndarray, horizon: int = 192
) -> float:
    """Raw regret of one curve against one observation (reference path).

    Sum over offsets of how far the curve's utility there exceeds its utility
    at the observed choice; zero exactly when the choice is curve-optimal.
    """
    utilities = np.array([
        comfort_eval(int(off), params, obs.run_period, horizon) - c
        for off, c in zip(offsets, obs.costs)
    ])
    chosen_j = int(np.flatnonzero(offsets == obs.chosen_offset)[0])
    return float(np.maximum(utilities - utilities[chosen_j], 0.0).sum())


def weighted_median_offset(best_j: np.ndarray, posterior: np.ndarray, offsets: np.ndarray) -> int:
    """Smallest offset where the posterior mass of best responses reaches 1/2."""
    counts = np.bincount(best_j, weights=posterior, minlength=offsets.size)
    cum = np.cumsum(counts)
    j = int(np.searchsorted(cum, 0.5 - 1e-12, side="left"))
    return int(offsets[min(j, offsets.size - 1)])


class PenaltyTable:
    """Accumulated kernel-weighted regrets: one float64 row per situation cell.

    `offsets` is the offer set: the scenarios the household can actually
    commit to at a planning moment. Cost vectors may be longer (tail costs
    are observable features but not choices); only the leading window that
    lines up with `offsets` enters regrets and best responses.
    """

    def __init__(
        self,
        grid: HypothesisGrid,
        params: LearnerParams,
        run_period: int,
        offsets: np.ndarray,
        horizon: int = 192,
    ):
        self.grid = grid
        self.params = params
        self.run_period = run_period % PERIODS_PER_DAY
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.horizon = horizon
        self.n_obs = 0
        self.table = np.zeros((N_CELLS, grid.n_params))
        if params.prior == "center-quadratic" and params.k0 > 0.0:
            self.table += params.k0 * self._center_quadratic_prior()
        elif params.prior not in ("none", "center-quadratic"):
            raise ValueError(f"unknown prior: {params.prior}")
        self._D1, self._D2, self._D3 = grid.distance_tables(
            self.run_period, self.offsets, horizon
        )

    def _center_quadratic_prior(self) -> np.ndarray:
        """Mild pull toward the middle of every axis, normalized per axis."""
        contributions = np.zeros(self.grid.shape)
        axes = (
            self.grid.peaks1, self.grid.peaks2, self.grid.peaks3,
            self.grid.slopes, self.grid.heights, self.grid.heights, self.grid.heights,
        )
        for dim, values in enumerate(axes):
            span = values.max() - values.min()
            z = (values - values.mean()) / (span / 2 if span > 0 else 1.0)
            shape = [1] * 7
            shape[dim] = values.size
            contributions += (z ** 2).reshape(shape) / 7.0
        return contributions.ravel()

    def kernel_weights(self, obs: Observation) -> np.ndarray:
        """Similarity of the observation's raw situation to each cell's centre."""
        w = np.empty(N_CELLS)
        for c in range(N_CELLS):
            cell = SituationCell.from_index(c)
            rho = situation_distance(
                obs.stock_kg, obs.weekend, cell.stock_center_kg, cell.weekend,
                self.params.stock_weight, self.params.weekend_weight,
            )
            w[c] = kernel(rho, self.params.beta)
        return w

    def chosen_index(self, obs: Observation) -> int:
        hits = np.flatnonzero(self.offsets == obs.chosen_offset)
        if hits.size != 1:
            raise ValueError(f"chosen offset {obs.chosen_offset} is not in the offer set")
        return int(hits[0])

    def _window(self, costs: np.ndarray) -> np.ndarray:
        costs = np.ascontiguousarray(costs, dtype=float)
        if costs.size < self.offsets.size:
            raise ValueError("cost vector shorter than the offer set")
        return costs[: self.offsets.size]

    def regret_and_best(self, obs: Observation, engine: str = "numba") -> tuple[np.ndarray, np.ndarray]:
        """Per-grid-point raw regret S and best-response offset index B."""
        costs = self._window(obs.costs)
        chosen_j = self.chosen_index(obs)
        if engine == "numba":
            S = np.empty(self.grid.n_params)
            B = np.empty(self.grid.n_params, dtype=np.int32)
            _kernels.regret_best(
                self._D1, self._D2, self._D3, self.grid.heights, self.grid.slopes,
                costs, chosen_j, S, B,
            )
            return S, B
        if engine == "numpy":
            return _kernels.regret_best_reference(
                self._D1, self._D2, self._D3, self.grid.heights, self.grid.slopes,
                costs, chosen_j,
            )
        raise ValueError(f"unknown engine: {engine}")

    def best_responses(self, costs: np.ndarray) -> np.ndarray:
        """Best-response offset index for every grid point under these costs."""
        costs = self._window(costs)
        B = np.empty(self.grid.n_params, dtype=np.int32)
        _kernels.best_grid(
            self._D1, self._D2, self._D3, self.grid.heights, self.grid.slopes, costs, B
        )
        return B

    def apply_regret(self, obs: Observation, S: np.ndarray) -> None:
        for c, w in enumerate(self.kernel_weights(obs)):
            self.table[c] += w * S
        self.n_obs += 1

    def update(self, obs: Observation, engine: str = "numba") -> None:
        """Fold one observation into the table."""
        S, _ = self.regret_and_best(obs, engine=engine)
        self.apply_regret(obs, S)

    def posterior(self, cell_index: int, gamma: float | None = None) -> np.ndarray:
        """Normalized hypothesis weights exp(-gamma * penalty) for one cell."""
        gamma = self.params.gamma if gamma is None else gamma
        row = self.table[cell_index]
        p = np.exp(-gamma * (row - row.min()))
        return p / p.sum()

    def predict(self, obs: Observation, gamma: float | None = None) -> int:
        """Posterior-weighted median best response, as an absolute offset."""
        if obs.run_period % PERIODS_PER_DAY != self.run_period:
            raise ValueError(
                f"observation planned at period {obs.run_period}, table at {self.run_period}"
            )
        B = self.best_responses(obs.costs)
        p = self.posterior(obs.cell.index, gamma)
        return weighted_median_offset(B, p, self.offsets)

    # --- snapshots -----------------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Binary snapshot: header (grid spec, params, counters) + f32 body.

        The body is point-major: for each grid point, its 8 cell penalties.
        """
        spec = self.grid.spec
        header = bytearray()
        header += _MAGIC
        header += struct.pack("<I", _VERSION)
        header += struct.pack(
            "<5d", self.params.beta, self.params.gamma, self.params.k0,
            self.params.stock_weight, self.params.weekend_weight,
        )
        header += struct.pack("<B", 1 if self.params.prior == "center-quadratic" else 0)
        header += struct.pack("<HHI", self.run_period, self.horizon, self.n_obs)
        for axis in (spec.peak1, spec.peak2, spec.peak3, spec.height, spec.slope):
            header += struct.pack("<ddII", axis.start, axis.step, axis.levels, axis.stride)
        header += struct.pack(
            "<HQHH", N_CELLS, self.grid.n_params,
            int(self.offsets[0]), self.offsets.size,
        )
        header += self.grid.spec_hash()
        body = np.ascontiguousarray(self.table.T, dtype="<f4").tobytes()
        Path(path).write_bytes(bytes(header) + body)

    @classmethod
    def load(cls, path: str | Path, grid: HypothesisGrid | None = None) -> "PenaltyTable":
        raw = Path(path).read_bytes()
        if raw[:4] != _MAGIC:
            raise ValueError("not a penalty table snapshot")
        pos = 4
        (version,) = struct.unpack_from("<I", raw, pos); pos += 4
        if version != _VERSION:
            raise ValueError(f"unsupported snapshot version: {version}")
        beta, gamma, k0, stock_w, weekend_w = struct.unpack_from("<5d", raw, pos); pos += 40
        (prior_code,) = struct.unpack_from("<B", raw, pos); pos += 1
        run_period, horizon, n_obs = struct.unpack_from("<HHI", raw, pos); pos += 8
        axes = []
        for _ in range(5):
            start, step, levels, stride = struct.unpack_from("<ddII", raw, pos); pos += 24
            axes.append(AxisSpec(start, step, levels, stride))
        n_cells, n_params, first_offset, n_offsets = struct.unpack_from("<HQHH", raw, pos)
        pos += 14
        spec_hash = raw[pos : pos + 32]; pos += 32
        if n_cells != N_CELLS:
            raise ValueError("snapshot cell count mismatch")
        spec = GridSpec(peak1=axes[0], peak2=axes[1], peak3=axes[2], height=axes[3], slope=axes[4])
        if grid is None:
            grid = HypothesisGrid(spec)
        if grid.spec_hash() != spec_hash or grid.n_params != n_params:
            raise ValueError("snapshot grid does not match the requested grid")
        params = LearnerParams(
            beta=beta, gamma=gamma, k0=k0,
            prior="center-quadratic" if prior_code else "none",
            stock_weight=stock_w, weekend_weight=weekend_w,
        )
        offsets = np.arange(first_offset, first_offset + n_offsets)
        table = cls(grid, params, run_period, offsets, horizon)
        body = np.frombuffer(raw, dtype="<f4", offset=pos, count=n_params * N_CELLS)
        table.table = body.reshape(n_params, N_CELLS).T.astype(np.float64)
        table.n_obs = n_obs
        return table


@dataclass
class TuneResult:
    beta: float
    gamma: float
    mae_hours: float
    report: list[dict] = field(default_factory=list)
    # tables trained during the sweep, keyed by beta; the winner can be reused
    tables: dict = field(default_factory=dict, repr=False)


def tune(
    observations: list[Observation],
    grid: HypothesisGrid,
    base_params: LearnerParams,
    run_period: int,
    offsets: np.ndarray,
    horizon: int = 192,
    betas: tuple[float, ...] = (0.0, 1.0, 5.0, 20.0),
    gammas: tuple[float, ...] = (1.0, 5.0, 20.0),
) -> TuneResult:
    """Pick (beta, gamma) by sequential train-and-predict over the training set.

    Observation i is predicted from observations 1..i-1. The expensive regret
    and best-response arrays are shared across all candidate pairs, so the
    sweep costs barely more than a single training pass.
    """
    if not observations:
        raise ValueError("tune needs at least one observation")
    tables = {
        b: PenaltyTable(
            grid, LearnerParams(
                beta=b, gamma=base_params.gamma, k0=base_params.k0,
                prior=base_params.prior, stock_weight=base_params.stock_weight,
                weekend_weight=base_params.weekend_weight,
            ),
            run_period, offsets, horizon,
        )
        for b in betas
    }
    abs_err = {(b, g): 0.0 for b in betas for g in gammas}
    scratch = tables[betas[0]]
    for obs in observations:
        S, B = scratch.regret_and_best(obs)
        cell = obs.cell.index
        for b in betas:
            row = tables[b].table[cell]
            shifted = row - row.min()
            for g in gammas:
                p = np.exp(-g * shifted)
                p /= p.sum()
                pred = weighted_median_offset(B, p, scratch.offsets)
                abs_err[(b, g)] += abs(pred - obs.chosen_offset) * PERIOD_HOURS
        for b in betas:
            tables[b].apply_regret(obs, S)
    n = len(observations)
    report = [
        {"beta": b, "gamma": g, "mae_hours": abs_err[(b, g)] / n}
        for b in betas for g in gammas
    ]
    best = min(report, key=lambda r: r["mae_hours"])
    for b in betas:
        tables[b].params = LearnerParams(
            beta=b, gamma=best["gamma"], k0=base_params.k0,
            prior=base_params.prior, stock_weight=base_params.stock_weight,
            weekend_weight=base_params.weekend_weight,
        )
    return TuneResult(
        beta=best["beta"], gamma=best["gamma"], mae_hours=best["mae_hours"],
        report=report, tables=tables,
    )
