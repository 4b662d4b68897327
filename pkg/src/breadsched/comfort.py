"""Saw-tooth daily comfort curves and the hypothesis grid the learner searches.

A curve has three peaks at fixed clock times with individual heights and one
shared ascending slope. Comfort rises linearly toward each upcoming peak and
drops instantly once a peak passes; it is zero after the last reachable peak.
Scheduling offsets are mapped onto clock times through the run moment, so a
two-day window sees each peak up to twice.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .config import PERIODS_PER_DAY, GridConfig

N_STOCK_BUCKETS = 4
STOCK_BUCKET_KG = 0.15
N_CELLS = N_STOCK_BUCKETS * 2


@dataclass(frozen=True)
class ComfortParams:
    """One saw-tooth curve: peak heights, peak clock periods, shared slope."""

    heights: tuple[float, float, float]
    peaks: tuple[int, int, int]
    slope: float


@dataclass(frozen=True)
class SituationCell:
    """Discrete household situation: stock bucket (0..3) x weekend flag."""

    stock_bucket: int
    weekend: bool

    def __post_init__(self):
        if not 0 <= self.stock_bucket < N_STOCK_BUCKETS:
            raise ValueError(f"stock bucket out of range: {self.stock_bucket}")

    @property
    def index(self) -> int:
        return self.stock_bucket + N_STOCK_BUCKETS * int(self.weekend)

    @property
    def stock_center_kg(self) -> float:
        return STOCK_BUCKET_KG * (self.stock_bucket + 0.5)

    @classmethod
    def from_index(cls, index: int) -> "SituationCell":
        if not 0 <= index < N_CELLS:
            raise ValueError(f"cell index out of range: {index}")
        return cls(stock_bucket=index % N_STOCK_BUCKETS, weekend=index >= N_STOCK_BUCKETS)


def situation_of(stock_kg: float, weekend: bool) -> SituationCell:
    """Bucket the raw stock level; levels above the top bucket clamp to it."""
    if stock_kg < 0:
        raise ValueError("stock must be nonnegative")
    bucket = min(N_STOCK_BUCKETS - 1, int(stock_kg / STOCK_BUCKET_KG))
    return SituationCell(stock_bucket=bucket, weekend=bool(weekend))


def peak_offsets(peak_period: int, run_period: int, horizon: int) -> list[int]:
    """Offsets (periods from the run moment) at which a clock-time peak occurs."""
    first = (peak_period - run_period % PERIODS_PER_DAY) % PERIODS_PER_DAY
    return list(range(first, horizon, PERIODS_PER_DAY))


def distance_rows(
    params: ComfortParams, run_period: int, offsets: np.ndarray, horizon: int = 192
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distance from each offset to the next in-window instance of each peak
    (np.inf when none remains ahead)."""
    rows = []
    for peak in params.peaks:
        instances = np.asarray(peak_offsets(peak, run_period, horizon))
        row = np.full(offsets.size, np.inf)
        for j, off in enumerate(np.asarray(offsets)):
            ahead = instances[instances >= off]
            if ahead.size:
                row[j] = ahead[0] - off
        rows.append(row)
    return rows[0], rows[1], rows[2]


def comfort_eval(
    offset: int, params: ComfortParams, run_period: int, horizon: int = 192
) -> float:
    """Comfort of finishing at `offset` periods after a run at `run_period`.

    The value is the max over all in-window peak instances at or after the
    offset of (height - slope * distance), floored at zero.
    """
    if not 0 <= offset < horizon:
        raise ValueError(f"offset out of window: {offset}")
    run_period %= PERIODS_PER_DAY
    best = 0.0
    for height, peak in zip(params.heights, params.peaks):
        first = (peak - run_period) % PERIODS_PER_DAY
        for pos in range(first, horizon, PERIODS_PER_DAY):
            if pos >= offset:
                best = max(best, height - params.slope * (pos - offset))
    return best


@dataclass(frozen=True)
class AxisSpec:
    """Evenly spaced axis with an optional stride for desk-scale grids."""

    start: float
    step: float
    levels: int
    stride: int = 1

    def __post_init__(self):
        if self.levels <= 0 or self.stride <= 0:
            raise ValueError("levels and stride must be positive")
        if self.step <= 0:
            raise ValueError("axis step must be positive")

    def values(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.levels)[:: self.stride]


@dataclass(frozen=True)
class GridSpec:
    peak1: AxisSpec
    peak2: AxisSpec
    peak3: AxisSpec
    height: AxisSpec  # shared by all three height dimensions
    slope: AxisSpec

    @classmethod
    def from_config(cls, cfg: GridConfig | None = None, height_stride: int = 1) -> "GridSpec":
        cfg = cfg or GridConfig()
        return cls(
            peak1=AxisSpec(cfg.peak1_start, cfg.peak1_step, cfg.peak1_levels),
            peak2=AxisSpec(cfg.peak2_start, cfg.peak2_step, cfg.peak2_levels),
            peak3=AxisSpec(cfg.peak3_start, cfg.peak3_step, cfg.peak3_levels),
            height=AxisSpec(cfg.height_start, cfg.height_step, cfg.height_levels, height_stride),
            slope=AxisSpec(cfg.slope_start, cfg.slope_step, cfg.slope_levels),
        )

    def with_height_stride(self, stride: int) -> "GridSpec":
        return replace(self, height=replace(self.height, stride=stride))


class HypothesisGrid:
    """Cartesian product of the axes with a fixed enumeration order.

    Flat index layout is row-major over (peak1, peak2, peak3, slope, d1, d2,
    d3): all height combinations of one (locations, slope) choice are
    contiguous, which is what the penalty kernels iterate over.
    """

    def __init__(self, spec: GridSpec):
        self.spec = spec
        self.peaks1 = spec.peak1.values().astype(int)
        self.peaks2 = spec.peak2.values().astype(int)
        self.peaks3 = spec.peak3.values().astype(int)
        self.heights = spec.height.values().astype(float)
        self.slopes = spec.slope.values().astype(float)
        if (self.slopes <= 0).any():
            # slope 0 would meet the inf markers in the distance tables
            raise ValueError("grid slopes must be positive")
        nd = self.heights.size
        self.shape = (
            self.peaks1.size, self.peaks2.size, self.peaks3.size,
            self.slopes.size, nd, nd, nd,
        )
        self.n_params = int(np.prod(self.shape))

    @property
    def n_hypotheses(self) -> int:
        """Grid points times situation cells: the full hypothesis count."""
        return self.n_params * N_CELLS

    def params_at(self, index: int) -> ComfortParams:
        if not 0 <= index < self.n_params:
            raise IndexError(f"grid index out of range: {index}")
        i1, i2, i3, ia, j1, j2, j3 = np.unravel_index(index, self.shape)
        return ComfortParams(
            heights=(float(self.heights[j1]), float(self.heights[j2]), float(self.heights[j3])),
            peaks=(int(self.peaks1[i1]), int(self.peaks2[i2]), int(self.peaks3[i3])),
            slope=float(self.slopes[ia]),
        )

    def index_of(self, params: ComfortParams) -> int:
        def find(arr: np.ndarray, value: float) -> int:
            hits = np.flatnonzero(np.isclose(arr, value, rtol=0, atol=1e-9))
            if hits.size != 1:
                raise ValueError(f"value {value} is not a grid level")
            return int(hits[0])

        idx = (
            find(self.peaks1, params.peaks[0]),
            find(self.peaks2, params.peaks[1]),
            find(self.peaks3, params.peaks[2]),
            find(self.slopes, params.slope),
            find(self.heights, params.heights[0]),
            find(self.heights, params.heights[1]),
            find(self.heights, params.heights[2]),
        )
        return int(np.ravel_multi_index(idx, self.shape))

    def spec_hash(self) -> bytes:
        """Digest of the exact axis values; identifies the grid in snapshots."""
        h = hashlib.sha256()
        for arr in (self.peaks1, self.peaks2, self.peaks3, self.heights, self.slopes):
            h.update(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
        return h.digest()

    def distance_tables(
        self, run_period: int, offsets: np.ndarray, horizon: int = 192
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per peak axis: distance from each offset to its next in-window
        instance (np.inf when none remains). Shape (levels, len(offsets))."""
        run_period %= PERIODS_PER_DAY
        tables = []
        for peaks in (self.peaks1, self.peaks2, self.peaks3):
            table = np.full((peaks.size, offsets.size), np.inf)
            for li, peak in enumerate(peaks):
                first = (int(peak) - run_period) % PERIODS_PER_DAY
                instances = np.arange(first, horizon, PERIODS_PER_DAY)
                for j, off in enumerate(offsets):
                    ahead = instances[instances >= off]
                    if ahead.size:
                        table[li, j] = ahead[0] - off
            tables.append(table)
        return tables[0], tables[1], tables[2]
