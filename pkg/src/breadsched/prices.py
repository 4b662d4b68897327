"""Three-zone electricity tariff perturbed by an additive Gaussian random walk.

Prices are money units per kWh on a 15-minute grid (96 periods per day).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .config import PERIODS_PER_DAY, TariffConfig, VolatilityConfig


class VolatilityLevel(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


@dataclass(frozen=True)
class TariffZones:
    """Piecewise-constant daily tariff: night, evening, and day (the rest).

    Zone boundaries are period-of-day indices; the night zone wraps midnight.
    """

    night_start: int
    night_end: int
    evening_start: int
    evening_end: int
    night_price: float
    day_price: float
    evening_price: float
    floor: float = 0.2

    def __post_init__(self):
        for name in ("night_start", "night_end", "evening_start", "evening_end"):
            v = getattr(self, name)
            if not 0 <= v < PERIODS_PER_DAY:
                raise ValueError(f"{name} must lie in [0, {PERIODS_PER_DAY}), got {v}")
        # wrap-around night means the in-day order must be:
        # night_end <= evening_start <= evening_end <= night_start
        if not (self.night_end <= self.evening_start <= self.evening_end <= self.night_start):
            raise ValueError("tariff zones overlap or are out of order")
        if self.floor <= 0:
            raise ValueError("price floor must be positive")
        if min(self.night_price, self.day_price, self.evening_price) < self.floor:
            raise ValueError("zone prices must not undercut the floor")

    @classmethod
    def from_config(cls, cfg: TariffConfig) -> "TariffZones":
        return cls(
            night_start=cfg.night_start,
            night_end=cfg.night_end,
            evening_start=cfg.evening_start,
            evening_end=cfg.evening_end,
            night_price=cfg.night_price,
            day_price=cfg.day_price,
            evening_price=cfg.evening_price,
            floor=cfg.floor,
        )


def base_price(period: int, zones: TariffZones) -> float:
    """Unperturbed price for a period-of-day index in [0, 96)."""
    if not 0 <= period < PERIODS_PER_DAY:
        raise ValueError(f"period must lie in [0, {PERIODS_PER_DAY}), got {period}")
    if period >= zones.night_start or period < zones.night_end:
        return zones.night_price
    if zones.evening_start <= period < zones.evening_end:
        return zones.evening_price
    return zones.day_price


@dataclass(frozen=True)
class PriceSeries:
    """Per-period prices over a whole horizon; length is a multiple of 96."""

    prices: np.ndarray
    floor: float

    def __post_init__(self):
        p = np.asarray(self.prices, dtype=float)
        object.__setattr__(self, "prices", p)
        if p.ndim != 1 or p.size == 0 or p.size % PERIODS_PER_DAY:
            raise ValueError("price series length must be a positive multiple of 96")
        if np.min(p) < self.floor:
            raise ValueError("price below configured floor")

    def __len__(self) -> int:
        return self.prices.size

    @property
    def n_days(self) -> int:
        return self.prices.size // PERIODS_PER_DAY


def tile_base(zones: TariffZones, days: int) -> PriceSeries:
    """Repeat the daily tariff over `days` days, unperturbed."""
    if days <= 0:
        raise ValueError("days must be positive")
    day = np.array([base_price(p, zones) for p in range(PERIODS_PER_DAY)])
    return PriceSeries(prices=np.tile(day, days), floor=zones.floor)


def perturb_random_walk(
    base: PriceSeries, stddev: float, seed: int, mode: str = "continuous"
) -> PriceSeries:
    """Add a Gaussian random walk w (w[0] = 0) to the series, clamped at the floor.

    mode "continuous" is one walk over the whole series; "daily" restarts the
    walk at each midnight so the tariff structure survives long horizons.
    """
    if stddev < 0:
        raise ValueError("stddev must be nonnegative")
    n = len(base)
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, stddev, size=n)
    if mode == "continuous":
        steps[0] = 0.0
        walk = np.cumsum(steps)
    elif mode == "daily":
        per_day = steps.reshape(-1, PERIODS_PER_DAY)
        per_day[:, 0] = 0.0
        walk = np.cumsum(per_day, axis=1).ravel()
    else:
        raise ValueError(f"unknown walk mode: {mode}")
    return PriceSeries(prices=np.maximum(base.floor, base.prices + walk), floor=base.floor)


def generate_price_horizon(
    days: int,
    level: VolatilityLevel | str,
    seed: int,
    zones: TariffZones,
    volatility: VolatilityConfig | None = None,
) -> PriceSeries:
    """Tiled base tariff plus the level's random walk."""
    volatility = volatility or VolatilityConfig()
    stddev = {
        VolatilityLevel.LOW: volatility.low,
        VolatilityLevel.MEDIUM: volatility.medium,
        VolatilityLevel.HIGH: volatility.high,
    }[VolatilityLevel(level)]
    return perturb_random_walk(tile_base(zones, days), stddev, seed, mode=volatility.walk_mode)


def write_price_csv(series: PriceSeries, path: str | Path) -> None:
    """Dump the series as day,period,price rows (exact float round-trip)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day", "period", "price"])
        for t, price in enumerate(series.prices):
            writer.writerow([t // PERIODS_PER_DAY, t % PERIODS_PER_DAY, repr(float(price))])


def read_price_csv(path: str | Path, floor: float = 0.2) -> PriceSeries:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    prices = np.empty(len(rows))
    for i, row in enumerate(rows):
        t = int(row["day"]) * PERIODS_PER_DAY + int(row["period"])
        prices[t] = float(row["price"])
        if t != i:
            raise ValueError("price CSV rows out of order")
    return PriceSeries(prices=prices, floor=floor)
