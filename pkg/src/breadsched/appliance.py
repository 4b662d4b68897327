"""Breadmaker power profile and scenario energy costs.

A scenario is "finish the program delta periods from now". The profile is
finish-anchored: kw[0] is the final period of the run, kw[K-1] the first, so
the run occupies absolute periods now + delta - K + 1 .. now + delta.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PERIOD_HOURS, PERIODS_PER_DAY, ProfileConfig
from .prices import PriceSeries


@dataclass(frozen=True)
class PowerProfile:
    """Per-period consumption in kW, finish-anchored (index 0 = last period)."""

    kw: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.kw, dtype=float)
        object.__setattr__(self, "kw", arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("profile must be a nonempty 1-D array")
        if np.any(arr < 0):
            raise ValueError("profile powers must be nonnegative")
        if not np.any(arr > 0):
            raise ValueError("profile must consume some energy")

    def __len__(self) -> int:
        return self.kw.size

    @property
    def energy_kwh(self) -> float:
        return float(np.sum(self.kw) * PERIOD_HOURS)


def default_profile(cfg: ProfileConfig | None = None) -> PowerProfile:
    """Knead, rise, bake; baking is the final (and hungriest) phase."""
    cfg = cfg or ProfileConfig()
    kw = np.concatenate([
        np.full(cfg.bake_periods, cfg.bake_kw),
        np.full(cfg.rise_periods, cfg.rise_kw),
        np.full(cfg.knead_periods, cfg.knead_kw),
    ])
    return PowerProfile(kw=kw)


def scenario_cost(profile: PowerProfile, prices: PriceSeries, now: int, delta: int) -> float:
    """Energy cost (money) of finishing `delta` periods after `now`."""
    k = len(profile)
    if delta < k:
        raise ValueError(f"program does not fit: delta {delta} < program length {k}")
    if now + delta >= len(prices):
        raise ValueError("scenario beyond price horizon")
    p = prices.prices
    total = 0.0
    for tau in range(k):
        total += profile.kw[tau] * p[now + delta - tau]
    return total * PERIOD_HOURS


def cost_vector(
    profile: PowerProfile, prices: PriceSeries, now: int, horizon: int = 192
) -> np.ndarray:
    """Costs for every feasible offset delta in [K, horizon), length horizon - K."""
    k = len(profile)
    if horizon <= k:
        raise ValueError("horizon shorter than the program")
    if now < 0 or now + horizon > len(prices):
        raise ValueError("scenario beyond price horizon")
    window = prices.prices[now + 1 : now + horizon]  # periods now+1 .. now+horizon-1
    sliding = np.lib.stride_tricks.sliding_window_view(window, k)
    # window row j covers periods now+1+j .. now+k+j ascending; kw is
    # finish-anchored so it pairs with the reversed profile.
    return sliding @ profile.kw[::-1] * PERIOD_HOURS


def feasible_offsets(profile: PowerProfile, horizon: int = 192) -> np.ndarray:
    """Offsets delta that cost_vector covers, in order: K, K+1, .., horizon-1."""
    return np.arange(len(profile), horizon)


def commit_limit(program_length: int) -> int:
    """Exclusive upper bound on offsets whose program starts before the next
    planning moment, one day out.

    A scenario finishing at delta occupies periods delta-K+1 .. delta. If the
    start lands on or after the next planning moment the household has not
    committed to anything tonight; it will simply re-decide tomorrow. Such
    scenarios are features (their costs are observable) but never choices.
    """
    return PERIODS_PER_DAY + program_length - 1


def commitable_offsets(profile: PowerProfile) -> np.ndarray:
    """Offsets the household can actually commit to at a planning moment."""
    return np.arange(len(profile), commit_limit(len(profile)))
