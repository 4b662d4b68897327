"""Shared fixtures: constant price series, a desk-size hypothesis grid, and a
small generated dataset reused by the harness tests."""
from __future__ import annotations

import numpy as np
import pytest

from breadsched.comfort import AxisSpec, GridSpec, HypothesisGrid
from breadsched.config import PERIODS_PER_DAY, AppConfig
from breadsched.harness import cmd_generate
from breadsched.prices import PriceSeries

# run moment and offer set shared by most learner-level tests: planning at
# 21:00, offsets that start before the next evening's planning moment
RUN_PERIOD = 84
OFFER_OFFSETS = np.arange(10, 105)


@pytest.fixture
def flat_prices():
    """Factory for a constant price series."""

    def make(value: float = 4.0, days: int = 4, floor: float = 0.2) -> PriceSeries:
        return PriceSeries(prices=np.full(days * PERIODS_PER_DAY, float(value)), floor=floor)

    return make


@pytest.fixture
def small_grid() -> HypothesisGrid:
    """432-point grid: 2 levels per peak, 3 heights, 2 slopes."""
    return HypothesisGrid(GridSpec(
        peak1=AxisSpec(30, 4, 2),
        peak2=AxisSpec(50, 4, 2),
        peak3=AxisSpec(78, 4, 2),
        height=AxisSpec(9.0, 0.9, 3),
        slope=AxisSpec(0.5, 0.2, 2),
    ))


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory) -> dict:
    """An 80-day medium dataset: enough runs for splits, small enough to stay fast."""
    out = tmp_path_factory.mktemp("tiny")
    result = cmd_generate("medium", days=80, seed=0, out_dir=out, cfg=AppConfig())
    return {"path": result["dataset"], "out": out, "result": result}
