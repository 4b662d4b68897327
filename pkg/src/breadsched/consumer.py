"""Household simulator: meals eat bread, freshness decays, scarcity triggers
a scheduling run, and the chosen finish time maximizes satisfaction minus
energy cost.

Stock is a single batch: a finished loaf merges into the stock and resets its
bake timestamp. Freshness halves every `half_life_hours`, so bread from the
previous day is close to worthless and choices revolve around the next day's
meals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .appliance import (
    PowerProfile,
    commit_limit,
    cost_vector,
    feasible_offsets,
    scenario_cost,
)
from .comfort import ComfortParams, distance_rows
from .config import PERIOD_HOURS, PERIODS_PER_DAY, ConsumerConfig
from .prices import PriceSeries


def is_weekend(day: int) -> bool:
    """Day 0 is a Monday."""
    return day % 7 >= 5


def freshness(age_periods: float, half_life_periods: float) -> float:
    """Exponential decay: 1.0 when just baked, 1/2 after one half-life."""
    if age_periods < 0:
        raise ValueError("age must be nonnegative")
    if half_life_periods <= 0:
        raise ValueError("half-life must be positive")
    return 2.0 ** (-age_periods / half_life_periods)


@dataclass
class HouseholdState:
    """Stock level, when that stock was baked, and the current period."""

    stock_kg: float
    bake_period: int
    period: int


@dataclass(frozen=True)
class SimRun:
    """One recorded scheduling decision with everything a learner may see."""

    run_id: int
    day: int
    weekend: bool               # whether the bake day (the next day) is a weekend
    run_period: int             # absolute period of the planning moment
    stock_kg: float
    periods_since_last: int
    stock_history: np.ndarray   # start-of-period stock for the run's day (96,)
    costs: np.ndarray           # money per feasible offset (horizon - K,)
    chosen_offset: int          # periods from the run moment to the finish


def goal_value(
    delta: int,
    state: HouseholdState,
    meals: list[tuple[int, float]],
    profile: PowerProfile,
    prices: PriceSeries,
    cfg: ConsumerConfig,
) -> float:
    """Satisfaction minus energy cost if the run finishes `delta` periods out.

    Walks the meal schedule in order: each meal eats min(stock, amount) at the
    stock's current freshness; the loaf lands at the finish period and resets
    the bake timestamp. Meals must be ascending absolute periods within the
    planning window.
    """
    cost = scenario_cost(profile, prices, state.period, delta)
    half_life = cfg.half_life_hours / PERIOD_HOURS
    finish = state.period + delta
    stock = state.stock_kg
    bake_t = state.bake_period
    baked = False
    comfort = 0.0
    for t, amount in meals:
        if not baked and t >= finish:
            stock += cfg.loaf_kg
            bake_t = finish
            baked = True
        eaten = min(stock, amount)
        if eaten > 0.0:
            comfort += cfg.satisfaction_per_kg * freshness(t - bake_t, half_life) * eaten
            stock -= eaten
    return comfort - cost


def optimal_finish(
    state: HouseholdState,
    meals: list[tuple[int, float]],
    profile: PowerProfile,
    prices: PriceSeries,
    cfg: ConsumerConfig,
) -> int:
    """Exhaustive argmax of goal_value over feasible offsets, smallest on ties."""
    best_delta = -1
    best_value = -math.inf
    for delta in range(len(profile), cfg.horizon):
        value = goal_value(delta, state, meals, profile, prices, cfg)
        if value > best_value:
            best_value = value
            best_delta = delta
    return best_delta


def draw_meal_plan(
    days: int, cfg: ConsumerConfig, rng: np.random.Generator
) -> dict[int, float]:
    """Meal amounts for every day up front, keyed by absolute period.

    Drawing everything first keeps the random stream independent of the
    simulated choices, so datasets are reproducible piecewise.
    """
    plan: dict[int, float] = {}
    for day in range(days):
        template = cfg.weekend_meals if is_weekend(day) else cfg.weekday_meals
        for period, mean in template:
            amount = max(0.0, float(rng.normal(mean, cfg.amount_jitter)))
            plan[day * PERIODS_PER_DAY + period] = amount
    return plan


def _window_meals(plan: dict[int, float], now: int, horizon: int) -> list[tuple[int, float]]:
    return [(t, plan[t]) for t in range(now + 1, now + horizon) if t in plan]


def simulate(
    days: int,
    prices: PriceSeries,
    seed: int,
    cfg: ConsumerConfig | None = None,
    profile: PowerProfile | None = None,
    rational_curve: ComfortParams | None = None,
) -> list[SimRun]:
    """Run the household day by day and record every scheduling decision.

    With `rational_curve` set, choices maximize that saw-tooth curve's comfort
    minus cost instead of the simulated goal (same trigger and stock dynamics);
    the arithmetic matches the learner's kernels exactly, which keeps such
    choices exactly optimal under the learner's evaluation.
    """
    from .appliance import default_profile  # local default, avoids cycles

    cfg = cfg or ConsumerConfig()
    profile = profile or default_profile()
    if days * PERIODS_PER_DAY + cfg.horizon > len(prices):
        raise ValueError("price horizon too short for the simulated days")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    plan = draw_meal_plan(days + (cfg.horizon // PERIODS_PER_DAY) + 1, cfg, rng)
    offsets = feasible_offsets(profile, cfg.horizon)

    runs: list[SimRun] = []
    stock = cfg.loaf_kg
    bake_t = 0
    pending: int | None = None
    last_run = 0
    trace = np.zeros(PERIODS_PER_DAY)
    for t in range(days * PERIODS_PER_DAY):
        day, p = divmod(t, PERIODS_PER_DAY)
        trace[p] = stock
        if pending is not None and pending == t:
            stock += cfg.loaf_kg
            bake_t = t
            pending = None
        amount = plan.get(t)
        if amount is not None:
            stock -= min(stock, amount)
        if p == cfg.planning_period and pending is None and stock < cfg.trigger_kg:
            history = trace.copy()
            projected = stock
            for q in range(p + 1, PERIODS_PER_DAY):
                history[q] = projected
                projected -= min(projected, plan.get(t - p + q, 0.0))
            costs = cost_vector(profile, prices, t, cfg.horizon)
            if rational_curve is not None:
                # Scan only the commit window so every trigger yields a run
                # and the choice matches the learner's best response exactly.
                n_commit = int((offsets < commit_limit(len(profile))).sum())
                d1, d2, d3 = distance_rows(
                    rational_curve, t, offsets[:n_commit], cfg.horizon
                )
                j = _kernels.best_single(
                    rational_curve.heights[0], rational_curve.heights[1],
                    rational_curve.heights[2], rational_curve.slope,
                    d1, d2, d3, costs[:n_commit],
                )
                chosen = int(offsets[j])
            else:
                state = HouseholdState(stock_kg=stock, bake_period=bake_t, period=t)
                chosen = optimal_finish(
                    state, _window_meals(plan, t, cfg.horizon), profile, prices, cfg
                )
            if chosen - len(profile) + 1 >= PERIODS_PER_DAY:
                # The program would not even start before tomorrow's planning
                # moment, so nothing is committed tonight: the household simply
                # re-decides tomorrow with fresher prices. Only started
                # programs count as appliance uses.
                continue
            runs.append(SimRun(
                run_id=len(runs),
                day=day,
                weekend=is_weekend(day + 1),
                run_period=t,
                stock_kg=stock,
                periods_since_last=t - last_run,
                stock_history=history,
                costs=costs,
                chosen_offset=chosen,
            ))
            pending = t + chosen
            last_run = t
    return runs
