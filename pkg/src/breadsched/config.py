"""Default parameters and INI-file overrides.

Every module reads its knobs from one of the dataclasses below; an INI file
passed via ``--config`` overrides individual keys section by section.
"""
from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

PERIODS_PER_DAY = 96
PERIOD_HOURS = 0.25


@dataclass(frozen=True)
class TariffConfig:
    """Three-zone daily tariff. Boundaries are period-of-day indices in [0, 96).

    The night zone wraps midnight: [night_start, 96) U [0, night_end).
    Prices are money units per kWh.
    """

    night_start: int = 92    # 23:00
    night_end: int = 28      # 07:00
    evening_start: int = 68  # 17:00
    evening_end: int = 84    # 21:00
    night_price: float = 3.3
    day_price: float = 7.7
    evening_price: float = 12.1
    floor: float = 0.2


@dataclass(frozen=True)
class VolatilityConfig:
    """Per-period stddev of the additive Gaussian random walk, by level.

    walk_mode "daily" restarts the walk at each midnight; "continuous" runs a
    single walk across the whole horizon.
    """

    low: float = 0.10
    medium: float = 0.35
    high: float = 0.50
    walk_mode: str = "daily"


@dataclass(frozen=True)
class ProfileConfig:
    """Power profile of one program run, finish-anchored (kW per period)."""

    # The bake phase carries almost all the energy. Its draw sets the scale of
    # the night-vs-day cost premium, which must exceed the comfort gain of a
    # breakfast-fresh loaf on a typical day (so night finishes dominate) while
    # staying small enough for price dips to flip the choice now and then.
    bake_periods: int = 4
    bake_kw: float = 1.5
    rise_periods: int = 4
    rise_kw: float = 0.05
    knead_periods: int = 2
    knead_kw: float = 0.10


@dataclass(frozen=True)
class ConsumerConfig:
    """Household model: meals, freshness, stock, and planning trigger."""

    satisfaction_per_kg: float = 100.0
    half_life_hours: float = 3.0
    # (period-of-day, mean kg) per meal; weekends shift breakfast later.
    # Lunch is the largest meal, which keeps the night / breakfast / lunch
    # finish options within price-noise of each other instead of letting
    # breakfast dominate. Amounts are identical across the week: scaling
    # weekends up makes skipping a weekday to bake fresh for the bigger
    # weekend breakfast rational, and next-day finishes blow up every
    # predictor's error scale.
    weekday_meals: tuple[tuple[int, float], ...] = ((32, 0.15), (52, 0.18), (78, 0.10))
    weekend_meals: tuple[tuple[int, float], ...] = ((36, 0.15), (52, 0.18), (78, 0.10))
    # Meal noise flips knife-edge choices invisibly to any predictor; keep it
    # small so day-to-day variation stays price-driven.
    amount_jitter: float = 0.005
    loaf_kg: float = 0.75
    trigger_kg: float = 0.20
    planning_period: int = 84  # 21:00
    horizon: int = 192


@dataclass(frozen=True)
class GridConfig:
    """Axis definitions of the full hypothesis grid (before any stride)."""

    peak1_start: int = 30   # 07:30
    peak1_step: int = 2
    peak1_levels: int = 5
    peak2_start: int = 50   # 12:30
    peak2_step: int = 2
    peak2_levels: int = 5
    peak3_start: int = 78   # 19:30
    peak3_step: int = 2
    peak3_levels: int = 5
    height_start: float = 9.0
    height_step: float = 0.3
    height_levels: int = 20
    slope_start: float = 0.5
    slope_step: float = 0.1
    slope_levels: int = 5


@dataclass(frozen=True)
class LearnerConfig:
    """Kernel/posterior parameters and their tuning candidates."""

    beta: float = 5.0
    gamma: float = 5.0
    k0: float = 0.0
    prior: str = "none"  # or "center-quadratic"
    stock_weight: float = 1.0     # per kg
    weekend_weight: float = 0.3   # kg-equivalent for a flag mismatch
    beta_candidates: tuple[float, ...] = (0.0, 1.0, 5.0, 20.0)
    gamma_candidates: tuple[float, ...] = (1.0, 5.0, 20.0)


@dataclass(frozen=True)
class HarnessConfig:
    holdout_fraction: float = 0.2
    folds: int = 5
    grid_stride: int = 2
    learning_curve_sizes: tuple[int, ...] = (10, 25, 50, 100)
    learning_curve_repeats: int = 10
    days: int = 400


@dataclass(frozen=True)
class AppConfig:
    tariff: TariffConfig = field(default_factory=TariffConfig)
    volatility: VolatilityConfig = field(default_factory=VolatilityConfig)
    profile: ProfileConfig = field(default_factory=ProfileConfig)
    consumer: ConsumerConfig = field(default_factory=ConsumerConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    harness: HarnessConfig = field(default_factory=HarnessConfig)


def _coerce(text: str, like) -> object:
    if isinstance(like, bool):
        return text.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    if isinstance(like, tuple):
        parts = [p for p in text.replace(",", " ").split() if p]
        if like and isinstance(like[0], tuple):
            # meal lists: "32:0.16 52:0.14 78:0.10"
            return tuple((int(p.split(":")[0]), float(p.split(":")[1])) for p in parts)
        element = like[0] if like else 0.0
        return tuple(type(element)(p) for p in parts)
    return text.strip()


def _override(section: configparser.SectionProxy, defaults):
    values = {}
    for f in dataclasses.fields(defaults):
        if f.name in section:
            values[f.name] = _coerce(section[f.name], getattr(defaults, f.name))
    return dataclasses.replace(defaults, **values) if values else defaults


def load_config(path: str | Path | None = None) -> AppConfig:
    """Build an AppConfig, overlaying an INI file on the defaults if given."""
    cfg = AppConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser()
    read = parser.read(str(path))
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    updates = {}
    for name in ("tariff", "volatility", "profile", "consumer", "grid", "learner", "harness"):
        if parser.has_section(name):
            updates[name] = _override(parser[name], getattr(cfg, name))
    return dataclasses.replace(cfg, **updates) if updates else cfg
