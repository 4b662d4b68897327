"""Breadmaker scheduling under volatile tariffs: simulator, Bayesian
preference learner, and benchmark harness."""

__version__ = "0.1.0"

from .appliance import (
    PowerProfile,
    commit_limit,
    commitable_offsets,
    cost_vector,
    default_profile,
    feasible_offsets,
    scenario_cost,
)
from .comfort import (
    ComfortParams,
    GridSpec,
    HypothesisGrid,
    SituationCell,
    comfort_eval,
    situation_of,
)
from .config import AppConfig, load_config
from .consumer import SimRun, simulate
from .datasets import Dataset, observation_from_run, read_dataset, write_dataset
from .learner import LearnerParams, Observation, PenaltyTable, TuneResult, tune
from .prices import (
    PriceSeries,
    TariffZones,
    VolatilityLevel,
    generate_price_horizon,
)

__all__ = [
    "AppConfig",
    "ComfortParams",
    "Dataset",
    "GridSpec",
    "HypothesisGrid",
    "LearnerParams",
    "Observation",
    "PenaltyTable",
    "PowerProfile",
    "commit_limit",
    "commitable_offsets",
    "feasible_offsets",
    "PriceSeries",
    "SimRun",
    "SituationCell",
    "TariffZones",
    "TuneResult",
    "VolatilityLevel",
    "comfort_eval",
    "cost_vector",
    "default_profile",
    "generate_price_horizon",
    "load_config",
    "observation_from_run",
    "read_dataset",
    "scenario_cost",
    "simulate",
    "situation_of",
    "tune",
    "write_dataset",
]
