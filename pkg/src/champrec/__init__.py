"""Interpretable player-conditional champion recommendation engine.

Ingests a player's match history, mastery records and a population champion
table; returns a ranked, score-decomposed champion list; ships with a
temporal offline evaluation harness, an HTTP service and a batch CLI.
"""

from .config import EngineConfig, ScoreWeights
from .data_model import (
    ChampionVector,
    DataBundle,
    MasteryRecord,
    PlayerMatchRow,
    assemble_bundle,
    load_bundle,
    load_history,
    load_mastery,
    load_population,
    save_bundle,
)
from .errors import ChamprecError
from .evaluation import EvalReport, evaluate, fit_calibration, run_ablations, run_baselines, temporal_eval
from .schema import FeatureSchema, FeatureSpec, archetype_schema, recommendation_schema
from .scoring import Recommendation, RecommendResult, build_engine_state, recommend

__version__ = "0.1.0"

__all__ = [
    "ChampionVector",
    "ChamprecError",
    "DataBundle",
    "EngineConfig",
    "EvalReport",
    "FeatureSchema",
    "FeatureSpec",
    "MasteryRecord",
    "PlayerMatchRow",
    "Recommendation",
    "RecommendResult",
    "ScoreWeights",
    "archetype_schema",
    "assemble_bundle",
    "build_engine_state",
    "evaluate",
    "fit_calibration",
    "load_bundle",
    "load_history",
    "load_mastery",
    "load_population",
    "recommend",
    "recommendation_schema",
    "run_ablations",
    "run_baselines",
    "save_bundle",
    "temporal_eval",
]
