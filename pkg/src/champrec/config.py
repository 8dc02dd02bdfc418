"""Engine configuration.

All tunables live here with the prototype defaults. Configs load from JSON
files or mappings using either nested sections or dotted keys, e.g.
``{"shrinkage": {"K": 10}}`` or ``{"shrinkage.K": 10}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import InvalidParameter, InvalidWeights

WEIGHT_TOL = 1e-6


@dataclass(frozen=True)
class ScoreWeights:
    """Blend weights for the base score (performance, fit, mastery)."""

    lambda_w: float = 0.50
    lambda_f: float = 0.25
    lambda_m: float = 0.25

    def validate(self, tol: float = WEIGHT_TOL) -> None:
        values = (self.lambda_w, self.lambda_f, self.lambda_m)
        if any(v < 0 for v in values):
            raise InvalidWeights(f"score weights must be nonnegative: {values}")
        total = sum(values)
        if abs(total - 1.0) > tol:
            raise InvalidWeights(f"score weights must sum to 1, got {total}")

    def normalized(self) -> ScoreWeights:
        total = self.lambda_w + self.lambda_f + self.lambda_m
        if total <= 0:
            raise InvalidWeights("score weights sum to zero, cannot normalize")
        return ScoreWeights(self.lambda_w / total, self.lambda_f / total, self.lambda_m / total)


@dataclass(frozen=True)
class PlayerConfig:
    rho: float = 0.18


@dataclass(frozen=True)
class FitConfig:
    alpha: float = 0.75
    game_weight: float = 0.55
    pool_weight: float = 0.45


@dataclass(frozen=True)
class MasteryConfig:
    topk: int = 3
    weight_floor: float = 0.05


@dataclass(frozen=True)
class ArchetypeConfig:
    k: int = 6
    restarts: int = 10
    seed: int | None = None
    max_iters: int = 100


@dataclass(frozen=True)
class ShrinkageParams:
    k: float = 10.0
    beta: float = 1.0
    lam: float = 0.5


@dataclass(frozen=True)
class PriorConfig:
    alpha0: float = 1.0
    beta0: float = 1.0


@dataclass(frozen=True)
class EvalConfig:
    min_prefix: int = 5
    ks: tuple[int, ...] = (1, 3, 5, 10)


@dataclass(frozen=True)
class AblationFlags:
    """Component switches used by the ablation harness; all off by default."""

    drop_strength: bool = False
    drop_fit: bool = False
    drop_direct_mastery: bool = False
    drop_indirect_familiarity: bool = False
    drop_guardrail: bool = False
    ordinary_z: bool = False
    uniform_recency: bool = False
    unweighted_cosine: bool = False


@dataclass(frozen=True)
class EngineConfig:
    weights: ScoreWeights = field(default_factory=ScoreWeights)
    player: PlayerConfig = field(default_factory=PlayerConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    mastery: MasteryConfig = field(default_factory=MasteryConfig)
    archetype: ArchetypeConfig = field(default_factory=ArchetypeConfig)
    shrinkage: ShrinkageParams = field(default_factory=ShrinkageParams)
    prior: PriorConfig = field(default_factory=PriorConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    ablation: AblationFlags = field(default_factory=AblationFlags)
    seed: int = 0

    @property
    def archetype_seed(self) -> int:
        return self.archetype.seed if self.archetype.seed is not None else self.seed

    def with_weights(self, lambda_w: float, lambda_f: float, lambda_m: float) -> EngineConfig:
        weights = ScoreWeights(lambda_w, lambda_f, lambda_m)
        weights.validate()
        return replace(self, weights=weights.normalized())

    @staticmethod
    def from_mapping(mapping: Mapping[str, object]) -> EngineConfig:
        nested = _nest_dotted(mapping)
        config = EngineConfig()
        for section, value in nested.items():
            if section == "seed":
                config = replace(config, seed=int(value))  # type: ignore[arg-type]
                continue
            if section not in _SECTION_FIELDS:
                raise InvalidParameter(f"unknown config section {section!r}")
            if not isinstance(value, Mapping):
                raise InvalidParameter(f"config section {section!r} must be a mapping")
            config = replace(config, **{_SECTION_FIELDS[section]: _build_section(section, value)})
        config.weights.validate()
        return config

    @staticmethod
    def from_file(path: str | Path) -> EngineConfig:
        with Path(path).open(encoding="utf-8") as handle:
            return EngineConfig.from_mapping(json.load(handle))


_SECTION_FIELDS = {
    "weights": "weights",
    "player": "player",
    "fit": "fit",
    "mastery": "mastery",
    "archetype": "archetype",
    "shrinkage": "shrinkage",
    "prior": "prior",
    "eval": "eval",
    "ablation": "ablation",
}

# External key -> dataclass field, per section.
_KEY_ALIASES: dict[str, dict[str, str]] = {
    "weights": {"lambda_W": "lambda_w", "lambda_F": "lambda_f", "lambda_M": "lambda_m"},
    "shrinkage": {"K": "k", "lambda": "lam"},
}

_SECTION_TYPES = {
    "weights": ScoreWeights,
    "player": PlayerConfig,
    "fit": FitConfig,
    "mastery": MasteryConfig,
    "archetype": ArchetypeConfig,
    "shrinkage": ShrinkageParams,
    "prior": PriorConfig,
    "eval": EvalConfig,
    "ablation": AblationFlags,
}


def _build_section(section: str, values: Mapping[str, object]):
    cls = _SECTION_TYPES[section]
    aliases = _KEY_ALIASES.get(section, {})
    kwargs = {}
    for key, value in values.items():
        attr = aliases.get(key, key)
        if attr not in cls.__dataclass_fields__:
            raise InvalidParameter(f"unknown config key {section}.{key}")
        if attr == "ks" and isinstance(value, (list, tuple)):
            value = tuple(int(v) for v in value)
        kwargs[attr] = value
    return cls(**kwargs)


def _nest_dotted(mapping: Mapping[str, object]) -> dict[str, object]:
    nested: dict[str, object] = {}
    for key, value in mapping.items():
        if "." in key:
            section, _, sub = key.partition(".")
            bucket = nested.setdefault(section, {})
            if not isinstance(bucket, dict):
                raise InvalidParameter(f"conflicting config entries for {section!r}")
            bucket[sub] = value
        else:
            if key in nested and isinstance(nested[key], dict) and isinstance(value, Mapping):
                nested[key].update(value)
            else:
                nested[key] = value
    return nested
