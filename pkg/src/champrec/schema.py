"""Feature schemas: ordered feature lists with weights, sign directions and skew flags.

The recommendation schema drives strength and fit scoring; the archetype
schema extends it with durability features for clustering. Weights over a
schema always sum to 1 (the two archetype extras carry zero weight so the
invariant holds for both).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidWeights

WEIGHT_SUM_TOL = 1e-9

# Sparse event counters that get a log(1+x) transform before normalization.
SKEWED_FEATURES = frozenset(
    {
        "objectivesStolen",
        "baronTakedowns",
        "dragonTakedowns",
        "riftHeraldTakedowns",
        "turretPlatesTaken",
        "turretTakedowns",
    }
)


class Direction(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    strength_weight: float
    direction: Direction = Direction.POSITIVE
    skewed: bool = False


@dataclass(frozen=True)
class FeatureSchema:
    entries: tuple[FeatureSpec, ...]

    def __post_init__(self) -> None:
        for spec in self.entries:
            if not 0.0 <= spec.strength_weight <= 1.0:
                raise InvalidWeights(
                    f"feature weight out of [0, 1] for {spec.name!r}: {spec.strength_weight}"
                )
        total = sum(spec.strength_weight for spec in self.entries)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidWeights(f"feature weights must sum to 1, got {total!r}")
        names = [spec.name for spec in self.entries]
        if len(set(names)) != len(names):
            raise InvalidWeights("duplicate feature names in schema")

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.entries)

    def spec(self, name: str) -> FeatureSpec:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(entry.name == name for entry in self.entries)

    def weight_vector(self) -> np.ndarray:
        return np.array([spec.strength_weight for spec in self.entries], dtype=float)

    def sign_vector(self) -> np.ndarray:
        return np.array(
            [-1.0 if spec.direction is Direction.NEGATIVE else 1.0 for spec in self.entries],
            dtype=float,
        )


_RECOMMENDATION_FEATURES: tuple[tuple[str, float, Direction], ...] = (
    ("damagePerMinute", 0.20, Direction.POSITIVE),
    ("goldPerMinute", 0.16, Direction.POSITIVE),
    ("cs_per_min", 0.14, Direction.POSITIVE),
    ("laneMinionsFirst10Minutes", 0.10, Direction.POSITIVE),
    ("deaths_per_min", 0.18, Direction.NEGATIVE),
    ("killParticipation", 0.10, Direction.POSITIVE),
    ("damageDealtToBuildings", 0.06, Direction.POSITIVE),
    ("damageDealtToObjectives", 0.03, Direction.POSITIVE),
    ("visionScorePerMinute", 0.02, Direction.POSITIVE),
    ("totalTimeCCDealt", 0.01, Direction.POSITIVE),
)

ARCHETYPE_EXTRA_FEATURES: tuple[str, ...] = ("totalDamageTaken", "damageSelfMitigated")


def recommendation_schema() -> FeatureSchema:
    """The ten-feature scoring schema with prototype weights."""
    return FeatureSchema(
        entries=tuple(
            FeatureSpec(name, weight, direction, skewed=name in SKEWED_FEATURES)
            for name, weight, direction in _RECOMMENDATION_FEATURES
        )
    )


def archetype_schema() -> FeatureSchema:
    """The clustering schema: scoring features plus durability and mitigation."""
    extras = tuple(
        FeatureSpec(name, 0.0, Direction.POSITIVE, skewed=name in SKEWED_FEATURES)
        for name in ARCHETYPE_EXTRA_FEATURES
    )
    return FeatureSchema(entries=recommendation_schema().entries + extras)
