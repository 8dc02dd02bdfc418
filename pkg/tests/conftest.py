"""Shared synthetic data builders for the test suite."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest

from champrec.data_model import (
    ChampionVector,
    MasteryRecord,
    PlayerMatchRow,
    assemble_bundle,
)
from champrec.schema import archetype_schema

FEATURE_SCALES = {
    "damagePerMinute": (600.0, 150.0),
    "goldPerMinute": (400.0, 60.0),
    "cs_per_min": (6.0, 2.0),
    "laneMinionsFirst10Minutes": (60.0, 15.0),
    "deaths_per_min": (0.25, 0.08),
    "killParticipation": (0.5, 0.12),
    "damageDealtToBuildings": (2000.0, 800.0),
    "damageDealtToObjectives": (5000.0, 2000.0),
    "visionScorePerMinute": (1.2, 0.5),
    "totalTimeCCDealt": (25.0, 10.0),
    "totalDamageTaken": (20000.0, 5000.0),
    "damageSelfMitigated": (10000.0, 6000.0),
}


def champion_profiles(n: int, rng: np.random.Generator) -> dict[str, dict[str, float]]:
    """Distinct raw feature profiles for n synthetic champions."""
    profiles: dict[str, dict[str, float]] = {}
    for i in range(n):
        name = f"Champ{i:02d}"
        profiles[name] = {
            feature: float(abs(rng.normal(loc, scale)))
            for feature, (loc, scale) in FEATURE_SCALES.items()
        }
    return profiles


def population_from_profiles(profiles: dict[str, dict[str, float]]) -> list[ChampionVector]:
    return [ChampionVector(champion=c, raw=dict(raw)) for c, raw in profiles.items()]


def history_rows(
    profiles: dict[str, dict[str, float]],
    picks: list[str],
    rng: np.random.Generator,
    jitter: float = 0.1,
    with_win: bool = True,
    role: str = "Middle",
) -> list[PlayerMatchRow]:
    """Player rows whose features hover around the picked champion's profile."""
    rows = []
    for i, champion in enumerate(picks, start=1):
        base = profiles[champion]
        features = {
            name: value * float(rng.uniform(1.0 - jitter, 1.0 + jitter))
            for name, value in base.items()
        }
        rows.append(
            PlayerMatchRow(
                index=i,
                champion=champion,
                role=role,
                win=bool(rng.random() < 0.55) if with_win else None,
                features=features,
            )
        )
    return rows


def mastery_records(
    champions: list[str], rng: np.random.Generator, max_points: int = 60000
) -> list[MasteryRecord]:
    return [
        MasteryRecord(
            champion=c,
            points=int(rng.integers(1000, max_points)),
            level=int(rng.integers(1, 7)),
        )
        for c in champions
    ]


def synth_bundle(
    n_champions: int = 12,
    n_games: int = 30,
    seed: int = 7,
    pool_size: int = 4,
    with_win: bool = True,
):
    """A coherent bundle: the player rotates a pool of the first few champions."""
    rng = np.random.default_rng(seed)
    schema = archetype_schema()
    profiles = champion_profiles(n_champions, rng)
    champions = list(profiles)
    picks = [champions[int(i)] for i in rng.integers(0, pool_size, size=n_games)]
    history = history_rows(profiles, picks, rng, with_win=with_win)
    mastery = mastery_records(champions[: pool_size + 2], rng)
    return assemble_bundle(schema, population_from_profiles(profiles), history, mastery)


def write_csv(path: Path, rows: list[dict[str, object]], fieldnames: list[str]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return path


@pytest.fixture
def small_bundle():
    return synth_bundle()


@pytest.fixture
def rng():
    return np.random.default_rng(42)
