"""Mastery and familiarity signals: direct mastery, direct performance and
indirect familiarity through similarity to the player's mastered champions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .data_model import MasteryRecord, PlayerMatchRow
from .preprocess import rank_scale
from .schema import FeatureSchema
from .similarity import plain_cosine, vector_from_map
from .strength import row_score

DEFAULT_TOPK = 3
DEFAULT_WEIGHT_FLOOR = 0.05

DIRECT_COMBINE_WEIGHT = 0.70
INDIRECT_COMBINE_WEIGHT = 0.30


@dataclass(frozen=True)
class MasterySignals:
    """Raw and rank-scaled mastery components for one candidate champion."""

    champion: str
    direct_raw: float
    direct: float
    perf_raw: float
    perf: float
    indirect_raw: float
    indirect: float
    combined: float
    mean_row_score: float
    mean_win: float | None
    games: int


def direct_mastery_raw(points: float, level: float, games: float, recency: float) -> float:
    """Log-damped mastery points and games, plus level and recency mass."""
    return (
        0.55 * math.log1p(points)
        + 0.15 * level
        + 0.20 * math.log1p(games)
        + 0.10 * recency
    )


def direct_performance_raw(mean_row_score: float, mean_win: float | None) -> float:
    """Mean row score plus the win edge; a missing win label is neutral."""
    win = 0.5 if mean_win is None else mean_win
    return 0.65 * mean_row_score + 0.35 * (win - 0.5)


def indirect_familiarity(
    candidate: np.ndarray,
    mastered: Sequence[tuple[np.ndarray, float]],
    topk: int = DEFAULT_TOPK,
) -> float:
    """Mean of the top-k mastery-weighted nonnegative cosines to the pool.

    Empty pools score 0; negative similarity clamps to 0 so dissimilar
    champions never get penalized below neutral.
    """
    if not mastered:
        return 0.0
    sims = sorted(
        (eta * max(0.0, plain_cosine(candidate, vector)) for vector, eta in mastered),
        reverse=True,
    )
    top = sims[: min(topk, len(sims))]
    return sum(top) / len(top)


def mastery_signals(
    champions: Sequence[str],
    normalized_vectors: Mapping[str, Mapping[str, float]],
    history: Sequence[PlayerMatchRow],
    mastery: Mapping[str, MasteryRecord],
    recency_mass: Mapping[str, float],
    schema: FeatureSchema,
    topk: int = DEFAULT_TOPK,
    weight_floor: float = DEFAULT_WEIGHT_FLOOR,
) -> dict[str, MasterySignals]:
    """All mastery components for every candidate, rank-scaled over the set.

    Candidates without history rows fall back to their static mastery record
    (zero recency mass); candidates without any record score zero raw mastery.
    """
    rows_by_champion: dict[str, list[PlayerMatchRow]] = {}
    for row in history:
        rows_by_champion.setdefault(row.champion, []).append(row)

    direct_raws: list[float] = []
    perf_raws: list[float] = []
    row_means: dict[str, float] = {}
    win_means: dict[str, float | None] = {}
    games_map: dict[str, int] = {}
    for champion in champions:
        record = mastery.get(champion)
        points = record.points if record else 0
        level = record.level if record else 0
        games = (record.games or 0) if record else 0
        games_map[champion] = games
        direct_raws.append(
            direct_mastery_raw(points, level, games, recency_mass.get(champion, 0.0))
        )
        rows = rows_by_champion.get(champion, [])
        if rows:
            scores = [row_score(r.normalized, schema) for r in rows]
            mean_score = sum(scores) / len(scores)
            labeled = [r.win for r in rows if r.win is not None]
            mean_win = sum(labeled) / len(labeled) if labeled else None
        else:
            mean_score = 0.0
            mean_win = None
        row_means[champion] = mean_score
        win_means[champion] = mean_win
        perf_raws.append(direct_performance_raw(mean_score, mean_win))

    direct_scaled = rank_scale(direct_raws)
    perf_scaled = rank_scale(perf_raws)
    direct_raw_map = dict(zip(champions, direct_raws))

    # Mastered pool: positive raw direct mastery and a population vector.
    pool = sorted(c for c in champions if direct_raw_map[c] > 0.0)
    if pool:
        eta_values = [max(e, weight_floor) for e in rank_scale([direct_raw_map[c] for c in pool])]
        mastered = [
            (vector_from_map(normalized_vectors[c], schema.feature_names), eta)
            for c, eta in zip(pool, eta_values)
        ]
    else:
        mastered = []

    indirect_raws = [
        indirect_familiarity(
            vector_from_map(normalized_vectors[c], schema.feature_names), mastered, topk
        )
        for c in champions
    ]
    indirect_scaled = rank_scale(indirect_raws)

    out: dict[str, MasterySignals] = {}
    for i, champion in enumerate(champions):
        combined = (
            DIRECT_COMBINE_WEIGHT * direct_scaled[i]
            + INDIRECT_COMBINE_WEIGHT * indirect_scaled[i]
        )
        out[champion] = MasterySignals(
            champion=champion,
            direct_raw=direct_raws[i],
            direct=direct_scaled[i],
            perf_raw=perf_raws[i],
            perf=perf_scaled[i],
            indirect_raw=indirect_raws[i],
            indirect=indirect_scaled[i],
            combined=combined,
            mean_row_score=row_means[champion],
            mean_win=win_means[champion],
            games=games_map[champion],
        )
    return out
