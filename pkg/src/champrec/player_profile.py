"""Player style vectors: the recency-weighted recent-game vector, the
mastery-weighted champion-pool vector and per-champion recency mass."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .data_model import MasteryRecord, PlayerMatchRow
from .errors import EmptyHistory, InvalidParameter
from .preprocess import rank_scale

DEFAULT_RHO = 0.18
DEFAULT_POOL_WEIGHT_FLOOR = 0.05


@dataclass(frozen=True)
class PlayerVectors:
    """Both player vectors plus the recency bookkeeping behind them."""

    u_game: dict[str, float]
    u_pool: dict[str, float]
    recency_weights: tuple[float, ...]
    recency_mass: dict[str, float]
    rho: float = DEFAULT_RHO


def recency_weights(t: int, rho: float = DEFAULT_RHO) -> list[float]:
    """Exponential decay weights over match indices 1..T, newest heaviest,
    normalized to sum 1."""
    if t < 1:
        raise EmptyHistory("recency weights need at least one game")
    if rho < 0:
        raise InvalidParameter(f"decay parameter must be nonnegative, got {rho}")
    raw = [math.exp(-rho * (t - i)) for i in range(1, t + 1)]
    total = sum(raw)
    return [w / total for w in raw]


def uniform_weights(t: int) -> list[float]:
    if t < 1:
        raise EmptyHistory("uniform weights need at least one game")
    return [1.0 / t] * t


def recent_game_vector(
    history: Sequence[PlayerMatchRow], weights: Sequence[float]
) -> dict[str, float]:
    """Convex combination of the normalized history rows."""
    if not history:
        raise EmptyHistory("cannot build a recent-game vector from an empty history")
    if len(history) != len(weights):
        raise InvalidParameter("history length and weight count differ")
    out: dict[str, float] = {}
    for row, weight in zip(history, weights):
        for name, value in row.normalized.items():
            out[name] = out.get(name, 0.0) + weight * value
    return out


def pool_weight_raw(record: MasteryRecord) -> float:
    """Raw pool weight from mastery points, level and game count.

    Note the coefficients differ from the direct mastery score used for
    ranking; both formulas exist on purpose.
    """
    games = record.games or 0
    return 0.60 * math.log1p(record.points) + 0.20 * record.level + 0.20 * math.log1p(games)


def pool_vector(
    history: Sequence[PlayerMatchRow],
    mastery: Mapping[str, MasteryRecord],
    weight_floor: float = DEFAULT_POOL_WEIGHT_FLOOR,
) -> dict[str, float]:
    """Mastery-weighted blend of per-champion mean history vectors.

    Weights are rank-scaled over the played champions and floored so every
    played champion keeps some influence (and the denominator stays positive).
    """
    if not history:
        raise EmptyHistory("cannot build a pool vector from an empty history")
    played: dict[str, list[PlayerMatchRow]] = {}
    for row in history:
        played.setdefault(row.champion, []).append(row)
    champions = sorted(played)
    raw_weights = [
        pool_weight_raw(mastery.get(c, MasteryRecord(champion=c, games=len(played[c]))))
        for c in champions
    ]
    omega = [max(w, weight_floor) for w in rank_scale(raw_weights)]

    feature_names: set[str] = set()
    for rows in played.values():
        for row in rows:
            feature_names.update(row.normalized)

    means: dict[str, dict[str, float]] = {}
    for champion, rows in played.items():
        mean: dict[str, float] = {}
        for name in feature_names:
            mean[name] = sum(r.normalized.get(name, 0.0) for r in rows) / len(rows)
        means[champion] = mean

    total = sum(omega)
    out: dict[str, float] = {}
    for champion, w in zip(champions, omega):
        for name, value in means[champion].items():
            out[name] = out.get(name, 0.0) + w * value
    return {name: value / total for name, value in out.items()}


def recency_mass(
    history: Sequence[PlayerMatchRow], weights: Sequence[float]
) -> dict[str, float]:
    """Total recency weight accumulated by each champion in the history."""
    if len(history) != len(weights):
        raise InvalidParameter("history length and weight count differ")
    mass: dict[str, float] = {}
    for row, weight in zip(history, weights):
        mass[row.champion] = mass.get(row.champion, 0.0) + weight
    return mass


def build_player_vectors(
    history: Sequence[PlayerMatchRow],
    mastery: Mapping[str, MasteryRecord],
    rho: float = DEFAULT_RHO,
    uniform: bool = False,
    weight_floor: float = DEFAULT_POOL_WEIGHT_FLOOR,
) -> PlayerVectors:
    """Assemble both vectors; an empty history yields zero vectors so that
    cold-start requests still rank."""
    if not history:
        return PlayerVectors(
            u_game={}, u_pool={}, recency_weights=(), recency_mass={}, rho=rho
        )
    t = len(history)
    weights = uniform_weights(t) if uniform else recency_weights(t, rho)
    return PlayerVectors(
        u_game=recent_game_vector(history, weights),
        u_pool=pool_vector(history, mastery, weight_floor),
        recency_weights=tuple(weights),
        recency_mass=recency_mass(history, weights),
        rho=rho,
    )
