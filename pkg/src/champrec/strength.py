"""Population strength: the weighted feature proxy, its rank-scaled form,
the role-aware shrinkage score and the beta-binomial posterior mean.

The overall-mode proxy is the default; the role-aware score only applies
when reliable role labels and win rates exist, which the plain population
CSV does not carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .config import PriorConfig, ShrinkageParams
from .data_model import PlayerMatchRow
from .errors import InvalidCounts, MissingBaseline
from .preprocess import rank_scale
from .schema import FeatureSchema


@dataclass(frozen=True)
class StrengthScore:
    champion: str
    raw: float
    scaled: float


@dataclass(frozen=True)
class RoleAggregate:
    """Per champion-role aggregates feeding the shrinkage score."""

    champion: str
    role: str
    n: int
    mean_row_score: float
    win_rate: float
    row_score_sd: float


@dataclass(frozen=True)
class ShrinkageConfig:
    params: ShrinkageParams = field(default_factory=ShrinkageParams)
    role_baseline: Mapping[str, float] = field(default_factory=dict)


def row_score(normalized: Mapping[str, float], schema: FeatureSchema) -> float:
    """Weighted sum of sign-adjusted robust scores; the shared row score."""
    return sum(
        spec.strength_weight * normalized.get(spec.name, 0.0) for spec in schema.entries
    )


def strength_raw(normalized: Mapping[str, float], schema: FeatureSchema) -> float:
    return row_score(normalized, schema)


def strength_scores(
    champions: Sequence[str],
    normalized_vectors: Mapping[str, Mapping[str, float]],
    schema: FeatureSchema,
) -> list[StrengthScore]:
    """Raw strength per champion, then percentile rank scaling over the set."""
    raws = [strength_raw(normalized_vectors[c], schema) for c in champions]
    scaled = rank_scale(raws)
    return [
        StrengthScore(champion=c, raw=r, scaled=s)
        for c, r, s in zip(champions, raws, scaled)
    ]


def role_aware_score(agg: RoleAggregate, cfg: ShrinkageConfig) -> float:
    """Shrunk skill plus weighted win edge minus an instability penalty."""
    if agg.role not in cfg.role_baseline:
        raise MissingBaseline(f"no role baseline for {agg.role!r}")
    params = cfg.params
    shrink = agg.n / (agg.n + params.k)
    skill = shrink * agg.mean_row_score
    edge = shrink * (agg.win_rate - cfg.role_baseline[agg.role])
    penalty = params.lam * agg.row_score_sd / math.sqrt(agg.n)
    return skill + params.beta * edge - penalty


def role_aggregates_from_history(
    history: Iterable[PlayerMatchRow],
    schema: FeatureSchema,
) -> list[RoleAggregate]:
    """Aggregate normalized history rows per (champion, role).

    The row score defaults to the overall-mode weighted feature score; rows
    without a win label count as losses-excluded (only labeled rows feed the
    win rate, an unlabeled-only group gets 0.5).
    """
    groups: dict[tuple[str, str], list[PlayerMatchRow]] = {}
    for row in history:
        groups.setdefault((row.champion, row.role), []).append(row)
    aggregates = []
    for (champion, role), rows in sorted(groups.items()):
        scores = [row_score(r.normalized, schema) for r in rows]
        mean_score = sum(scores) / len(scores)
        sd = math.sqrt(sum((s - mean_score) ** 2 for s in scores) / len(scores))
        labeled = [r.win for r in rows if r.win is not None]
        win_rate = sum(labeled) / len(labeled) if labeled else 0.5
        aggregates.append(
            RoleAggregate(
                champion=champion,
                role=role,
                n=len(rows),
                mean_row_score=mean_score,
                win_rate=win_rate,
                row_score_sd=sd,
            )
        )
    return aggregates


def role_baselines(aggregates: Iterable[RoleAggregate], default: float = 0.5) -> dict[str, float]:
    """Empirical mean win rate per role, weighted by game counts."""
    wins: dict[str, float] = {}
    games: dict[str, int] = {}
    for agg in aggregates:
        wins[agg.role] = wins.get(agg.role, 0.0) + agg.win_rate * agg.n
        games[agg.role] = games.get(agg.role, 0) + agg.n
    return {role: (wins[role] / games[role]) if games[role] else default for role in games}


def beta_binomial_mean(
    wins: int, games: int, prior: PriorConfig | None = None
) -> float:
    """Posterior mean win rate under a beta prior with binomial outcomes."""
    prior = prior or PriorConfig()
    if wins < 0 or games < 0 or wins > games:
        raise InvalidCounts(f"need 0 <= wins <= games, got wins={wins} games={games}")
    if prior.alpha0 <= 0 or prior.beta0 <= 0:
        raise InvalidCounts("prior parameters must be positive")
    return (prior.alpha0 + wins) / (prior.alpha0 + prior.beta0 + games)
