"""Final scoring: confidence blending, the fallback utility, base score,
support and archetype multipliers, and assembly of the decomposed
recommendation records.

``build_engine_state`` computes everything that depends only on the
population table (normalization statistics, strength, the archetype model)
so the evaluation harness and the service can reuse it across requests and
prefix steps. ``recommend`` runs the whole pipeline for one player.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .archetype import ArchetypeModel, archetype_support, fit_archetypes, guardrail
from .config import AblationFlags, EngineConfig, ScoreWeights
from .data_model import DataBundle, MasteryRecord, PlayerMatchRow
from .errors import InvalidParameter
from .mastery import MasterySignals, mastery_signals
from .player_profile import PlayerVectors, build_player_vectors
from .preprocess import NormalizationStats, compute_stats, normalize_row
from .schema import FeatureSchema, recommendation_schema
from .similarity import (
    FitResult,
    attention_weights,
    feature_sd,
    fit_scores,
    uniform_attention,
)
from .strength import StrengthScore, strength_scores

CONFIDENCE_PSEUDOCOUNT = 3.0

FALLBACK_STRENGTH_WEIGHT = 0.55
FALLBACK_FIT_WEIGHT = 0.45

SUPPORT_FIT_WEIGHT = 0.60
SUPPORT_FAMILIARITY_WEIGHT = 0.40

COMFORT_TYPE = "comfort_or_known"
DISCOVERY_TYPE = "discovery"

# Appendix-style output field order for serialized recommendations.
RECOMMENDATION_FIELDS = (
    "championName",
    "recommendation_type",
    "archetype_name",
    "final_score",
    "win_score",
    "fit_score",
    "mastery_score",
    "archetype_guardrail",
    "population_strength_score",
    "direct_mastery_score",
    "indirect_mastery_score",
    "player_games",
    "similarity_raw",
)


def confidence(games: int) -> float:
    """Player-confidence weight in [0, 1); grows with observed games."""
    if games < 0:
        raise InvalidParameter(f"game count must be nonnegative, got {games}")
    return games / (games + CONFIDENCE_PSEUDOCOUNT)


def fallback_utility(strength: float, fit: float) -> float:
    return FALLBACK_STRENGTH_WEIGHT * strength + FALLBACK_FIT_WEIGHT * fit


def performance_proxy(gamma: float, perf: float, strength: float, fit: float) -> float:
    """Blend of observed performance and the low-data fallback utility."""
    return gamma * perf + (1.0 - gamma) * fallback_utility(strength, fit)


def base_score(win: float, fit: float, mastery: float, weights: ScoreWeights) -> float:
    weights.validate()
    return weights.lambda_w * win + weights.lambda_f * fit + weights.lambda_m * mastery


def support_score(fit: float, direct: float, indirect: float) -> float:
    return SUPPORT_FIT_WEIGHT * fit + SUPPORT_FAMILIARITY_WEIGHT * max(direct, indirect)


def support_multiplier(support: float) -> float:
    return 0.82 + 0.18 * support


def archetype_multiplier(guard: float, games: int) -> float:
    """Protects known champions; unplayed ones lean harder on the guardrail."""
    if games > 0:
        return 0.90 + 0.10 * guard
    return 0.72 + 0.28 * guard


def final_score(base: float, support_mult: float, archetype_mult: float) -> float:
    return base * support_mult * archetype_mult


@dataclass(frozen=True)
class Recommendation:
    championName: str
    recommendation_type: str
    archetype_name: str
    final_score: float
    win_score: float
    fit_score: float
    mastery_score: float
    archetype_guardrail: float
    population_strength_score: float
    direct_mastery_score: float
    indirect_mastery_score: float
    player_games: int
    similarity_raw: float

    def to_dict(self, decimals: int = 6) -> dict[str, object]:
        out: dict[str, object] = {}
        for name in RECOMMENDATION_FIELDS:
            value = getattr(self, name)
            out[name] = round(value, decimals) if isinstance(value, float) else value
        return out


@dataclass(frozen=True)
class EngineState:
    """Population-side immutables shared across requests and prefix steps."""

    config: EngineConfig
    schema: FeatureSchema
    arch_schema: FeatureSchema
    stats: NormalizationStats
    champions: tuple[str, ...]
    normalized_vectors: dict[str, dict[str, float]]
    strength: dict[str, StrengthScore]
    sigma: np.ndarray
    archetype: ArchetypeModel


@dataclass(frozen=True)
class PlayerSignals:
    """Player-side quantities for one (history, mastery) snapshot."""

    vectors: PlayerVectors
    fit: FitResult
    signals: dict[str, MasterySignals]
    support: dict[int, float]
    guardrails: dict[str, float]
    history_games: int
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class RecommendResult:
    recommendations: tuple[Recommendation, ...]
    metadata: dict[str, object]

    def to_dict(self, decimals: int = 6) -> dict[str, object]:
        return {
            "recommendations": [r.to_dict(decimals) for r in self.recommendations],
            "metadata": self.metadata,
        }


def build_engine_state(bundle: DataBundle, config: EngineConfig) -> EngineState:
    """Normalize the population, score its strength and fit the archetypes."""
    arch_schema = bundle.schema
    rec_schema = _scoring_schema(arch_schema)
    robust = not config.ablation.ordinary_z
    stats = compute_stats([vec.raw for vec in bundle.population], arch_schema)
    normalized_population = tuple(
        replace(vec, normalized=normalize_row(vec.raw, arch_schema, stats, robust=robust))
        for vec in bundle.population
    )
    champions = tuple(vec.champion for vec in normalized_population)
    normalized_vectors = {vec.champion: vec.normalized for vec in normalized_population}
    strength = {
        score.champion: score
        for score in strength_scores(champions, normalized_vectors, rec_schema)
    }
    sigma = feature_sd(
        [normalized_vectors[c] for c in champions], rec_schema.feature_names
    )
    model = fit_archetypes(
        normalized_population, arch_schema, config.archetype, config.archetype_seed
    )
    return EngineState(
        config=config,
        schema=rec_schema,
        arch_schema=arch_schema,
        stats=stats,
        champions=champions,
        normalized_vectors=normalized_vectors,
        strength=strength,
        sigma=sigma,
        archetype=model,
    )


def _scoring_schema(schema: FeatureSchema) -> FeatureSchema:
    """Positive-weight features of the bundle schema drive scoring and fit."""
    scoring_entries = tuple(spec for spec in schema.entries if spec.strength_weight > 0)
    if not scoring_entries:
        return recommendation_schema()
    return FeatureSchema(entries=scoring_entries)


def normalize_history(
    history: Sequence[PlayerMatchRow], state: EngineState
) -> list[PlayerMatchRow]:
    robust = not state.config.ablation.ordinary_z
    return [
        replace(
            row,
            normalized=normalize_row(row.features, state.arch_schema, state.stats, robust=robust),
        )
        for row in history
    ]


def compute_player_signals(
    state: EngineState,
    history: Sequence[PlayerMatchRow],
    mastery: Sequence[MasteryRecord],
) -> PlayerSignals:
    """Everything player-specific: vectors, fit, mastery, support, guardrail."""
    config = state.config
    warnings: list[str] = []
    rows = normalize_history(history, state)
    mastery_map = {record.champion: record for record in mastery}

    vectors = build_player_vectors(
        rows,
        mastery_map,
        rho=config.player.rho,
        uniform=config.ablation.uniform_recency,
        weight_floor=config.mastery.weight_floor,
    )
    if not rows:
        warnings.append("history is empty; fit falls back to neutral similarity")
    missing = sorted({row.champion for row in rows} - set(state.champions))
    if missing:
        warnings.append(
            f"{len(missing)} history champion(s) missing from the population table"
        )
    if rows and all(row.win is None for row in rows):
        warnings.append("history carries no win labels; performance edge is neutral")

    if config.ablation.unweighted_cosine:
        attention = uniform_attention(state.schema.feature_names)
    else:
        attention = attention_weights(
            state.sigma, vectors.u_game, state.schema.feature_names, alpha=config.fit.alpha
        )
        if float(state.sigma.sum()) <= 0.0:
            warnings.append("degenerate population dispersion; attention fell back to uniform")

    fit = fit_scores(
        state.champions,
        state.normalized_vectors,
        vectors.u_game,
        vectors.u_pool,
        attention,
        state.schema,
        game_weight=config.fit.game_weight,
        pool_weight=config.fit.pool_weight,
    )

    signals = mastery_signals(
        state.champions,
        state.normalized_vectors,
        rows,
        mastery_map,
        vectors.recency_mass,
        state.schema,
        topk=config.mastery.topk,
        weight_floor=config.mastery.weight_floor,
    )

    direct_scaled = {c: signals[c].direct for c in state.champions}
    support = archetype_support(state.archetype, vectors.recency_mass, direct_scaled)
    guardrails = {}
    for champion in state.champions:
        sig = signals[champion]
        direct, indirect = _familiarity_pair(sig, config.ablation)
        cluster = state.archetype.assignments[champion]
        guardrails[champion] = guardrail(support[cluster], direct, indirect)

    return PlayerSignals(
        vectors=vectors,
        fit=fit,
        signals=signals,
        support=support,
        guardrails=guardrails,
        history_games=len(rows),
        warnings=tuple(warnings),
    )


def _familiarity_pair(sig: MasterySignals, ablation: AblationFlags) -> tuple[float, float]:
    """Direct/indirect pair feeding the max() terms, with drops applied."""
    direct = 0.0 if ablation.drop_direct_mastery else sig.direct
    indirect = 0.0 if ablation.drop_indirect_familiarity else sig.indirect
    return direct, indirect


def _effective_weights(weights: ScoreWeights, ablation: AblationFlags) -> ScoreWeights:
    if not ablation.drop_fit:
        return weights
    return ScoreWeights(weights.lambda_w, 0.0, weights.lambda_m).normalized()


def _combined_mastery(sig: MasterySignals, ablation: AblationFlags) -> float:
    if ablation.drop_direct_mastery and ablation.drop_indirect_familiarity:
        return 0.0
    if ablation.drop_direct_mastery:
        return sig.indirect
    if ablation.drop_indirect_familiarity:
        return sig.direct
    return sig.combined


def score_candidates(state: EngineState, player: PlayerSignals) -> list[Recommendation]:
    """Score every candidate and return them ranked (score desc, name asc)."""
    config = state.config
    ablation = config.ablation
    weights = _effective_weights(config.weights, ablation)
    out: list[Recommendation] = []
    for champion in state.champions:
        sig = player.signals[champion]
        strength = state.strength[champion].scaled
        fit = player.fit.scaled[champion]
        games = sig.games
        gamma = confidence(games)

        if ablation.drop_strength and ablation.drop_fit:
            utility = 0.0
        elif ablation.drop_strength:
            utility = fit
        elif ablation.drop_fit:
            utility = strength
        else:
            utility = fallback_utility(strength, fit)
        win = gamma * sig.perf + (1.0 - gamma) * utility

        mastery_combined = _combined_mastery(sig, ablation)
        base = base_score(win, fit, mastery_combined, weights)

        direct, indirect = _familiarity_pair(sig, ablation)
        familiarity = max(direct, indirect)
        if ablation.drop_fit:
            support = familiarity
        else:
            support = support_score(fit, direct, indirect)
        h = support_multiplier(support)

        guard = player.guardrails[champion]
        a = 1.0 if ablation.drop_guardrail else archetype_multiplier(guard, games)

        out.append(
            Recommendation(
                championName=champion,
                recommendation_type=COMFORT_TYPE if games > 0 else DISCOVERY_TYPE,
                archetype_name=state.archetype.label_of(champion),
                final_score=final_score(base, h, a),
                win_score=win,
                fit_score=fit,
                mastery_score=mastery_combined,
                archetype_guardrail=guard,
                population_strength_score=strength,
                direct_mastery_score=sig.direct,
                indirect_mastery_score=sig.indirect,
                player_games=games,
                similarity_raw=player.fit.raw[champion],
            )
        )
    out.sort(key=lambda rec: (-rec.final_score, rec.championName))
    return out


def _role_mix(history: Sequence[PlayerMatchRow]) -> dict[str, int]:
    mix: dict[str, int] = {}
    for row in history:
        mix[row.role] = mix.get(row.role, 0) + 1
    return dict(sorted(mix.items(), key=lambda item: (-item[1], item[0])))


def _top_archetypes(state: EngineState, player: PlayerSignals, limit: int = 3) -> list[str]:
    ranked = sorted(player.support.items(), key=lambda item: (-item[1], item[0]))
    return [state.archetype.labels[cluster] for cluster, _ in ranked[:limit]]


def build_metadata(
    state: EngineState, player: PlayerSignals, history: Sequence[PlayerMatchRow]
) -> dict[str, object]:
    config = state.config
    return {
        "games": player.history_games,
        "role_mix": _role_mix(history),
        "top_archetypes": _top_archetypes(state, player),
        "weights_used": {
            "lambda_W": config.weights.lambda_w,
            "lambda_F": config.weights.lambda_f,
            "lambda_M": config.weights.lambda_m,
            "alpha": config.fit.alpha,
            "rho": config.player.rho,
        },
        "warnings": list(player.warnings),
    }


def recommend_with_state(
    state: EngineState,
    history: Sequence[PlayerMatchRow],
    mastery: Sequence[MasteryRecord],
    top_n: int = 30,
) -> RecommendResult:
    """Score one player against a prebuilt population state (service path)."""
    if top_n < 1:
        raise InvalidParameter(f"top_n must be at least 1, got {top_n}")
    state.config.weights.validate()
    player = compute_player_signals(state, history, mastery)
    ranked = score_candidates(state, player)
    return RecommendResult(
        recommendations=tuple(ranked[:top_n]),
        metadata=build_metadata(state, player, history),
    )


def recommend(
    bundle: DataBundle, config: EngineConfig | None = None, top_n: int = 30
) -> RecommendResult:
    """Full pipeline for one player; deterministic for fixed data and seed."""
    config = config or EngineConfig()
    state = build_engine_state(bundle, config)
    return recommend_with_state(state, bundle.history, bundle.mastery, top_n=top_n)
