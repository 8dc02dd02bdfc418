"""Style fit: salience attention weights, weighted cosine similarity and the
rank-scaled fit score over the candidate set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidParameter
from .preprocess import rank_scale
from .schema import FeatureSchema

DEFAULT_ALPHA = 0.75
DEFAULT_GAME_WEIGHT = 0.55
DEFAULT_POOL_WEIGHT = 0.45

ZERO_NORM_EPS = 1e-12


@dataclass(frozen=True)
class AttentionWeights:
    """Normalized per-feature weights for the weighted cosine."""

    feature_names: tuple[str, ...]
    values: np.ndarray
    alpha: float
    sigma: np.ndarray

    def as_map(self) -> dict[str, float]:
        return {name: float(w) for name, w in zip(self.feature_names, self.values)}


def feature_sd(
    normalized_vectors: Sequence[Mapping[str, float]], feature_names: Sequence[str]
) -> np.ndarray:
    """Population standard deviation of each normalized champion feature."""
    matrix = np.array(
        [[vec.get(name, 0.0) for name in feature_names] for vec in normalized_vectors],
        dtype=float,
    )
    if matrix.size == 0:
        return np.zeros(len(feature_names))
    return matrix.std(axis=0)


def attention_weights(
    sigma: np.ndarray,
    u_game: Mapping[str, float],
    feature_names: Sequence[str],
    alpha: float = DEFAULT_ALPHA,
) -> AttentionWeights:
    """Per-feature salience weights.

    Dispersion sets the base weight; the player's own deviation from average
    amplifies it by a factor of (1 + alpha * |u_game_j|). A fully degenerate
    population (all sigma zero) falls back to uniform weights so the pipeline
    stays total.
    """
    if alpha < 0:
        raise InvalidParameter(f"salience gain must be nonnegative, got {alpha}")
    game = np.array([u_game.get(name, 0.0) for name in feature_names], dtype=float)
    q = sigma * (1.0 + alpha * np.abs(game))
    total = q.sum()
    if total <= 0:
        values = np.full(len(feature_names), 1.0 / len(feature_names))
    else:
        values = q / total
    return AttentionWeights(
        feature_names=tuple(feature_names), values=values, alpha=alpha, sigma=sigma
    )


def uniform_attention(feature_names: Sequence[str]) -> AttentionWeights:
    """Uniform weights; with these the weighted cosine equals the plain cosine."""
    d = len(feature_names)
    return AttentionWeights(
        feature_names=tuple(feature_names),
        values=np.full(d, 1.0 / d),
        alpha=0.0,
        sigma=np.zeros(d),
    )


def weighted_cosine(a: np.ndarray, b: np.ndarray, weights: np.ndarray) -> float:
    """Weighted cosine in [-1, 1]; a near-zero weighted norm on either side
    yields the neutral value 0 instead of an error."""
    num = float(np.sum(weights * a * b))
    norm_a = float(np.sqrt(np.sum(weights * a * a)))
    norm_b = float(np.sqrt(np.sum(weights * b * b)))
    if norm_a < ZERO_NORM_EPS or norm_b < ZERO_NORM_EPS:
        return 0.0
    return num / (norm_a * norm_b)


def plain_cosine(a: np.ndarray, b: np.ndarray) -> float:
    return weighted_cosine(a, b, np.ones(len(a)))


def vector_from_map(values: Mapping[str, float], feature_names: Sequence[str]) -> np.ndarray:
    return np.array([values.get(name, 0.0) for name in feature_names], dtype=float)


@dataclass(frozen=True)
class FitResult:
    raw: dict[str, float]
    scaled: dict[str, float]
    attention: AttentionWeights


def fit_scores(
    champions: Sequence[str],
    normalized_vectors: Mapping[str, Mapping[str, float]],
    u_game: Mapping[str, float],
    u_pool: Mapping[str, float],
    attention: AttentionWeights,
    schema: FeatureSchema,
    game_weight: float = DEFAULT_GAME_WEIGHT,
    pool_weight: float = DEFAULT_POOL_WEIGHT,
) -> FitResult:
    """Blend of candidate similarity to both player vectors, rank-scaled."""
    names = schema.feature_names
    game_vec = vector_from_map(u_game, names)
    pool_vec = vector_from_map(u_pool, names)
    w = attention.values
    raw: dict[str, float] = {}
    for champion in champions:
        x = vector_from_map(normalized_vectors[champion], names)
        raw[champion] = game_weight * weighted_cosine(game_vec, x, w) + pool_weight * (
            weighted_cosine(pool_vec, x, w)
        )
    scaled_values = rank_scale([raw[c] for c in champions])
    scaled = {c: s for c, s in zip(champions, scaled_values)}
    return FitResult(raw=raw, scaled=scaled, attention=attention)
