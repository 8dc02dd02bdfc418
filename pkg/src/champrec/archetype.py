"""Archetype clustering: k-means with k-means++ seeding and restarts over the
extended champion feature space, deterministic centroid labeling, per-cluster
player support and the guardrail score.

Clustering is population-level and player-independent, so a fitted model can
be shared across requests; player support is computed per request.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .config import ArchetypeConfig
from .data_model import ChampionVector
from .errors import TooFewPoints
from .preprocess import rank_scale
from .schema import FeatureSchema

DEFAULT_MAX_ITERS = 100

# Label priority order; first entry wins ties, the last one doubles as the
# fallback for centroids with no distinguishing dimension.
ARCHETYPE_LABELS: tuple[tuple[str, str], ...] = (
    ("frontline tank", "tankiness"),
    ("utility support", "utility"),
    ("artillery control", "damage"),
    ("scaling carry", "farm"),
    ("siege splitpush", "siege"),
    ("skirmish bruiser", "teamfight"),
)

_STYLE_DIMENSIONS: dict[str, tuple[str, ...]] = {
    "damage": ("damagePerMinute",),
    "farm": ("cs_per_min", "laneMinionsFirst10Minutes"),
    "tankiness": ("totalDamageTaken", "damageSelfMitigated"),
    "utility": ("visionScorePerMinute", "totalTimeCCDealt"),
    "siege": ("damageDealtToBuildings",),
    "teamfight": ("killParticipation",),
}


@dataclass(frozen=True)
class ArchetypeModel:
    k: int
    assignments: dict[str, int]
    centroids: np.ndarray
    inertia: float
    labels: dict[int, str]
    seed: int
    restarts: int
    feature_names: tuple[str, ...]
    support: dict[int, float] = field(default_factory=dict)
    inertia_history: tuple[tuple[float, ...], ...] = ()

    def label_of(self, champion: str) -> str:
        return self.labels[self.assignments[champion]]

    def with_support(self, support: Mapping[int, float]) -> "ArchetypeModel":
        return replace(self, support=dict(support))


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, points x centroids."""
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kmeans_pp_seed(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: uniform first pick, then proportional to the squared
    distance to the nearest chosen centroid."""
    distinct = np.unique(points, axis=0)
    if k > len(distinct):
        raise TooFewPoints(f"k={k} exceeds {len(distinct)} distinct points")
    n = len(points)
    centroids = np.empty((k, points.shape[1]), dtype=float)
    centroids[0] = points[rng.integers(n)]
    for i in range(1, k):
        d2 = _squared_distances(points, centroids[:i]).min(axis=1)
        total = d2.sum()
        probs = d2 / total
        centroids[i] = points[rng.choice(n, p=probs)]
    return centroids


def compute_inertia(points: np.ndarray, centroids: np.ndarray, assignment: np.ndarray) -> float:
    diff = points - centroids[assignment]
    return float(np.einsum("ij,ij->", diff, diff))


def _lloyd(
    points: np.ndarray, centroids: np.ndarray, max_iters: int
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """Lloyd iterations until the assignment stops changing.

    Inertia is recorded after each assignment step; by construction the
    recorded sequence never increases. Empty clusters are repaired by seeding
    them with the point farthest from its current centroid.
    """
    k = len(centroids)
    assignment: np.ndarray | None = None
    history: list[float] = []
    for _ in range(max_iters):
        d2 = _squared_distances(points, centroids)
        new_assignment = d2.argmin(axis=1)
        history.append(compute_inertia(points, centroids, new_assignment))
        if assignment is not None and np.array_equal(new_assignment, assignment):
            break
        assignment = new_assignment
        for cluster in range(k):
            members = points[assignment == cluster]
            if len(members):
                centroids[cluster] = members.mean(axis=0)
        centroids = _repair_empty_clusters(points, centroids, assignment)
    else:
        # Iteration cap reached: re-anchor the assignment to the final
        # centroids so the reported inertia matches the returned state.
        assignment = _squared_distances(points, centroids).argmin(axis=1)
        history.append(compute_inertia(points, centroids, assignment))
    return centroids, assignment, history[-1], history


def _repair_empty_clusters(
    points: np.ndarray, centroids: np.ndarray, assignment: np.ndarray
) -> np.ndarray:
    """Move each empty cluster's centroid onto the point currently farthest
    from its own centroid; never increases inertia on the next assignment."""
    k = len(centroids)
    empty = [c for c in range(k) if not np.any(assignment == c)]
    if not empty:
        return centroids
    residuals = np.einsum(
        "ij,ij->i", points - centroids[assignment], points - centroids[assignment]
    )
    for cluster in empty:
        farthest = int(residuals.argmax())
        centroids[cluster] = points[farthest]
        residuals[farthest] = 0.0
    return centroids


def kmeans_fit(
    points: np.ndarray,
    k: int,
    restarts: int = 10,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> tuple[np.ndarray, np.ndarray, float, list[list[float]]]:
    """Best-of-restarts k-means; deterministic for a fixed seed."""
    distinct = np.unique(points, axis=0)
    if k > len(distinct):
        raise TooFewPoints(f"k={k} exceeds {len(distinct)} distinct points")
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(restarts)]
    best: tuple[np.ndarray, np.ndarray, float] | None = None
    histories: list[list[float]] = []
    for rng in streams:
        centroids = kmeans_pp_seed(points, k, rng)
        centroids, assignment, inertia, history = _lloyd(points, centroids.copy(), max_iters)
        histories.append(history)
        if best is None or inertia < best[2]:
            best = (centroids, assignment, inertia)
    assert best is not None
    return best[0], best[1], best[2], histories


def label_centroids(
    centroids: np.ndarray, feature_names: Sequence[str]
) -> dict[int, str]:
    """Deterministic style labels from centroid coordinates.

    The label whose defining dimension is maximal wins; ties go to the
    higher-priority label. A centroid with all dimensions equal (no signal at
    all) takes the lowest-priority fallback label.
    """
    index = {name: i for i, name in enumerate(feature_names)}
    labels: dict[int, str] = {}
    for cluster, centroid in enumerate(centroids):
        dims: dict[str, float] = {}
        for dim_name, features in _STYLE_DIMENSIONS.items():
            values = [centroid[index[f]] for f in features if f in index]
            dims[dim_name] = sum(values) / len(values) if values else 0.0
        ordered = [dims[dim] for _, dim in ARCHETYPE_LABELS]
        if max(ordered) == min(ordered):
            labels[cluster] = ARCHETYPE_LABELS[-1][0]
            continue
        peak = max(ordered)
        for (label, dim), value in zip(ARCHETYPE_LABELS, ordered):
            if value == peak:
                labels[cluster] = label
                break
    return labels


def fit_archetypes(
    population: Sequence[ChampionVector],
    schema: FeatureSchema,
    config: ArchetypeConfig,
    seed: int,
) -> ArchetypeModel:
    """Cluster the normalized population and label the centroids.

    k is capped at the number of distinct champion vectors so small
    populations still fit.
    """
    names = schema.feature_names
    matrix = np.array(
        [[vec.normalized.get(n, 0.0) for n in names] for vec in population], dtype=float
    )
    k = min(config.k, len(np.unique(matrix, axis=0)))
    centroids, assignment, inertia, histories = kmeans_fit(
        matrix, k, restarts=config.restarts, seed=seed, max_iters=config.max_iters
    )
    return ArchetypeModel(
        k=k,
        assignments={vec.champion: int(a) for vec, a in zip(population, assignment)},
        centroids=centroids,
        inertia=inertia,
        labels=label_centroids(centroids, names),
        seed=seed,
        restarts=config.restarts,
        feature_names=tuple(names),
        inertia_history=tuple(tuple(h) for h in histories),
    )


def archetype_support(
    model: ArchetypeModel,
    recency_mass: Mapping[str, float],
    direct_mastery: Mapping[str, float],
) -> dict[int, float]:
    """Rank-scaled per-cluster support from the player's recency mass and
    rank-scaled direct mastery of the champions in each cluster."""
    raw = {cluster: 0.0 for cluster in range(model.k)}
    for champion, mass in recency_mass.items():
        cluster = model.assignments.get(champion)
        if cluster is None or mass <= 0.0:
            continue
        raw[cluster] += 0.5 * mass + 0.5 * direct_mastery.get(champion, 0.0)
    clusters = sorted(raw)
    scaled = rank_scale([raw[c] for c in clusters])
    return {c: s for c, s in zip(clusters, scaled)}


def guardrail(support: float, direct: float, indirect: float) -> float:
    """Archetype guardrail: cluster support or familiarity can protect a pick."""
    return 0.55 * support + 0.45 * max(direct, indirect)
