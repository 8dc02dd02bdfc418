"""k-means++ seeding, Lloyd fitting, labeling, support and the guardrail."""

from __future__ import annotations

import numpy as np
import pytest

from champrec.archetype import (
    ARCHETYPE_LABELS,
    ArchetypeModel,
    _repair_empty_clusters,
    archetype_support,
    compute_inertia,
    fit_archetypes,
    guardrail,
    kmeans_fit,
    kmeans_pp_seed,
    label_centroids,
)
from champrec.config import ArchetypeConfig
from champrec.data_model import ChampionVector
from champrec.errors import TooFewPoints
from champrec.schema import archetype_schema

LABEL_SET = {label for label, _ in ARCHETYPE_LABELS}


def best_bipartition_inertia(points: np.ndarray) -> float:
    """Exhaustive optimum over all 2-cluster partitions (n <= 8)."""
    n = len(points)
    best = np.inf
    for mask in range(1, 2 ** (n - 1)):  # last point always in cluster B
        a = [i for i in range(n) if (mask >> i) & 1]
        b = [i for i in range(n) if not (mask >> i) & 1]
        total = 0.0
        for idx in (a, b):
            cluster = points[idx]
            centroid = cluster.mean(axis=0)
            total += float(((cluster - centroid) ** 2).sum())
        best = min(best, total)
    return best


def two_blob_instance(rng: np.random.Generator) -> np.ndarray:
    n = int(rng.integers(4, 9))
    n_a = int(rng.integers(1, n))
    center_a = rng.uniform(-1, 1, size=2)
    direction = rng.normal(size=2)
    direction /= np.linalg.norm(direction)
    center_b = center_a + direction * rng.uniform(4.0, 7.0)
    points = np.vstack(
        [
            center_a + rng.normal(0, 0.5, size=(n_a, 2)),
            center_b + rng.normal(0, 0.5, size=(n - n_a, 2)),
        ]
    )
    return points


class TestSeeding:
    def test_k_equals_n_exhausts_points(self):
        rng = np.random.default_rng(0)
        points = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [5.0, 5.0]])
        centroids = kmeans_pp_seed(points, 4, rng)
        got = {tuple(c) for c in centroids}
        assert got == {tuple(p) for p in points}

    def test_k_one_uniform_pick(self):
        counts = {i: 0 for i in range(3)}
        points = np.array([[0.0], [1.0], [2.0]])
        for seed in range(3000):
            rng = np.random.default_rng(seed)
            centroid = kmeans_pp_seed(points, 1, rng)[0]
            counts[int(centroid[0])] += 1
        for c in counts.values():
            assert abs(c / 3000 - 1 / 3) < 0.05

    def test_second_seed_probability_matches_d2(self):
        # Two far pairs; conditional on any first pick the opposite pair mass
        # is 201/202 by direct squared-distance arithmetic.
        points = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        expected = 201.0 / 202.0
        opposite = 0
        trials = 10_000
        for seed in range(trials):
            rng = np.random.default_rng(seed)
            centroids = kmeans_pp_seed(points, 2, rng)
            first_left = centroids[0][0] < 5.0
            second_left = centroids[1][0] < 5.0
            opposite += first_left != second_left
        assert abs(opposite / trials - expected) < 0.01

    def test_too_few_distinct_points(self):
        rng = np.random.default_rng(0)
        points = np.array([[1.0, 1.0]] * 5)
        with pytest.raises(TooFewPoints):
            kmeans_pp_seed(points, 2, rng)


class TestKmeansFit:
    def test_two_exact_clusters_perfect_split(self, rng):
        blob_a = np.tile([0.0, 0.0], (4, 1)) + rng.normal(0, 0.1, size=(4, 2))
        blob_b = np.tile([10.0, 10.0], (4, 1)) + rng.normal(0, 0.1, size=(4, 2))
        points = np.vstack([blob_a, blob_b])
        centroids, assignment, inertia, _ = kmeans_fit(points, 2, restarts=10, seed=1)
        assert inertia == pytest.approx(best_bipartition_inertia(points), rel=1e-9)
        assert len(set(assignment[:4])) == 1 and len(set(assignment[4:])) == 1
        assert assignment[0] != assignment[4]

    def test_identical_points_k1_zero_inertia(self):
        points = np.tile([2.0, 3.0], (6, 1))
        _, _, inertia, _ = kmeans_fit(points, 1, restarts=3, seed=0)
        assert inertia == 0.0

    def test_more_restarts_never_worse(self):
        rng = np.random.default_rng(5)
        points = rng.normal(size=(12, 3))
        _, _, single, _ = kmeans_fit(points, 3, restarts=1, seed=9)
        _, _, multi, _ = kmeans_fit(points, 3, restarts=5, seed=9)
        assert multi <= single + 1e-12

    def test_reproducible(self, rng):
        points = rng.normal(size=(15, 4))
        first = kmeans_fit(points, 3, restarts=4, seed=7)
        second = kmeans_fit(points, 3, restarts=4, seed=7)
        assert np.array_equal(first[0], second[0])
        assert np.array_equal(first[1], second[1])
        assert first[2] == second[2]

    def test_inertia_matches_recomputation(self, rng):
        points = rng.normal(size=(20, 3))
        centroids, assignment, inertia, _ = kmeans_fit(points, 4, restarts=5, seed=3)
        assert inertia == pytest.approx(
            compute_inertia(points, centroids, assignment), abs=1e-6
        )

    def test_lloyd_monotone_nonincreasing(self, rng):
        for seed in range(10):
            points = np.random.default_rng(seed).normal(size=(25, 3))
            _, _, _, histories = kmeans_fit(points, 4, restarts=5, seed=seed)
            for history in histories:
                for earlier, later in zip(history, history[1:]):
                    assert later <= earlier + 1e-9

    def test_bipartition_oracle_sample(self):
        hits = 0
        for seed in range(30):
            rng = np.random.default_rng(1000 + seed)
            points = two_blob_instance(rng)
            _, _, inertia, _ = kmeans_fit(points, 2, restarts=10, seed=seed)
            if inertia <= best_bipartition_inertia(points) * (1 + 1e-9) + 1e-12:
                hits += 1
        assert hits >= 29

    def test_repair_assigns_empty_cluster_to_farthest(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [10.0, 0.0]])
        centroids = np.array([[0.5, 0.0], [99.0, 99.0]])  # second cluster empty
        assignment = np.array([0, 0, 0])
        repaired = _repair_empty_clusters(points, centroids.copy(), assignment)
        assert np.array_equal(repaired[1], points[2])


class TestLabeling:
    def _centroid(self, names, **values):
        return np.array([values.get(n, 0.0) for n in names])

    def test_tank_label(self):
        names = archetype_schema().feature_names
        c = self._centroid(names, totalDamageTaken=2.0, damageSelfMitigated=2.0)
        labels = label_centroids(np.array([c]), names)
        assert labels[0] == "frontline tank"

    def test_support_label(self):
        names = archetype_schema().feature_names
        c = self._centroid(names, visionScorePerMinute=1.5, totalTimeCCDealt=1.5)
        labels = label_centroids(np.array([c]), names)
        assert labels[0] == "utility support"

    def test_all_zero_fallback(self):
        names = archetype_schema().feature_names
        labels = label_centroids(np.zeros((1, len(names))), names)
        assert labels[0] == ARCHETYPE_LABELS[-1][0] == "skirmish bruiser"

    def test_tie_breaks_by_priority(self):
        names = archetype_schema().feature_names
        # tankiness and utility tied at the max -> frontline tank wins
        c = self._centroid(
            names,
            totalDamageTaken=2.0,
            damageSelfMitigated=2.0,
            visionScorePerMinute=2.0,
            totalTimeCCDealt=2.0,
        )
        labels = label_centroids(np.array([c]), names)
        assert labels[0] == "frontline tank"

    def test_labels_always_from_fixed_set(self, rng):
        names = archetype_schema().feature_names
        centroids = rng.normal(size=(10, len(names)))
        labels = label_centroids(centroids, names)
        assert set(labels.values()) <= LABEL_SET


class TestSupportAndGuardrail:
    def _model(self):
        return ArchetypeModel(
            k=2,
            assignments={"A": 0, "B": 0, "C": 1},
            centroids=np.zeros((2, 2)),
            inertia=0.0,
            labels={0: "frontline tank", 1: "utility support"},
            seed=0,
            restarts=1,
            feature_names=("x", "y"),
        )

    def test_single_cluster_player_tops(self):
        model = self._model()
        support = archetype_support(model, {"A": 0.6, "B": 0.4}, {"A": 1.0, "B": 0.5})
        assert support[0] == 1.0
        assert support[1] == 0.0

    def test_unplayed_cluster_zero_raw(self):
        model = self._model()
        support = archetype_support(model, {"C": 1.0}, {"C": 0.9})
        assert support[1] == 1.0 and support[0] == 0.0

    def test_equal_support_ties(self):
        model = self._model()
        support = archetype_support(model, {"A": 0.5, "C": 0.5}, {"A": 0.3, "C": 0.3})
        assert support == {0: 0.5, 1: 0.5}

    def test_guardrail_values(self):
        assert guardrail(1.0, 1.0, 0.3) == pytest.approx(1.0, abs=1e-12)
        assert guardrail(0.0, 0.0, 0.0) == 0.0
        assert guardrail(0.5, 0.2, 0.8) == pytest.approx(0.635, abs=1e-12)


class TestFitArchetypes:
    def test_fits_default_population(self, small_bundle):
        from champrec.preprocess import compute_stats, normalize_row
        from dataclasses import replace

        schema = small_bundle.schema
        stats = compute_stats([v.raw for v in small_bundle.population], schema)
        population = [
            replace(v, normalized=normalize_row(v.raw, schema, stats))
            for v in small_bundle.population
        ]
        model = fit_archetypes(population, schema, ArchetypeConfig(), seed=0)
        assert set(model.assignments) == {v.champion for v in population}
        assert set(model.labels.values()) <= LABEL_SET
        assert model.k == 6
        points = np.array(
            [[v.normalized.get(n, 0.0) for n in schema.feature_names] for v in population]
        )
        assignment = np.array([model.assignments[v.champion] for v in population])
        assert model.inertia == pytest.approx(
            compute_inertia(points, model.centroids, assignment), abs=1e-6
        )

    def test_caps_k_for_tiny_population(self):
        schema = archetype_schema()
        population = [
            ChampionVector(champion=c, raw={}, normalized={"damagePerMinute": float(i)})
            for i, c in enumerate(["A", "B", "C"])
        ]
        model = fit_archetypes(population, schema, ArchetypeConfig(k=6), seed=0)
        assert model.k == 3
