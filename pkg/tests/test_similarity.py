"""Attention weights, weighted cosine and the rank-scaled fit blend."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from champrec.preprocess import rank_scale
from champrec.schema import FeatureSchema, FeatureSpec
from champrec.similarity import (
    attention_weights,
    feature_sd,
    fit_scores,
    plain_cosine,
    uniform_attention,
    weighted_cosine,
)


class TestAttentionWeights:
    def test_alpha_zero_proportional_to_sigma(self):
        sigma = np.array([1.0, 2.0, 3.0])
        w = attention_weights(sigma, {"a": 5.0}, ("a", "b", "c"), alpha=0.0)
        assert w.values == pytest.approx(sigma / sigma.sum(), abs=1e-12)

    def test_symmetric_inputs_uniform(self):
        sigma = np.array([1.5, 1.5, 1.5, 1.5])
        w = attention_weights(sigma, {}, ("a", "b", "c", "d"), alpha=0.75)
        assert w.values == pytest.approx([0.25] * 4, abs=1e-12)

    def test_hand_arithmetic(self):
        sigma = np.array([1.0, 1.0])
        w = attention_weights(sigma, {"a": 2.0, "b": 0.0}, ("a", "b"), alpha=0.75)
        # q = (1*(1+1.5), 1*1) = (2.5, 1); w = (0.7143, 0.2857)
        assert w.values == pytest.approx([2.5 / 3.5, 1.0 / 3.5], abs=1e-12)
        assert w.values == pytest.approx([0.7143, 0.2857], abs=1e-4)

    def test_degenerate_sigma_uniform_fallback(self):
        w = attention_weights(np.zeros(3), {}, ("a", "b", "c"))
        assert w.values == pytest.approx([1 / 3] * 3, abs=1e-12)

    def test_sum_one_and_positive(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 12))
            sigma = rng.uniform(0.1, 3.0, size=d)
            u_game = {f"f{i}": float(rng.normal()) for i in range(d)}
            w = attention_weights(sigma, u_game, tuple(f"f{i}" for i in range(d)))
            assert w.values.sum() == pytest.approx(1.0, abs=1e-9)
            assert (w.values > 0).all()


class TestWeightedCosine:
    def test_self_similarity(self, rng):
        a = rng.normal(size=6)
        w = rng.uniform(0.05, 1.0, size=6)
        assert weighted_cosine(a, a, w) == pytest.approx(1.0, abs=1e-12)

    def test_weighted_orthogonality(self, rng):
        a = np.array([1.0, 0.0])
        b = np.array([0.0, 1.0])
        for _ in range(10):
            w = rng.uniform(0.01, 1.0, size=2)
            assert weighted_cosine(a, b, w) == 0.0

    def test_scale_invariance(self, rng):
        for _ in range(200):
            d = int(rng.integers(2, 10))
            a, b = rng.normal(size=d), rng.normal(size=d)
            w = rng.uniform(0.05, 1.0, size=d)
            lam, mu = rng.uniform(1e-3, 1e3, size=2)
            assert abs(
                weighted_cosine(lam * a, mu * b, w) - weighted_cosine(a, b, w)
            ) < 1e-12

    def test_zero_vector_neutral(self, rng):
        a = np.zeros(4)
        b = rng.normal(size=4)
        w = rng.uniform(0.1, 1.0, size=4)
        assert weighted_cosine(a, b, w) == 0.0

    def test_uniform_weights_equal_plain_cosine(self, rng):
        for _ in range(20):
            a, b = rng.normal(size=5), rng.normal(size=5)
            uniform = np.full(5, 0.2)
            expected = float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
            assert weighted_cosine(a, b, uniform) == pytest.approx(expected, abs=1e-12)
            assert plain_cosine(a, b) == pytest.approx(expected, abs=1e-12)

    @given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_cauchy_schwarz_bound(self, d, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=d), rng.normal(size=d)
        w = rng.uniform(0.01, 2.0, size=d)
        assert abs(weighted_cosine(a, b, w)) <= 1.0 + 1e-12


SCHEMA_2D = FeatureSchema(entries=(FeatureSpec("x", 0.6), FeatureSpec("y", 0.4)))


class TestFitScores:
    def test_perfect_match_is_top(self):
        vectors = {
            "A": {"x": 1.0, "y": 2.0},
            "B": {"x": -1.0, "y": 0.5},
            "C": {"x": 0.3, "y": -0.7},
        }
        u = {"x": 1.0, "y": 2.0}
        att = uniform_attention(("x", "y"))
        result = fit_scores(list(vectors), vectors, u, u, att, SCHEMA_2D)
        assert result.raw["A"] == pytest.approx(1.0, abs=1e-12)
        assert max(result.raw, key=result.raw.get) == "A"
        assert result.scaled["A"] == 1.0

    def test_identical_candidates_tie(self):
        vectors = {c: {"x": 1.0, "y": 1.0} for c in "ABC"}
        att = uniform_attention(("x", "y"))
        result = fit_scores(list(vectors), vectors, {"x": 1.0}, {"y": 1.0}, att, SCHEMA_2D)
        assert list(result.scaled.values()) == [0.5, 0.5, 0.5]

    def test_three_distinct_rank_values(self, rng):
        vectors = {
            "A": {"x": 1.0, "y": 0.0},
            "B": {"x": 0.7, "y": 0.7},
            "C": {"x": 0.0, "y": 1.0},
        }
        u_game = {"x": 1.0, "y": 0.1}
        u_pool = {"x": 0.9, "y": 0.2}
        att = uniform_attention(("x", "y"))
        result = fit_scores(list(vectors), vectors, u_game, u_pool, att, SCHEMA_2D)
        raws = [result.raw[c] for c in "ABC"]
        assert sorted(result.scaled.values()) == [0.0, 0.5, 1.0]
        assert [result.scaled[c] for c in "ABC"] == pytest.approx(rank_scale(raws), abs=1e-12)

    def test_common_rescale_invariance(self, rng):
        champs = [f"c{i}" for i in range(6)]
        vectors = {
            c: {"x": float(rng.normal()), "y": float(rng.normal())} for c in champs
        }
        u_game = {"x": 0.4, "y": -1.2}
        u_pool = {"x": -0.3, "y": 0.8}
        att = attention_weights(np.array([1.0, 0.7]), u_game, ("x", "y"))
        base = fit_scores(champs, vectors, u_game, u_pool, att, SCHEMA_2D)
        scaled_u_game = {k: 7.3 * v for k, v in u_game.items()}
        scaled_u_pool = {k: 7.3 * v for k, v in u_pool.items()}
        rescaled = fit_scores(champs, vectors, scaled_u_game, scaled_u_pool, att, SCHEMA_2D)
        assert base.scaled == pytest.approx(rescaled.scaled, abs=1e-12)

    def test_blend_weights_honored(self):
        vectors = {"A": {"x": 1.0, "y": 0.0}}
        att = uniform_attention(("x", "y"))
        u_game = {"x": 1.0, "y": 0.0}   # cos 1 with A
        u_pool = {"x": 0.0, "y": 1.0}   # cos 0 with A
        result = fit_scores(["A"], vectors, u_game, u_pool, att, SCHEMA_2D, 0.55, 0.45)
        assert result.raw["A"] == pytest.approx(0.55, abs=1e-12)


def test_feature_sd_population_std(rng):
    vectors = [{"x": float(v)} for v in rng.normal(size=40)]
    sd = feature_sd(vectors, ("x",))
    values = np.array([v["x"] for v in vectors])
    assert sd[0] == pytest.approx(values.std(), abs=1e-12)
