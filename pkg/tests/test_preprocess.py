"""Robust normalization primitives: log1p, median/MAD scores, rank scaling."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from champrec.errors import EmptyInput, NegativeInput
from champrec.preprocess import (
    CLIP_LIMIT,
    MAD_CONSISTENCY,
    FeatureStats,
    NormalizationStats,
    compute_stats,
    log1p_transform,
    normalize_row,
    rank_scale,
    robust_z,
    sign_adjust,
)
from champrec.schema import Direction, FeatureSchema, FeatureSpec, recommendation_schema


def rank_scale_oracle(values):
    """Brute-force average-rank percentile via pairwise comparison counts."""
    n = len(values)
    if n == 1 or all(v == values[0] for v in values):
        return [0.5] * n
    out = []
    for v in values:
        less = sum(1 for u in values if u < v)
        equal = sum(1 for u in values if u == v)
        avg_rank = less + (equal + 1) / 2
        out.append((avg_rank - 1) / (n - 1))
    return out


class TestLog1p:
    def test_zero(self):
        assert log1p_transform(0.0) == 0.0

    def test_ln_identity(self):
        assert log1p_transform(math.e - 1) == pytest.approx(1.0, abs=1e-12)

    def test_ten(self):
        assert log1p_transform(10.0) == pytest.approx(math.log(11.0), abs=1e-9)
        assert log1p_transform(10.0) == pytest.approx(2.3979, abs=1e-4)

    def test_negative_rejected(self):
        with pytest.raises(NegativeInput):
            log1p_transform(-0.5)

    def test_monotone(self):
        xs = np.linspace(0, 50, 100)
        ys = [log1p_transform(x) for x in xs]
        assert all(b > a for a, b in zip(ys, ys[1:]))


class TestRobustZ:
    def test_constant_vector_all_zero(self):
        assert robust_z([5.0, 5.0, 5.0, 5.0]) == [0.0, 0.0, 0.0, 0.0]

    def test_golden_vector(self):
        # m = 3, MAD = median(|v-3|) = median(2,1,0,1,97) = 1 by hand.
        got = robust_z([1.0, 2.0, 3.0, 4.0, 100.0])
        expected = [-2 * MAD_CONSISTENCY, -MAD_CONSISTENCY, 0.0, MAD_CONSISTENCY, 3.0]
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx([-1.3490, -0.6745, 0.0, 0.6745, 3.0], abs=1e-3)

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            robust_z([])

    def test_absent_maps_to_zero(self):
        got = robust_z([1.0, None, 3.0, 5.0])
        assert got[1] == 0.0

    def test_all_absent(self):
        assert robust_z([None, None]) == [0.0, 0.0]

    def test_clip_bound(self, rng):
        for _ in range(50):
            values = list(rng.normal(0, 100, size=rng.integers(2, 30)))
            assert all(abs(z) <= CLIP_LIMIT for z in robust_z(values))

    @given(
        st.lists(st.floats(min_value=-50, max_value=50), min_size=3, max_size=20),
        st.floats(min_value=0.1, max_value=5.0),
        st.floats(min_value=-10, max_value=10),
    )
    @settings(max_examples=200, deadline=None)
    def test_affine_equivariance_preclip(self, values, a, b):
        base = robust_z(values)
        if any(abs(z) >= CLIP_LIMIT for z in base):
            return  # property only holds where clipping is inactive
        shifted = robust_z([a * v + b for v in values])
        assert shifted == pytest.approx(base, abs=1e-9)

    def test_negative_scale_flips_sign(self):
        values = [1.0, 2.0, 3.0, 4.0]
        base = robust_z(values)
        flipped = robust_z([-v for v in values])
        assert flipped == pytest.approx([-z for z in base], abs=1e-12)


class TestSignAdjust:
    def test_negative_direction_flips(self):
        assert sign_adjust(1.2, Direction.NEGATIVE) == -1.2

    def test_positive_identity(self):
        assert sign_adjust(1.2, Direction.POSITIVE) == 1.2

    def test_zero(self):
        assert sign_adjust(0.0, Direction.NEGATIVE) == 0.0


class TestRankScale:
    def test_all_tied_neutral(self):
        assert rank_scale([7.0, 7.0, 7.0]) == [0.5, 0.5, 0.5]

    def test_single_element(self):
        assert rank_scale([10.0]) == [0.5]

    def test_three_distinct(self):
        assert rank_scale([3.0, 1.0, 2.0]) == [1.0, 0.0, 0.5]

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            rank_scale([])

    def test_matches_oracle_random(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 15))
            values = [float(v) for v in rng.integers(0, 6, size=n)]  # force ties
            assert rank_scale(values) == pytest.approx(rank_scale_oracle(values), abs=1e-12)

    @given(st.lists(st.floats(min_value=-100, max_value=100), min_size=1, max_size=25))
    @settings(max_examples=200, deadline=None)
    def test_bounds_and_monotonicity(self, values):
        out = rank_scale(values)
        assert all(0.0 <= v <= 1.0 for v in out)
        for i in range(len(values)):
            for j in range(len(values)):
                if values[i] < values[j]:
                    assert out[i] < out[j] or (out[i] <= out[j])
                    assert out[i] <= out[j]
                if values[i] == values[j]:
                    assert out[i] == out[j]

    def test_strictly_monotone_when_untied(self, rng):
        values = list(rng.permutation(np.linspace(-3, 7, 9)))
        out = rank_scale(values)
        order = np.argsort(values)
        ranked = np.asarray(out)[order]
        assert all(b > a for a, b in zip(ranked, ranked[1:]))


class TestNormalizeRow:
    def _schema(self) -> FeatureSchema:
        return FeatureSchema(
            entries=(
                FeatureSpec("dmg", 0.5),
                FeatureSpec("deaths", 0.3, Direction.NEGATIVE),
                FeatureSpec("steals", 0.2, skewed=True),
            )
        )

    def test_population_stats_drive_player_rows(self):
        schema = self._schema()
        population = [
            {"dmg": 1.0, "deaths": 4.0, "steals": 0.0},
            {"dmg": 2.0, "deaths": 5.0, "steals": 2.0},
            {"dmg": 3.0, "deaths": 6.0, "steals": 7.0},
        ]
        stats = compute_stats(population, schema)
        row = normalize_row({"dmg": 2.0, "deaths": 5.0, "steals": 2.0}, schema, stats)
        assert row["dmg"] == 0.0  # at the population median
        assert row["deaths"] == 0.0
        assert row["steals"] == 0.0

    def test_sign_adjustment_applied(self):
        schema = self._schema()
        stats = compute_stats(
            [{"dmg": 1.0, "deaths": 1.0}, {"dmg": 2.0, "deaths": 2.0}, {"dmg": 3.0, "deaths": 3.0}],
            schema,
        )
        row = normalize_row({"dmg": 3.0, "deaths": 3.0}, schema, stats)
        assert row["dmg"] > 0
        assert row["deaths"] == -row["dmg"]  # same magnitude, flipped sign

    def test_absent_features_zero(self):
        schema = self._schema()
        stats = compute_stats([{"dmg": 1.0}, {"dmg": 5.0}, {"dmg": 9.0}], schema)
        row = normalize_row({}, schema, stats)
        assert row == {"dmg": 0.0, "deaths": 0.0, "steals": 0.0}

    def test_skew_transform_before_stats(self):
        schema = FeatureSchema(entries=(FeatureSpec("steals", 1.0, skewed=True),))
        population = [{"steals": 0.0}, {"steals": 2.0}, {"steals": 50.0}]
        stats = compute_stats(population, schema)
        # Stats live in log space: median of log1p values.
        logs = sorted(math.log1p(v["steals"]) for v in population)
        assert stats.per_feature["steals"].median == pytest.approx(logs[1], abs=1e-12)

    def test_clipped_to_limit(self):
        schema = FeatureSchema(entries=(FeatureSpec("dmg", 1.0),))
        stats = compute_stats([{"dmg": 1.0}, {"dmg": 2.0}, {"dmg": 3.0}], schema)
        row = normalize_row({"dmg": 1e9}, schema, stats)
        assert row["dmg"] == CLIP_LIMIT

    def test_ordinary_mode_uses_mean_sd(self):
        schema = FeatureSchema(entries=(FeatureSpec("dmg", 1.0),))
        values = [{"dmg": v} for v in (1.0, 2.0, 3.0, 10.0)]
        stats = compute_stats(values, schema)
        arr = np.array([1.0, 2.0, 3.0, 10.0])
        expected = (10.0 - arr.mean()) / arr.std()
        row = normalize_row({"dmg": 10.0}, schema, stats, robust=False)
        assert row["dmg"] == pytest.approx(min(expected, CLIP_LIMIT), abs=1e-12)

    def test_degenerate_stats_zero(self):
        stats = NormalizationStats(per_feature={"dmg": FeatureStats(2.0, 0.0, 2.0, 0.0)})
        schema = FeatureSchema(entries=(FeatureSpec("dmg", 1.0),))
        assert normalize_row({"dmg": 99.0}, schema, stats)["dmg"] == 0.0


def test_default_schema_weights():
    schema = recommendation_schema()
    weights = schema.weight_vector()
    assert weights.sum() == pytest.approx(1.0, abs=1e-9)
    assert list(weights) == [0.20, 0.16, 0.14, 0.10, 0.18, 0.10, 0.06, 0.03, 0.02, 0.01]
    assert schema.spec("deaths_per_min").direction is Direction.NEGATIVE
