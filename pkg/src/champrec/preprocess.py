"""Robust preprocessing: log1p transforms, median/MAD z-scores, clipping, sign
correction and the shared rank-scaling primitive.

All statistics are computed over the population table and then reused to
normalize player rows, so the two sides live on the same scale. Values beyond
three robust standard deviations are clipped, and a zero (or undefined) MAD
collapses a feature to zero rather than blowing up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyInput, NegativeInput
from .schema import Direction, FeatureSchema

# Scales MAD to match the standard deviation under a Gaussian reference.
MAD_CONSISTENCY = 0.67448975

CLIP_LIMIT = 3.0


def log1p_transform(x: float) -> float:
    """log(1 + x) for nonnegative event counts; monotone, tames outliers."""
    if x < 0:
        raise NegativeInput(f"log1p transform requires x >= 0, got {x}")
    return math.log1p(x)


def robust_z(values: Sequence[float | None]) -> list[float]:
    """Median/MAD z-scores clipped to [-3, 3].

    Absent entries (None) score 0. If the MAD is zero or undefined, every
    score is 0.
    """
    if len(values) == 0:
        raise EmptyInput("robust_z requires a non-empty value list")
    present = np.array([v for v in values if v is not None], dtype=float)
    if present.size == 0:
        return [0.0] * len(values)
    median = float(np.median(present))
    mad = float(np.median(np.abs(present - median)))
    if mad <= 0.0:
        return [0.0] * len(values)
    out = []
    for v in values:
        if v is None:
            out.append(0.0)
        else:
            z = MAD_CONSISTENCY * (v - median) / mad
            out.append(float(np.clip(z, -CLIP_LIMIT, CLIP_LIMIT)))
    return out


def sign_adjust(z: float, direction: Direction) -> float:
    """Flip the score for directionally negative metrics."""
    if direction is Direction.NEGATIVE:
        return -z
    return z


def rank_scale(values: Sequence[float]) -> list[float]:
    """Order-preserving map to [0, 1] via average ranks.

    Tied values share the mean rank of their block and a single element or a
    fully tied list maps to the neutral value 0.5.
    """
    n = len(values)
    if n == 0:
        raise EmptyInput("rank_scale requires a non-empty value list")
    v = np.asarray(values, dtype=float)
    if n == 1 or np.all(v == v[0]):
        return [0.5] * n
    order = np.argsort(v, kind="stable")
    sorted_v = v[order]
    ranks = np.empty(n, dtype=float)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        # ranks i+1 .. j+1 share their mean
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return [float(r) for r in (ranks - 1.0) / (n - 1.0)]


@dataclass(frozen=True)
class FeatureStats:
    median: float
    mad: float
    mean: float
    sd: float


@dataclass(frozen=True)
class NormalizationStats:
    """Per-feature location/scale computed over the population table.

    Skew-flagged features are log-transformed before the statistics, so the
    same transform must be applied to values normalized against them.
    """

    per_feature: Mapping[str, FeatureStats]

    def __contains__(self, name: str) -> bool:
        return name in self.per_feature


def _skewed_value(raw: float, skewed: bool) -> float:
    return log1p_transform(raw) if skewed else raw


def compute_stats(rows: Iterable[Mapping[str, float]], schema: FeatureSchema) -> NormalizationStats:
    """Median/MAD (and mean/SD for the ordinary-z variant) per schema feature."""
    rows = list(rows)
    stats: dict[str, FeatureStats] = {}
    for spec in schema.entries:
        present = [
            _skewed_value(row[spec.name], spec.skewed) for row in rows if spec.name in row
        ]
        if not present:
            stats[spec.name] = FeatureStats(median=0.0, mad=0.0, mean=0.0, sd=0.0)
            continue
        arr = np.asarray(present, dtype=float)
        median = float(np.median(arr))
        mad = float(np.median(np.abs(arr - median)))
        stats[spec.name] = FeatureStats(
            median=median,
            mad=mad,
            mean=float(arr.mean()),
            sd=float(arr.std()),
        )
    return NormalizationStats(per_feature=stats)


def normalize_row(
    raw: Mapping[str, float],
    schema: FeatureSchema,
    stats: NormalizationStats,
    robust: bool = True,
) -> dict[str, float]:
    """Normalize one raw feature map against population statistics.

    Pipeline per feature: optional log1p, (robust or ordinary) z-score, clip
    to [-3, 3], then sign adjustment. Absent features normalize to 0.
    """
    out: dict[str, float] = {}
    for spec in schema.entries:
        fs = stats.per_feature.get(spec.name)
        if fs is None or spec.name not in raw:
            out[spec.name] = 0.0
            continue
        value = _skewed_value(raw[spec.name], spec.skewed)
        if robust:
            scale = fs.mad
            z = MAD_CONSISTENCY * (value - fs.median) / scale if scale > 0 else 0.0
        else:
            scale = fs.sd
            z = (value - fs.mean) / scale if scale > 0 else 0.0
        z = float(np.clip(z, -CLIP_LIMIT, CLIP_LIMIT))
        out[spec.name] = sign_adjust(z, spec.direction)
    return out
