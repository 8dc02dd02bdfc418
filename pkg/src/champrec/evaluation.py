"""Offline evaluation: temporal next-champion recovery (Hit@K, MRR), logistic
outcome calibration, the baseline set and the ablation battery.

Every step t ranks candidates using only matches 1..t. Player vectors,
mastery aggregates and recency mass are recomputed on the prefix while the
population table, its normalization statistics and the archetype model stay
fixed (clustering is player-independent). Nothing derived from matches after
t can influence step t.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .config import AblationFlags, EngineConfig
from .data_model import DataBundle, MasteryRecord, PlayerMatchRow, history_game_counts
from .errors import DegenerateLabels, HistoryTooShort, InsufficientData
from .player_profile import build_player_vectors
from .scoring import (
    EngineState,
    build_engine_state,
    compute_player_signals,
    normalize_history,
    score_candidates,
)
from .similarity import uniform_attention, vector_from_map, weighted_cosine

BASELINE_NAMES = (
    "most_played",
    "highest_mastery",
    "most_recent",
    "population_strength_only",
    "plain_cosine",
    "random",
)

ABLATION_NAMES = (
    "drop_strength",
    "drop_fit",
    "drop_direct_mastery",
    "drop_indirect_familiarity",
    "drop_guardrail",
    "ordinary_z",
    "uniform_recency",
    "unweighted_cosine",
)

RIDGE = 1e-6
NEWTON_MAX_ITERS = 100
NEWTON_TOL = 1e-8
MIN_CALIBRATION_POINTS = 10


@dataclass(frozen=True)
class RankingMetrics:
    hit_at_k: dict[int, float]
    mrr: float
    n: int
    skipped: int

    def to_dict(self) -> dict[str, object]:
        return {
            "hit_at_k": {str(k): v for k, v in sorted(self.hit_at_k.items())},
            "mrr": self.mrr,
            "n": self.n,
            "skipped": self.skipped,
        }


@dataclass(frozen=True)
class CalibrationResult:
    a: float
    b: float
    log_loss: float
    n: int

    def to_dict(self) -> dict[str, object]:
        return {"a": self.a, "b": self.b, "log_loss": self.log_loss, "n": self.n}


@dataclass(frozen=True)
class EvalReport:
    model: RankingMetrics
    baselines: dict[str, RankingMetrics]
    ablations: dict[str, RankingMetrics]
    calibration: CalibrationResult | None
    calibration_note: str | None
    ks: tuple[int, ...]

    def to_dict(self) -> dict[str, object]:
        return {
            "ks": list(self.ks),
            "model": self.model.to_dict(),
            "baselines": {name: m.to_dict() for name, m in self.baselines.items()},
            "ablations": {name: m.to_dict() for name, m in self.ablations.items()},
            "calibration": self.calibration.to_dict() if self.calibration else None,
            "calibration_note": self.calibration_note,
        }


def eval_steps(bundle: DataBundle, config: EngineConfig) -> list[int]:
    """Prefix lengths t to evaluate; each predicts the champion of match t+1."""
    total = len(bundle.history)
    if total < 2:
        raise HistoryTooShort(f"need at least 2 games to evaluate, got {total}")
    start = max(1, config.eval.min_prefix)
    steps = list(range(start, total))
    if not steps:
        raise HistoryTooShort(
            f"no evaluable steps: {total} games with min_prefix={config.eval.min_prefix}"
        )
    return steps


def prefix_mastery(
    bundle: DataBundle, prefix: Sequence[PlayerMatchRow]
) -> list[MasteryRecord]:
    """Mastery records as of the prefix: static points and levels, game counts
    recomputed from the prefix so no future games leak in."""
    counts = history_game_counts(prefix)
    records = [
        replace(record, games=counts.get(record.champion, 0)) for record in bundle.mastery
    ]
    known = {record.champion for record in bundle.mastery}
    for champion, games in sorted(counts.items()):
        if champion not in known:
            records.append(MasteryRecord(champion=champion, games=games))
    return records


def rank_at_step(state: EngineState, bundle: DataBundle, t: int) -> list[str]:
    """Full-model candidate ranking using only the first t matches."""
    prefix = bundle.history[:t]
    player = compute_player_signals(state, prefix, prefix_mastery(bundle, prefix))
    return [rec.championName for rec in score_candidates(state, player)]


def _metrics_from_ranks(
    ranks: Sequence[int], skipped: int, ks: Sequence[int]
) -> RankingMetrics:
    n = len(ranks)
    if n == 0:
        return RankingMetrics(hit_at_k={int(k): 0.0 for k in ks}, mrr=0.0, n=0, skipped=skipped)
    hit = {int(k): sum(1 for r in ranks if r <= k) / n for k in ks}
    mrr = sum(1.0 / r for r in ranks) / n
    return RankingMetrics(hit_at_k=hit, mrr=mrr, n=n, skipped=skipped)


def _collect_ranks(
    bundle: DataBundle,
    config: EngineConfig,
    ranker: Callable[[int], list[str]],
) -> tuple[list[int], int, list[tuple[int, int]]]:
    """Apply a per-step ranker; returns (ranks, skipped, (step, rank) pairs)."""
    candidates = {vec.champion for vec in bundle.population}
    ranks: list[int] = []
    detail: list[tuple[int, int]] = []
    skipped = 0
    for t in eval_steps(bundle, config):
        target = bundle.history[t].champion  # 0-based: row t is match t+1
        if target not in candidates:
            skipped += 1
            continue
        ordered = ranker(t)
        rank = ordered.index(target) + 1
        ranks.append(rank)
        detail.append((t, rank))
    return ranks, skipped, detail


def temporal_eval(
    bundle: DataBundle,
    config: EngineConfig | None = None,
    ks: Sequence[int] | None = None,
    state: EngineState | None = None,
) -> RankingMetrics:
    """Next-champion recovery for the full model."""
    config = config or EngineConfig()
    ks = tuple(ks) if ks is not None else config.eval.ks
    state = state or build_engine_state(bundle, config)
    ranks, skipped, _ = _collect_ranks(
        bundle, config, lambda t: rank_at_step(state, bundle, t)
    )
    return _metrics_from_ranks(ranks, skipped, ks)


# -------- Baselines --------


def _baseline_ranker(
    name: str,
    state: EngineState,
    bundle: DataBundle,
    rng: np.random.Generator,
) -> Callable[[int], list[str]]:
    champions = list(state.champions)
    points = {record.champion: record.points for record in bundle.mastery}
    strength = {c: state.strength[c].scaled for c in champions}

    if name == "most_played":

        def ranker(t: int) -> list[str]:
            counts = history_game_counts(bundle.history[:t])
            return sorted(champions, key=lambda c: (-counts.get(c, 0), c))

    elif name == "highest_mastery":

        def ranker(t: int) -> list[str]:
            return sorted(champions, key=lambda c: (-points.get(c, 0), c))

    elif name == "most_recent":

        def ranker(t: int) -> list[str]:
            last_seen: dict[str, int] = {}
            for row in bundle.history[:t]:
                last_seen[row.champion] = row.index
            return sorted(champions, key=lambda c: (-last_seen.get(c, 0), c))

    elif name == "population_strength_only":

        def ranker(t: int) -> list[str]:
            return sorted(champions, key=lambda c: (-strength[c], c))

    elif name == "plain_cosine":
        attention = uniform_attention(state.schema.feature_names)

        def ranker(t: int) -> list[str]:
            prefix = bundle.history[:t]
            rows = normalize_history(prefix, state)
            mastery_map = {r.champion: r for r in prefix_mastery(bundle, prefix)}
            vectors = build_player_vectors(rows, mastery_map, rho=state.config.player.rho)
            names = state.schema.feature_names
            game_vec = vector_from_map(vectors.u_game, names)
            pool_vec = vector_from_map(vectors.u_pool, names)
            fit_cfg = state.config.fit
            raw = {}
            for c in champions:
                x = vector_from_map(state.normalized_vectors[c], names)
                raw[c] = fit_cfg.game_weight * weighted_cosine(
                    game_vec, x, attention.values
                ) + fit_cfg.pool_weight * weighted_cosine(pool_vec, x, attention.values)
            return sorted(champions, key=lambda c: (-raw[c], c))

    elif name == "random":

        def ranker(t: int) -> list[str]:
            order = rng.permutation(len(champions))
            return [champions[i] for i in order]

    else:
        raise ValueError(f"unknown baseline {name!r}")

    return ranker


def run_baselines(
    bundle: DataBundle,
    config: EngineConfig | None = None,
    ks: Sequence[int] | None = None,
    state: EngineState | None = None,
) -> dict[str, RankingMetrics]:
    config = config or EngineConfig()
    ks = tuple(ks) if ks is not None else config.eval.ks
    state = state or build_engine_state(bundle, config)
    out: dict[str, RankingMetrics] = {}
    for name in BASELINE_NAMES:
        rng = np.random.default_rng(config.seed)
        ranker = _baseline_ranker(name, state, bundle, rng)
        ranks, skipped, _ = _collect_ranks(bundle, config, ranker)
        out[name] = _metrics_from_ranks(ranks, skipped, ks)
    return out


# -------- Ablations --------


def run_ablations(
    bundle: DataBundle,
    config: EngineConfig | None = None,
    ks: Sequence[int] | None = None,
) -> dict[str, RankingMetrics]:
    """One full temporal evaluation per component switch."""
    config = config or EngineConfig()
    ks = tuple(ks) if ks is not None else config.eval.ks
    out: dict[str, RankingMetrics] = {}
    for name in ABLATION_NAMES:
        flags = AblationFlags(**{name: True})
        ablated = replace(config, ablation=flags)
        out[name] = temporal_eval(bundle, ablated, ks=ks)
    return out


# -------- Calibration --------


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def fit_calibration(
    scores: Sequence[float], outcomes: Sequence[bool]
) -> tuple[float, float, float]:
    """Maximum-likelihood logistic fit of win probability on the model score.

    Damped Newton iterations with a tiny ridge so separable data stays
    finite. Returns (intercept, slope, mean log loss).
    """
    if len(scores) != len(outcomes):
        raise InsufficientData("scores and outcomes must have equal length")
    n = len(scores)
    if n < MIN_CALIBRATION_POINTS:
        raise InsufficientData(f"need at least {MIN_CALIBRATION_POINTS} points, got {n}")
    y = np.asarray([1.0 if o else 0.0 for o in outcomes])
    if y.min() == y.max():
        raise DegenerateLabels("calibration requires both outcome classes")
    x = np.column_stack([np.ones(n), np.asarray(scores, dtype=float)])
    w = np.zeros(2)

    def objective(wv: np.ndarray) -> float:
        z = x @ wv
        return float(np.mean(np.logaddexp(0.0, z) - y * z)) + 0.5 * RIDGE * float(wv @ wv)

    for _ in range(NEWTON_MAX_ITERS):
        z = x @ w
        p = _sigmoid(z)
        grad = x.T @ (p - y) / n + RIDGE * w
        weights = np.maximum(p * (1.0 - p), 1e-12)
        hess = (x * weights[:, None]).T @ x / n + RIDGE * np.eye(2)
        step = np.linalg.solve(hess, grad)
        # Backtracking keeps Newton stable far from the optimum.
        t = 1.0
        base = objective(w)
        candidate = w - step
        while objective(candidate) > base and t > 1e-10:
            t /= 2.0
            candidate = w - t * step
        moved = float(np.linalg.norm(candidate - w))
        w = candidate
        if moved < NEWTON_TOL:
            break

    z = x @ w
    log_loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    return float(w[0]), float(w[1]), log_loss


def _calibration_pairs(
    bundle: DataBundle, config: EngineConfig, state: EngineState
) -> tuple[list[float], list[bool]]:
    """Model score of each actually-picked champion at pick time, with its
    outcome, using prefix-only scoring."""
    candidates = {vec.champion for vec in bundle.population}
    scores: list[float] = []
    outcomes: list[bool] = []
    for t in eval_steps(bundle, config):
        row = bundle.history[t]
        if row.win is None or row.champion not in candidates:
            continue
        prefix = bundle.history[:t]
        player = compute_player_signals(state, prefix, prefix_mastery(bundle, prefix))
        ranked = score_candidates(state, player)
        by_name = {rec.championName: rec.final_score for rec in ranked}
        scores.append(by_name[row.champion])
        outcomes.append(row.win)
    return scores, outcomes


# -------- Full harness --------


def evaluate(
    bundle: DataBundle,
    config: EngineConfig | None = None,
    ks: Sequence[int] | None = None,
) -> EvalReport:
    """Temporal recovery, the baseline set, all ablations and calibration."""
    config = config or EngineConfig()
    ks = tuple(ks) if ks is not None else config.eval.ks
    state = build_engine_state(bundle, config)
    model = temporal_eval(bundle, config, ks=ks, state=state)
    baselines = run_baselines(bundle, config, ks=ks, state=state)
    ablations = run_ablations(bundle, config, ks=ks)

    calibration: CalibrationResult | None = None
    note: str | None = None
    scores, outcomes = _calibration_pairs(bundle, config, state)
    try:
        a, b, log_loss = fit_calibration(scores, outcomes)
        calibration = CalibrationResult(a=a, b=b, log_loss=log_loss, n=len(scores))
    except (InsufficientData, DegenerateLabels) as exc:
        note = exc.message

    return EvalReport(
        model=model,
        baselines=baselines,
        ablations=ablations,
        calibration=calibration,
        calibration_note=note,
        ks=tuple(int(k) for k in ks),
    )
