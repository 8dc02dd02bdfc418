"""Batch command-line interface.

Subcommands: ``recommend`` (ranked table or JSON for one player),
``evaluate`` (temporal harness with baselines, ablations and calibration)
and ``serve`` (HTTP service). Exit codes: 0 success, 1 validation error,
2 source error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .config import EngineConfig, ScoreWeights
from .data_model import load_bundle
from .errors import ChamprecError, InvalidParameter, InvalidWeights, SourceUnavailable
from .evaluation import evaluate
from .scoring import RecommendResult, recommend

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOURCE = 2

TABLE_COLUMNS = (
    "Champion",
    "Type",
    "Final",
    "Win proxy",
    "Fit",
    "Mastery",
    "Guardrail",
    "Similarity",
)


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--player-csv", help="player match history CSV")
    parser.add_argument("--mastery-csv", help="champion mastery CSV")
    parser.add_argument("--population-csv", help="population champion table CSV")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="engine RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="champrec")
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("recommend", help="rank champions for one player")
    _add_data_flags(rec)
    rec.add_argument("--top-n", type=int, default=30)
    rec.add_argument("--weights", help="w,f,m blend weights (must sum to 1)")
    rec.add_argument(
        "--normalize-weights",
        action="store_true",
        help="rescale --weights to sum 1 instead of rejecting",
    )
    rec.add_argument("--alpha", type=float, help="fit salience gain")
    rec.add_argument("--rho", type=float, help="recency decay")
    rec.add_argument("--format", choices=("json", "table"), default="table")

    ev = sub.add_parser("evaluate", help="run the offline evaluation harness")
    _add_data_flags(ev)
    ev.add_argument("--ks", default=None, help="comma-separated cutoffs, e.g. 1,3,5,10")
    ev.add_argument("--min-prefix", type=int, default=None)
    ev.add_argument("--out", help="write the JSON report here instead of stdout")

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--population-csv", help="population champion table CSV")
    srv.add_argument("--players-dir", help="fixture directory with <name>#<tag> subdirs")
    srv.add_argument("--config", help="JSON config file")
    srv.add_argument("--bind", help="host:port (default 127.0.0.1:8000)")
    return parser


def _load_config(args: argparse.Namespace) -> EngineConfig:
    config = EngineConfig.from_file(args.config) if args.config else EngineConfig()
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "alpha", None) is not None:
        config = replace(config, fit=replace(config.fit, alpha=args.alpha))
    if getattr(args, "rho", None) is not None:
        config = replace(config, player=replace(config.player, rho=args.rho))
    if getattr(args, "min_prefix", None) is not None:
        config = replace(config, eval=replace(config.eval, min_prefix=args.min_prefix))
    return config


def _parse_weights(text: str, normalize: bool) -> ScoreWeights:
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidWeights(f"--weights needs exactly three values, got {text!r}")
    try:
        w, f, m = (float(p) for p in parts)
    except ValueError as exc:
        raise InvalidWeights(f"--weights values must be numbers: {text!r}") from exc
    weights = ScoreWeights(w, f, m)
    if normalize:
        return weights.normalized()
    weights.validate()
    return weights


def _bundle_from_args(args: argparse.Namespace):
    missing = [
        flag
        for flag, value in (
            ("--player-csv", args.player_csv),
            ("--mastery-csv", args.mastery_csv),
            ("--population-csv", args.population_csv),
        )
        if not value
    ]
    if missing:
        raise InvalidParameter(f"missing required data flags: {', '.join(missing)}")
    return load_bundle(args.population_csv, args.player_csv, args.mastery_csv)


def _format_table(result: RecommendResult) -> str:
    rows = [
        (
            rec.championName,
            rec.recommendation_type,
            f"{rec.final_score:.3f}",
            f"{rec.win_score:.3f}",
            f"{rec.fit_score:.3f}",
            f"{rec.mastery_score:.3f}",
            f"{rec.archetype_guardrail:.3f}",
            f"{rec.similarity_raw:.3f}",
        )
        for rec in result.recommendations
    ]
    widths = [
        max(len(TABLE_COLUMNS[i]), *(len(r[i]) for r in rows)) if rows else len(TABLE_COLUMNS[i])
        for i in range(len(TABLE_COLUMNS))
    ]
    lines = [
        "  ".join(name.ljust(widths[i]) for i, name in enumerate(TABLE_COLUMNS)),
        "  ".join("-" * widths[i] for i in range(len(TABLE_COLUMNS))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


def _cmd_recommend(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.weights:
        config = replace(config, weights=_parse_weights(args.weights, args.normalize_weights))
    if args.top_n < 1:
        print("error: --top-n must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    bundle = _bundle_from_args(args)
    result = recommend(bundle, config, top_n=args.top_n)
    if args.format == "json":
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(_format_table(result))
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    ks = None
    if args.ks:
        try:
            ks = tuple(int(k) for k in args.ks.split(","))
        except ValueError:
            print(f"error: --ks must be comma-separated integers: {args.ks!r}", file=sys.stderr)
            return EXIT_VALIDATION
    bundle = _bundle_from_args(args)
    report = evaluate(bundle, config, ks=ks)
    payload = json.dumps(report.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload + "\n")
    else:
        print(payload)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import create_app, run_server

    config = EngineConfig.from_file(args.config) if args.config else EngineConfig()
    app = create_app(population_source=args.population_csv, players_dir=args.players_dir, config=config)
    run_server(app, bind_addr=args.bind)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "recommend": _cmd_recommend,
        "evaluate": _cmd_evaluate,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except SourceUnavailable as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_SOURCE
    except ChamprecError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
