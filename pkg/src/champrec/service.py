"""HTTP service exposing the recommender.

Endpoints: ``POST /recommend``, ``GET /health``, ``POST /evaluate`` and
``POST /admin/reload``. The population table and its archetype model are
loaded once into an immutable snapshot shared read-only across requests;
reload atomically swaps the snapshot. Player data resolves from a fixture
directory named ``<gameName>#<tagLine>`` or from the env-configured HTTP
table source.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import EngineConfig
from .data_model import (
    ChampionVector,
    DataBundle,
    assemble_bundle,
    load_history,
    load_mastery,
    load_population,
)
from .errors import (
    ChamprecError,
    EmptyTable,
    HistoryTooShort,
    InvalidParameter,
    InvalidWeights,
    MissingColumn,
    NegativeCount,
    PlayerNotFound,
    SourceUnavailable,
)
from .evaluation import evaluate
from .schema import archetype_schema
from .scoring import EngineState, build_engine_state, recommend_with_state
from .table_source import ENV_PLAYER_TABLE, ENV_POPULATION_TABLE, source_from_env

ENV_BIND_ADDR = "BIND_ADDR"
ENV_CORS_ORIGINS = "CORS_ORIGINS"
ENV_PLAYER_FILTER_NAME = "PLAYER_FILTER_NAME"
ENV_PLAYER_FILTER_TAG = "PLAYER_FILTER_TAG"
ENV_MASTERY_TABLE = "MASTERY_TABLE"

SCORE_DECIMALS = 6

# Client-data problems map to 422, source problems to 502; anything else is
# an internal invariant violation and stays 500.
_STATUS_BY_CODE = {
    PlayerNotFound.code: 404,
    InvalidWeights.code: 422,
    InvalidParameter.code: 422,
    HistoryTooShort.code: 422,
    EmptyTable.code: 422,
    MissingColumn.code: 422,
    NegativeCount.code: 422,
    SourceUnavailable.code: 502,
}


class RecommendRequest(BaseModel):
    gameName: str
    tagLine: str
    topN: int = Field(default=30, ge=1)
    lambda_W: float | None = None
    lambda_F: float | None = None
    lambda_M: float | None = None
    alpha: float | None = None
    rho: float | None = None


class EvaluateRequest(BaseModel):
    gameName: str
    tagLine: str
    ks: list[int] | None = None
    min_prefix: int | None = None


@dataclass(frozen=True)
class Snapshot:
    """Immutable population snapshot shared read-only by all requests."""

    state: EngineState
    population: tuple[ChampionVector, ...]
    population_source: str


def load_snapshot(population_source: str, config: EngineConfig) -> Snapshot:
    schema = archetype_schema()
    population = tuple(load_population(population_source, schema))
    bundle = DataBundle(schema=schema, population=population, history=(), mastery=())
    return Snapshot(
        state=build_engine_state(bundle, config),
        population=population,
        population_source=population_source,
    )


def _player_sources(players_dir: Path | None, game_name: str, tag_line: str) -> tuple[str, str]:
    """Resolve (history, mastery) sources for a player identity."""
    if players_dir is not None:
        fixture = players_dir / f"{game_name}#{tag_line}"
        history = fixture / "history.csv"
        mastery = fixture / "mastery.csv"
        if not fixture.is_dir() or not history.is_file() or not mastery.is_file():
            raise PlayerNotFound(f"no player data for {game_name}#{tag_line}")
        return str(history), str(mastery)
    history_base = source_from_env(ENV_PLAYER_TABLE)
    mastery_base = source_from_env(ENV_MASTERY_TABLE)
    if history_base is None or mastery_base is None:
        raise PlayerNotFound("no players directory configured and no table source env set")
    name_param = os.environ.get(ENV_PLAYER_FILTER_NAME, "gameName")
    tag_param = os.environ.get(ENV_PLAYER_FILTER_TAG, "tagLine")
    query = f"?{name_param}={game_name}&{tag_param}={tag_line}"
    return history_base + query, mastery_base + query


def _request_config(base: EngineConfig, req: RecommendRequest) -> EngineConfig:
    config = base
    overrides = (req.lambda_W, req.lambda_F, req.lambda_M)
    if any(v is not None for v in overrides):
        if not all(v is not None for v in overrides):
            raise InvalidWeights("weight overrides require all of lambda_W, lambda_F, lambda_M")
        config = config.with_weights(req.lambda_W, req.lambda_F, req.lambda_M)
    if req.alpha is not None:
        if req.alpha < 0:
            raise InvalidParameter(f"alpha must be nonnegative, got {req.alpha}")
        config = replace(config, fit=replace(config.fit, alpha=req.alpha))
    if req.rho is not None:
        if req.rho < 0:
            raise InvalidParameter(f"rho must be nonnegative, got {req.rho}")
        config = replace(config, player=replace(config.player, rho=req.rho))
    return config


def create_app(
    population_source: str | None = None,
    players_dir: str | Path | None = None,
    config: EngineConfig | None = None,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    config = config or EngineConfig()
    population_source = population_source or source_from_env(ENV_POPULATION_TABLE)
    if population_source is None:
        raise SourceUnavailable(
            "no population source: pass population_source or set TABLE_SOURCE_URL/POPULATION_TABLE"
        )
    players_path = Path(players_dir) if players_dir is not None else None
    if cors_origins is None:
        origins = os.environ.get(ENV_CORS_ORIGINS, "*")
        cors_origins = [o.strip() for o in origins.split(",") if o.strip()]

    app = FastAPI(title="champrec", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.snapshot = load_snapshot(population_source, config)
    app.state.base_config = config
    app.state.players_dir = players_path

    @app.exception_handler(ChamprecError)
    async def _handle_domain_error(request: Request, exc: ChamprecError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status, content={"error": exc.code, "message": exc.message}
        )

    @app.get("/health")
    async def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/recommend")
    async def handle_recommend(req: RecommendRequest) -> JSONResponse:
        snapshot: Snapshot = app.state.snapshot
        request_config = _request_config(app.state.base_config, req)
        bundle = _player_bundle(app, snapshot, req.gameName, req.tagLine)
        # Population-side state is weight/alpha/rho independent, so request
        # overrides only need the config swapped in.
        state = replace(snapshot.state, config=request_config)
        result = recommend_with_state(state, bundle.history, bundle.mastery, top_n=req.topN)
        return JSONResponse(status_code=200, content=result.to_dict(SCORE_DECIMALS))

    @app.post("/evaluate")
    async def handle_evaluate(req: EvaluateRequest) -> JSONResponse:
        snapshot: Snapshot = app.state.snapshot
        config_for_run: EngineConfig = app.state.base_config
        if req.min_prefix is not None:
            if req.min_prefix < 1:
                raise InvalidParameter("min_prefix must be at least 1")
            config_for_run = replace(
                config_for_run, eval=replace(config_for_run.eval, min_prefix=req.min_prefix)
            )
        bundle = _player_bundle(app, snapshot, req.gameName, req.tagLine)
        report = evaluate(bundle, config_for_run, ks=req.ks)
        return JSONResponse(status_code=200, content=report.to_dict())

    @app.post("/admin/reload")
    async def handle_reload() -> dict[str, str]:
        snapshot: Snapshot = app.state.snapshot
        app.state.snapshot = load_snapshot(snapshot.population_source, app.state.base_config)
        return {"status": "reloaded"}

    return app


def _player_bundle(
    app: FastAPI, snapshot: Snapshot, game_name: str, tag_line: str
) -> DataBundle:
    history_source, mastery_source = _player_sources(
        app.state.players_dir, game_name, tag_line
    )
    schema = snapshot.state.arch_schema
    history = load_history(history_source, schema)
    mastery = load_mastery(mastery_source)
    return assemble_bundle(schema, snapshot.population, history, mastery)


def run_server(app: FastAPI, bind_addr: str | None = None) -> None:
    import uvicorn

    bind = bind_addr or os.environ.get(ENV_BIND_ADDR, "127.0.0.1:8000")
    host, _, port = bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
