"""Domain records and table loaders.

Loads the population champion table, a player's match history and mastery
records from CSV files or HTTP sources, validates required columns, coerces
cells to numbers and assembles everything into an immutable ``DataBundle``.
Non-numeric cells become absent values and are resolved to 0 at
normalization time instead of being invented here.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyTable, MissingColumn, NegativeCount
from .schema import FeatureSchema, archetype_schema
from .table_source import Row, fetch_rows

CHAMPION_COLUMN = "championName"
ROLE_COLUMN = "teamPosition"
WIN_COLUMN = "win"
ORDER_COLUMNS = ("game_order", "gameCreation")
MASTERY_POINTS_COLUMN = "championPoints"
MASTERY_LEVEL_COLUMN = "championLevel"
MASTERY_GAMES_COLUMN = "games"

ROLES = ("Top", "Jungle", "Middle", "Bottom", "Utility", "Unknown")

_ROLE_ALIASES = {
    "top": "Top",
    "jungle": "Jungle",
    "middle": "Middle",
    "mid": "Middle",
    "bottom": "Bottom",
    "bot": "Bottom",
    "utility": "Utility",
    "support": "Utility",
}


@dataclass(frozen=True)
class ChampionVector:
    """One champion's population feature values, raw and robust-normalized."""

    champion: str
    raw: dict[str, float]
    normalized: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class PlayerMatchRow:
    """One match of the player history, in time order (index is 1-based)."""

    index: int
    champion: str
    role: str = "Unknown"
    win: bool | None = None
    features: dict[str, float] = field(default_factory=dict)
    normalized: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class MasteryRecord:
    champion: str
    points: int = 0
    level: int = 0
    games: int | None = None

    def __post_init__(self) -> None:
        if self.points < 0:
            raise NegativeCount(f"mastery points for {self.champion!r} negative: {self.points}")
        if self.level < 0:
            raise NegativeCount(f"mastery level for {self.champion!r} negative: {self.level}")
        if self.games is not None and self.games < 0:
            raise NegativeCount(f"mastery games for {self.champion!r} negative: {self.games}")


@dataclass(frozen=True)
class DataBundle:
    schema: FeatureSchema
    population: tuple[ChampionVector, ...]
    history: tuple[PlayerMatchRow, ...]
    mastery: tuple[MasteryRecord, ...]


def _to_float(cell: object) -> float | None:
    """Coerce a cell to float; empty or non-numeric cells become absent."""
    if cell is None:
        return None
    if isinstance(cell, bool):
        return float(cell)
    if isinstance(cell, (int, float)):
        return float(cell)
    text = str(cell).strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        return None


def _to_win(cell: object) -> bool | None:
    if cell is None:
        return None
    if isinstance(cell, bool):
        return cell
    if isinstance(cell, (int, float)):
        if cell == 1:
            return True
        if cell == 0:
            return False
        return None
    text = str(cell).strip().lower()
    if text in ("true", "1", "1.0"):
        return True
    if text in ("false", "0", "0.0"):
        return False
    return None


def _to_role(cell: object) -> str:
    if cell is None:
        return "Unknown"
    return _ROLE_ALIASES.get(str(cell).strip().lower(), "Unknown")


def _champion_name(row: Row, context: str) -> str:
    if CHAMPION_COLUMN not in row:
        raise MissingColumn(f"{context} table is missing the {CHAMPION_COLUMN!r} column")
    return str(row[CHAMPION_COLUMN]).strip()


def _feature_map(row: Row, schema: FeatureSchema) -> dict[str, float]:
    features: dict[str, float] = {}
    for name in schema.feature_names:
        if name in row:
            value = _to_float(row[name])
            if value is not None:
                features[name] = value
    return features


def load_population(source: str | Path, schema: FeatureSchema) -> list[ChampionVector]:
    """Load the population champion table (raw values only)."""
    rows = fetch_rows(source)
    if not rows:
        raise EmptyTable(f"population table has no rows: {source}")
    vectors = []
    for row in rows:
        champion = _champion_name(row, "population")
        vectors.append(ChampionVector(champion=champion, raw=_feature_map(row, schema)))
    return vectors


def _order_key(rows: Sequence[Row]) -> str | None:
    for column in ORDER_COLUMNS:
        if all(column in row for row in rows):
            return column
    return None


def load_history(source: str | Path, schema: FeatureSchema) -> list[PlayerMatchRow]:
    """Load player match history sorted by its ordering key, indices 1..T.

    The ordering key is ``game_order`` or ``gameCreation`` when present
    (numeric when all cells parse, else lexicographic); otherwise file row
    order is kept.
    """
    rows = fetch_rows(source)
    if not rows:
        raise EmptyTable(f"history table has no rows: {source}")
    order_column = _order_key(rows)
    if order_column is not None:
        numeric = [_to_float(row[order_column]) for row in rows]
        if all(v is not None for v in numeric):
            rows = [row for _, row in sorted(zip(numeric, rows), key=lambda p: p[0])]
        else:
            rows = sorted(rows, key=lambda row: str(row[order_column]))
    out = []
    for position, row in enumerate(rows, start=1):
        out.append(
            PlayerMatchRow(
                index=position,
                champion=_champion_name(row, "history"),
                role=_to_role(row.get(ROLE_COLUMN)),
                win=_to_win(row.get(WIN_COLUMN)),
                features=_feature_map(row, schema),
            )
        )
    return out


def load_mastery(source: str | Path) -> list[MasteryRecord]:
    """Load mastery records; the games column is optional (filled from history
    at bundle assembly when absent)."""
    rows = fetch_rows(source)
    if not rows:
        raise EmptyTable(f"mastery table has no rows: {source}")
    for column in (MASTERY_POINTS_COLUMN, MASTERY_LEVEL_COLUMN):
        if not all(column in row for row in rows):
            raise MissingColumn(f"mastery table is missing the {column!r} column")
    records = []
    for row in rows:
        champion = _champion_name(row, "mastery")
        points = _to_float(row[MASTERY_POINTS_COLUMN])
        level = _to_float(row[MASTERY_LEVEL_COLUMN])
        games = _to_float(row.get(MASTERY_GAMES_COLUMN)) if MASTERY_GAMES_COLUMN in row else None
        if (points is not None and points < 0) or (level is not None and level < 0):
            raise NegativeCount(f"negative mastery counts for {champion!r}")
        if games is not None and games < 0:
            raise NegativeCount(f"negative game count for {champion!r}")
        records.append(
            MasteryRecord(
                champion=champion,
                points=int(points) if points is not None else 0,
                level=int(level) if level is not None else 0,
                games=int(games) if games is not None else None,
            )
        )
    return records


def history_game_counts(history: Iterable[PlayerMatchRow]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for row in history:
        counts[row.champion] = counts.get(row.champion, 0) + 1
    return counts


def assemble_bundle(
    schema: FeatureSchema,
    population: Sequence[ChampionVector],
    history: Sequence[PlayerMatchRow],
    mastery: Sequence[MasteryRecord],
) -> DataBundle:
    """Build an immutable bundle.

    Guarantees that every champion named in the history has exactly one
    mastery record (zeros when unknown) and that missing game counts are
    filled from history.
    """
    if not population:
        raise EmptyTable("population must be non-empty")
    counts = history_game_counts(history)
    by_champion: dict[str, MasteryRecord] = {}
    for record in mastery:
        by_champion[record.champion] = record
    for champion, record in list(by_champion.items()):
        if record.games is None:
            by_champion[champion] = replace(record, games=counts.get(champion, 0))
    for champion, games in counts.items():
        if champion not in by_champion:
            by_champion[champion] = MasteryRecord(champion=champion, games=games)
    return DataBundle(
        schema=schema,
        population=tuple(population),
        history=tuple(history),
        mastery=tuple(sorted(by_champion.values(), key=lambda r: r.champion)),
    )


def load_bundle(
    population_source: str | Path,
    history_source: str | Path,
    mastery_source: str | Path,
    schema: FeatureSchema | None = None,
) -> DataBundle:
    schema = schema or archetype_schema()
    population = load_population(population_source, schema)
    history = load_history(history_source, schema)
    mastery = load_mastery(mastery_source)
    return assemble_bundle(schema, population, history, mastery)


def save_bundle(bundle: DataBundle, directory: str | Path) -> dict[str, Path]:
    """Write the bundle back to the CSV layout (round-trips through loaders)."""
    import csv

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    feature_names = list(bundle.schema.feature_names)
    paths = {
        "population": directory / "population.csv",
        "history": directory / "history.csv",
        "mastery": directory / "mastery.csv",
    }

    with paths["population"].open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([CHAMPION_COLUMN, *feature_names])
        for vector in bundle.population:
            writer.writerow(
                [vector.champion, *[_format_cell(vector.raw.get(n)) for n in feature_names]]
            )

    with paths["history"].open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([CHAMPION_COLUMN, ORDER_COLUMNS[0], ROLE_COLUMN, WIN_COLUMN, *feature_names])
        for row in bundle.history:
            win_cell = "" if row.win is None else str(row.win).lower()
            writer.writerow(
                [
                    row.champion,
                    row.index,
                    row.role,
                    win_cell,
                    *[_format_cell(row.features.get(n)) for n in feature_names],
                ]
            )

    with paths["mastery"].open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [CHAMPION_COLUMN, MASTERY_POINTS_COLUMN, MASTERY_LEVEL_COLUMN, MASTERY_GAMES_COLUMN]
        )
        for record in bundle.mastery:
            writer.writerow([record.champion, record.points, record.level, record.games])

    return paths


def _format_cell(value: float | None) -> str:
    if value is None:
        return ""
    return repr(value)
