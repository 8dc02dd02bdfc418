"""Table sources: local CSV files or HTTP endpoints returning CSV or JSON rows.

A source reference is either a filesystem path or an http(s) URL. HTTP
sources may require a key, read from ``TABLE_SOURCE_KEY``; table names for
env-configured deployments come from ``PLAYER_TABLE`` / ``POPULATION_TABLE``
relative to ``TABLE_SOURCE_URL``.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

import requests

from .errors import SourceUnavailable

HTTP_TIMEOUT_SECONDS = 10.0

ENV_SOURCE_URL = "TABLE_SOURCE_URL"
ENV_SOURCE_KEY = "TABLE_SOURCE_KEY"
ENV_PLAYER_TABLE = "PLAYER_TABLE"
ENV_POPULATION_TABLE = "POPULATION_TABLE"

Row = dict[str, object]


def _is_url(source: str) -> bool:
    return source.startswith("http://") or source.startswith("https://")


def _rows_from_csv_text(text: str) -> list[Row]:
    reader = csv.DictReader(io.StringIO(text))
    return [dict(row) for row in reader]


def _rows_from_json(payload: object) -> list[Row]:
    if not isinstance(payload, list):
        raise SourceUnavailable("JSON table payload must be a list of row objects")
    rows: list[Row] = []
    for item in payload:
        if not isinstance(item, dict):
            raise SourceUnavailable("JSON table payload must be a list of row objects")
        rows.append(dict(item))
    return rows


def _fetch_http(url: str) -> list[Row]:
    headers = {}
    key = os.environ.get(ENV_SOURCE_KEY)
    if key:
        headers["apikey"] = key
        headers["Authorization"] = f"Bearer {key}"
    try:
        response = requests.get(url, headers=headers, timeout=HTTP_TIMEOUT_SECONDS)
    except requests.RequestException as exc:
        raise SourceUnavailable(f"HTTP table source unreachable: {url} ({exc})") from exc
    if response.status_code != 200:
        raise SourceUnavailable(
            f"HTTP table source returned status {response.status_code}: {url}"
        )
    content_type = response.headers.get("content-type", "")
    if "json" in content_type:
        return _rows_from_json(response.json())
    text = response.text
    try:
        return _rows_from_json(json.loads(text))
    except (json.JSONDecodeError, SourceUnavailable):
        return _rows_from_csv_text(text)


def fetch_rows(source: str | Path) -> list[Row]:
    """Resolve a source reference and return its rows as dicts.

    CSV cells come back as strings; JSON values keep their native types.
    Numeric coercion happens in the loaders.
    """
    ref = str(source)
    if _is_url(ref):
        return _fetch_http(ref)
    path = Path(ref)
    if not path.is_file():
        raise SourceUnavailable(f"table file not found: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SourceUnavailable(f"cannot read table file {path}: {exc}") from exc
    return _rows_from_csv_text(text)


def source_from_env(table_env: str) -> str | None:
    """Build an HTTP source URL from environment configuration, if present."""
    base = os.environ.get(ENV_SOURCE_URL)
    table = os.environ.get(table_env)
    if not base or not table:
        return None
    return f"{base.rstrip('/')}/{table}"
