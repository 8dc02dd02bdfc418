#!/usr/bin/env python3
"""Regenerate the committed sample dataset under sample_data/.

Deterministic (seeded); run from the repo root:

    python3 scripts/gen_sample_data.py
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from champrec.data_model import assemble_bundle, save_bundle  # noqa: E402
from champrec.schema import archetype_schema  # noqa: E402

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import (  # noqa: E402
    champion_profiles,
    history_rows,
    mastery_records,
    population_from_profiles,
)

CHAMPION_NAMES = [
    "Ahri", "Amumu", "Annie", "Ashe", "Brand", "Braum", "Caitlyn", "Darius",
    "Ekko", "Ezreal", "Garen", "Heimerdinger", "Janna", "Jinx", "Karthus",
    "Leona", "Lux", "Malphite", "Morgana", "Nasus", "Ornn", "Sion", "Soraka",
    "Syndra", "Thresh", "Veigar", "Viktor", "Xerath", "Zac", "Ziggs",
]


def main() -> None:
    root = Path(__file__).resolve().parent.parent / "sample_data"
    rng = np.random.default_rng(2024)
    profiles = champion_profiles(len(CHAMPION_NAMES), rng)
    profiles = {
        real: profile
        for real, profile in zip(CHAMPION_NAMES, profiles.values())
    }
    champions = list(profiles)

    # A mage/control-leaning player rotating a six-champion pool.
    pool = ["Xerath", "Veigar", "Lux", "Malphite", "Heimerdinger", "Annie"]
    weights = np.array([0.3, 0.2, 0.15, 0.15, 0.1, 0.1])
    picks = [pool[i] for i in rng.choice(len(pool), size=60, p=weights)]
    roles = {"Malphite": "Top"}
    history = [
        replace(row, role=roles.get(row.champion, "Middle"))
        for row in history_rows(profiles, picks, rng, jitter=0.12)
    ]

    mastery = mastery_records(pool, rng, max_points=120000)
    bundle = assemble_bundle(
        archetype_schema(), population_from_profiles(profiles), history, mastery
    )
    staged = save_bundle(bundle, root / "_staging")

    population = root / "population.csv"
    population.write_bytes(staged["population"].read_bytes())
    player_dir = root / "players" / "Raccoon#NA1"
    player_dir.mkdir(parents=True, exist_ok=True)
    (player_dir / "history.csv").write_bytes(staged["history"].read_bytes())
    (player_dir / "mastery.csv").write_bytes(staged["mastery"].read_bytes())
    for leftover in (root / "_staging").iterdir():
        leftover.unlink()
    (root / "_staging").rmdir()
    print(f"wrote {population}")
    print(f"wrote {player_dir / 'history.csv'}")
    print(f"wrote {player_dir / 'mastery.csv'}")


if __name__ == "__main__":
    main()
