"""
Corpus Report
Invariants and event-kind tallies for a set of movies, as pandas tables
"""

import logging
from pathlib import Path
from typing import Dict, Optional

import pandas as pd

from modules.chart_movie import ChartMovie, classify
from modules.converters import surface_invariants_extended
from modules.errors import BMWError
from modules.movie_io import load_movie

logger = logging.getLogger(__name__)

INVARIANT_COLUMNS = [
    "name",
    "degree",
    "events",
    "regularity",
    "euler_characteristic",
    "boundary_components",
    "trivial_boundary",
    "circle_components_start",
]


def load_movie_dir(directory: Path) -> Dict[str, ChartMovie]:
    movies = {}
    for path in sorted(Path(directory).glob("*.movie.json")):
        movies[path.name[: -len(".movie.json")]] = load_movie(path)
    logger.info(f"loaded {len(movies)} movies from {directory}")
    return movies


def invariants_table(movies: Dict[str, ChartMovie]) -> pd.DataFrame:
    """One row per movie; movies that fail to validate are logged and skipped."""
    rows = []
    for name, m in sorted(movies.items()):
        try:
            inv = surface_invariants_extended(m)
            regularity = classify(m).value
        except BMWError as err:
            logger.warning(f"skipping {name}: {err}")
            continue
        rows.append(
            {
                "name": name,
                "degree": m.degree,
                "events": len(m.events),
                "regularity": regularity,
                "euler_characteristic": inv.euler_characteristic,
                "boundary_components": inv.boundary_components,
                "trivial_boundary": inv.trivial_boundary,
                "circle_components_start": inv.circle_components_start,
            }
        )
    return pd.DataFrame(rows, columns=INVARIANT_COLUMNS)


def event_kind_counts(movies: Dict[str, ChartMovie]) -> pd.DataFrame:
    """Total number of events of each kind across the movies, most frequent first."""
    records = [{"name": name, "kind": ev.kind.value} for name, m in movies.items() for ev in m.events]
    if not records:
        return pd.DataFrame(columns=["kind", "count", "movies"])
    df = pd.DataFrame(records)
    counts = df.groupby("kind").agg(count=("name", "size"), movies=("name", "nunique")).reset_index()
    return counts.sort_values(["count", "kind"], ascending=[False, True]).reset_index(drop=True)


def write_report(directory: Path, out: Path, kinds_out: Optional[Path] = None) -> pd.DataFrame:
    movies = load_movie_dir(directory)
    table = invariants_table(movies)
    table.to_csv(out, index=False)
    logger.info(f"wrote report for {len(table)} movies to {out}")
    if kinds_out is not None:
        counts = event_kind_counts(movies)
        counts.to_csv(kinds_out, index=False)
        logger.info(f"wrote {len(counts)} event kinds to {kinds_out}")
    return table
