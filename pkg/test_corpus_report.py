"""
Test Corpus Report - Invariant tables and event tallies over movie directories
"""

import pandas as pd

from modules.chart_movie import ChartMovie, EventKind, make_event
from modules.corpus_report import (
    INVARIANT_COLUMNS,
    event_kind_counts,
    invariants_table,
    load_movie_dir,
    write_report,
)
from modules.movie_corpus import CORPUS_DIR, build_corpus
from modules.word_algebra import parse_word

CORPUS = build_corpus()


def test_load_sample_directory():
    movies = load_movie_dir(CORPUS_DIR)
    assert "white-r5" in movies
    assert movies["white-r5"] == CORPUS["white-r5"]
    # chart files are not movies
    assert "black-arc" not in movies


def test_invariants_table_rows():
    table = invariants_table({name: CORPUS[name] for name in ("e-loop-caps", "e-loop-normal", "branch-left")})
    assert list(table.columns) == INVARIANT_COLUMNS
    assert list(table["name"]) == ["branch-left", "e-loop-caps", "e-loop-normal"]
    row = table.set_index("name").loc["e-loop-normal"]
    assert row["euler_characteristic"] == 2
    assert row["trivial_boundary"]
    assert table.set_index("name").loc["branch-left", "regularity"] == "non-regular"


def test_invalid_movies_are_skipped():
    bad = ChartMovie(2, parse_word("g1", 2), (make_event(EventKind.XTRI, i=1),))
    table = invariants_table({"bad": bad, "saddle-pos": CORPUS["saddle-pos"]})
    assert list(table["name"]) == ["saddle-pos"]


def test_empty_table_keeps_columns():
    table = invariants_table({})
    assert table.empty
    assert list(table.columns) == INVARIANT_COLUMNS


def test_event_kind_counts():
    counts = event_kind_counts({name: CORPUS[name] for name in ("e-loop-normal", "xdot-pair")})
    assert counts.iloc[0]["count"] >= counts.iloc[-1]["count"]
    by_kind = counts.set_index("kind")
    assert by_kind.loc["XTri", "movies"] == 1
    assert by_kind["count"].sum() == len(CORPUS["e-loop-normal"]) + len(CORPUS["xdot-pair"])


def test_event_kind_counts_of_nothing():
    counts = event_kind_counts({"identity": ChartMovie(2, parse_word("1", 2))})
    assert counts.empty
    assert list(counts.columns) == ["kind", "count", "movies"]


def test_write_report(tmp_path):
    out = tmp_path / "report.csv"
    table = write_report(CORPUS_DIR, out)
    again = pd.read_csv(out)
    assert len(again) == len(table) == len(list(CORPUS_DIR.glob("*.movie.json")))
    assert list(again.columns) == INVARIANT_COLUMNS
