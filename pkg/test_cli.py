"""
Test BMW Charts CLI - Subcommands, output files and exit codes
"""

import json

import pytest

from bmw_charts import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_USAGE, cli_main
from modules.chart_io import loads_chart
from modules.chart_movie import movie_slices
from modules.chart_moves import parse_witness
from modules.movie_corpus import CORPUS_DIR, build_corpus
from modules.movie_io import loads_movie, save_movie

CORPUS = build_corpus()


@pytest.fixture
def movie_file(tmp_path):
    def write(name: str) -> str:
        path = tmp_path / f"{name}.movie.json"
        save_movie(CORPUS[name], path)
        return str(path)

    return write


def run(capsys, *argv):
    code = cli_main(list(argv))
    return code, capsys.readouterr().out


# --- Usage ---


def test_no_subcommand_is_usage_error(capsys):
    assert cli_main([]) == EXIT_USAGE
    assert "bmw_charts" in capsys.readouterr().err


def test_unknown_subcommand(capsys):
    assert cli_main(["frobnicate"]) == EXIT_USAGE


def test_missing_required_option(capsys):
    assert cli_main(["parse", "g1"]) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert cli_main(["--help"]) == EXIT_OK
    assert "search" in capsys.readouterr().out


def test_missing_file_is_usage_error(tmp_path):
    assert cli_main(["validate", str(tmp_path / "nowhere.movie.json")]) == EXIT_USAGE


def test_rewrite_without_rule(capsys):
    assert cli_main(["rewrite", "g1", "--degree", "2"]) == EXIT_USAGE


# --- Words ---


def test_parse_prints_brauer_image(capsys):
    code, out = run(capsys, "parse", "e1", "--degree", "2")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["word"] == "e1"
    assert data["length"] == 1
    assert data["brauer"]["pairs"] == [["b1", "b2"], ["t1", "t2"]]


def test_parse_reads_a_word_file(tmp_path, capsys):
    words = tmp_path / "words.txt"
    words.write_text("# sample words\ng1 g2\n\ne1\n", encoding="utf-8")
    code, out = run(capsys, "parse", "--file", str(words), "--degree", "3")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [item["word"] for item in data] == ["g1 g2", "e1"]
    assert data[1]["length"] == 1


def test_parse_needs_a_word_or_a_file(tmp_path, capsys):
    assert cli_main(["parse", "--degree", "2"]) == EXIT_USAGE
    words = tmp_path / "words.txt"
    words.write_text("g1\n", encoding="utf-8")
    assert cli_main(["parse", "g1", "--file", str(words), "--degree", "2"]) == EXIT_USAGE


def test_parse_error_is_invalid(capsys):
    assert cli_main(["parse", "g7", "--degree", "2"]) == EXIT_INVALID


def test_rewrite_applies_one_rule(capsys):
    code, out = run(capsys, "rewrite", "g1", "g2", "g1", "--degree", "3", "--rule", "R5", "--i", "1", "--j", "2",
                    "--position", "0")
    assert code == EXIT_OK
    assert out == "g2 g1 g2\n"


def test_rewrite_mismatch_is_invalid(capsys):
    code = cli_main(["rewrite", "g1", "g2", "g1", "--degree", "3", "--rule", "R5", "--i", "1", "--j", "2",
                     "--position", "1"])
    assert code == EXIT_INVALID


def test_rewrite_lists_applications(capsys):
    code, out = run(capsys, "rewrite", "g1", "g2", "g1", "--degree", "3", "--list")
    assert code == EXIT_OK
    assert "=> g2 g1 g2" in out


def test_expand_derived_rule_is_verified(capsys):
    code, out = run(capsys, "expand", "D15", "--eps", "-1", "--i", "1", "--j", "2", "--degree", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1].startswith("# verified: ")


# --- Movies and charts ---


def test_validate_sample_movie(capsys):
    code, out = run(capsys, "validate", str(CORPUS_DIR / "white-r5.movie.json"))
    assert code == EXIT_OK
    assert json.loads(out)["valid"] is True


def test_validate_sample_chart(capsys):
    code, out = run(capsys, "validate", str(CORPUS_DIR / "black-arc.chart.json"))
    assert code == EXIT_OK
    assert json.loads(out) == {"valid": True, "problems": []}


def test_validate_reports_first_failure(tmp_path, capsys):
    path = tmp_path / "bad.movie.json"
    path.write_text('{"degree": 2, "start": "g1", "events": [{"kind": "XTri", "params": {"i": 1}}]}')
    code, out = run(capsys, "validate", str(path))
    assert code == EXIT_INVALID
    assert json.loads(out)["first_failure"] == 0


def test_malformed_file_is_invalid(tmp_path):
    path = tmp_path / "broken.movie.json"
    path.write_text("[1, 2")
    assert cli_main(["validate", str(path)]) == EXIT_INVALID


def test_chart_round_trip_through_files(tmp_path, capsys):
    chart_path = tmp_path / "square8.chart.json"
    movie_path = tmp_path / "square8.movie.json"
    source = tmp_path / "source.movie.json"
    save_movie(CORPUS["square8"], source)
    assert cli_main(["chart-from-movie", str(source), "--out", str(chart_path)]) == EXIT_OK
    assert len(loads_chart(chart_path.read_text()).vertices) == 1
    assert cli_main(["movie-from-chart", str(chart_path), "--out", str(movie_path)]) == EXIT_OK
    assert movie_slices(loads_movie(movie_path.read_text())) == movie_slices(CORPUS["square8"])


def test_chart_from_movie_needs_normalize_for_caps(capsys):
    left = str(CORPUS_DIR / "e-loop-caps.movie.json")
    assert cli_main(["chart-from-movie", left]) == EXIT_INVALID
    capsys.readouterr()
    code, out = run(capsys, "chart-from-movie", left, "--normalize")
    assert code == EXIT_OK
    assert len(loads_chart(out).vertices) == 4


def test_movie_from_chart_rejects_a_movie():
    assert cli_main(["movie-from-chart", str(CORPUS_DIR / "white-r5.movie.json")]) == EXIT_INVALID


def test_invariants(capsys):
    code, out = run(capsys, "invariants", str(CORPUS_DIR / "e-loop-normal.movie.json"))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["euler_characteristic"] == 2
    assert data["trivial_boundary"] is True
    assert data["regularity"] == "regular"


def test_invariants_with_caps(capsys):
    left = str(CORPUS_DIR / "e-loop-caps.movie.json")
    assert cli_main(["invariants", left]) == EXIT_INVALID
    capsys.readouterr()
    code, out = run(capsys, "invariants", left, "--normalize")
    assert code == EXIT_OK
    assert json.loads(out)["euler_characteristic"] == 2


def test_expand_composites(capsys):
    code, out = run(capsys, "expand-composites", str(CORPUS_DIR / "xstar-4.movie.json"))
    assert code == EXIT_OK
    assert {ev.kind.value for ev in loads_movie(out).events} == {"XTri"}


# --- Moves and search ---


def test_moves_lists_witness_lines(capsys):
    code, out = run(capsys, "moves", str(CORPUS_DIR / "e-loop-caps.movie.json"), "--kind", "TangleC")
    assert code == EXIT_OK
    assert "TangleC 0 2 {\"direction\":\"expand\"}" in out.splitlines()


def test_apply_move_and_replay(tmp_path, capsys):
    left = str(CORPUS_DIR / "e-loop-caps.movie.json")
    code, out = run(capsys, "apply-move", left, 'TangleC 0 2 {"direction":"expand"}')
    assert code == EXIT_OK
    assert loads_movie(out).events == CORPUS["e-loop-normal"].events

    log = tmp_path / "witness.log"
    log.write_text('TangleC 0 2 {"direction":"expand"}\n')
    code, out = run(capsys, "moves", left, "--apply", str(log))
    assert code == EXIT_OK
    assert loads_movie(out).events == CORPUS["e-loop-normal"].events


def test_search_finds_witness(capsys):
    code, out = run(capsys, "search", str(CORPUS_DIR / "e-loop-caps.movie.json"),
                    str(CORPUS_DIR / "e-loop-normal.movie.json"), "--depth", "1", "--workers", "1")
    assert code == EXIT_OK
    assert [inst.to_line() for inst in parse_witness(out)] == ['TangleC 0 2 {"direction":"expand"}']


def test_search_not_found_still_exits_ok(movie_file, capsys):
    code, out = run(capsys, "search", movie_file("black-g-pos"), movie_file("xdot-pair"), "--depth", "2")
    assert code == EXIT_OK
    assert out.startswith("# not found within depth 2")


def test_search_budget_exhausted(movie_file, capsys):
    code, out = run(capsys, "search", movie_file("e-loop-caps"), movie_file("xdot-pair"), "--depth", "3",
                    "--budget", "2")
    assert code == EXIT_BUDGET
    assert out == ""


def test_search_degree_mismatch(movie_file):
    assert cli_main(["search", movie_file("white-r5"), movie_file("g-loop")]) == EXIT_INVALID


# --- Render and report ---


def test_render_writes_svg(tmp_path):
    out = tmp_path / "white.svg"
    assert cli_main(["render", str(CORPUS_DIR / "white-r5.movie.json"), "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.startswith("<svg ")
    assert 'class="slice"' in text


def test_render_chart_target(capsys):
    code, out = run(capsys, "render", str(CORPUS_DIR / "white-r5.movie.json"), "--target", "chart",
                    "--size", "200")
    assert code == EXIT_OK
    assert 'class="vertex white"' in out


def test_report_over_sample_directory(tmp_path):
    out = tmp_path / "report.csv"
    assert cli_main(["report", str(CORPUS_DIR), "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("name,degree,events,regularity")
    assert len(lines) == 1 + len(list(CORPUS_DIR.glob("*.movie.json")))


def test_report_with_event_kind_counts(tmp_path):
    out = tmp_path / "report.csv"
    kinds = tmp_path / "kinds.csv"
    assert cli_main(["report", str(CORPUS_DIR), "--out", str(out), "--kinds", str(kinds)]) == EXIT_OK
    lines = kinds.read_text().splitlines()
    assert lines[0] == "kind,count,movies"
    assert any(line.startswith("XTri,") for line in lines[1:])


def test_corpus_writes_sample_movies(tmp_path):
    assert cli_main(["corpus", str(tmp_path)]) == EXIT_OK
    assert len(list(tmp_path.glob("*.movie.json"))) == len(CORPUS)
    assert loads_movie((tmp_path / "white-r5.movie.json").read_text()) == CORPUS["white-r5"]
