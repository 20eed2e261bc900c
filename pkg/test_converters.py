"""
Test Converters - Movies to chart graphs and back, local vertex checks and surface invariants
"""

from dataclasses import replace

import pytest

from modules.chart_io import chart_from_dict, chart_to_dict, dumps_chart, load_chart, loads_chart, save_chart
from modules.chart_movie import (
    ChartMovie,
    EventKind,
    concat_movies,
    expand_composite_vertices,
    final_word,
    make_event,
    movie_slices,
    normalize_caps,
    strip_levels,
    xstar_tree_expansions,
)
from modules.converters import (
    ChartGraph,
    chart_graph_to_movie,
    charts_isomorphic,
    movie_to_chart_graph,
    surface_invariants,
    surface_invariants_extended,
    validate_chart_graph,
    vertex_ends,
)
from modules.errors import ChartGraphError, FormatError, MovieError
from modules.movie_corpus import CORPUS_DIR, build_corpus, normal_form_names
from modules.word_algebra import parse_word, word_to_text

K = EventKind
CORPUS = build_corpus()
NORMAL_FORM = normal_form_names(CORPUS)


def with_vertex_type(graph: ChartGraph, vertex_id: str, vtype: str) -> ChartGraph:
    vertices = tuple(replace(v, vtype=vtype) if v.id == vertex_id else v for v in graph.vertices)
    return replace(graph, vertices=vertices)


# --- Movie -> chart ---


def test_black_vertices_joined_by_one_edge():
    graph = movie_to_chart_graph(CORPUS["black-g-pos"])
    assert [v.vtype for v in graph.vertices] == ["a", "a"]
    (edge,) = graph.edges
    assert edge.label == "g1"
    assert (edge.source.ref, edge.target.ref) == ("v0", "v1")
    assert validate_chart_graph(graph) == []


def test_negative_black_edge_points_down():
    (edge,) = movie_to_chart_graph(CORPUS["black-g-neg"]).edges
    assert (edge.source.ref, edge.target.ref) == ("v1", "v0")


def test_white_vertex_reads_alternating_labels():
    graph = movie_to_chart_graph(CORPUS["white-r5"])
    (vertex,) = graph.vertices
    assert vertex.vtype == "c"
    ends = vertex_ends(graph, vertex)
    assert len(ends) == 6
    labels = [end.edge.label for end in ends]
    assert all(labels[q] != labels[q + 1] for q in range(5))
    assert sorted(end.outgoing for end in ends) == [False] * 3 + [True] * 3


def test_disk_pair_chart():
    graph = movie_to_chart_graph(CORPUS["e-loop-normal"])
    assert [v.vtype for v in graph.vertices] == ["d", "i", "i", "d"]
    assert len(graph.edges) == 4
    assert {edge.label for edge in graph.edges} == {"e1"}


def test_g_loop_is_a_closed_edge():
    (edge,) = movie_to_chart_graph(CORPUS["g-loop"]).edges
    assert edge.is_loop
    assert edge.points[0] == edge.points[-1]


def test_movie_with_e_caps_refused():
    with pytest.raises(MovieError):
        movie_to_chart_graph(CORPUS["e-loop-caps"])


def test_every_boundary_point_is_used():
    m = CORPUS["hook-slide"]
    graph = movie_to_chart_graph(m)
    bottoms = sorted(e.source.ref for e in graph.edges if e.source and e.source.kind == "bottom")
    assert len(bottoms) + sum(1 for e in graph.edges if e.target and e.target.kind == "bottom") == len(m.start)


# --- Chart -> movie ---


@pytest.mark.parametrize("name", NORMAL_FORM)
def test_round_trip_replays_same_slices(name):
    m = CORPUS[name]
    back = chart_graph_to_movie(movie_to_chart_graph(m))
    assert movie_slices(back) == movie_slices(strip_levels(m))


@pytest.mark.parametrize("name", ["white-r5", "square5-r7", "square6-rev", "xstar-5", "crossing-round", "g-loop-neg"])
def test_round_trip_charts_are_isomorphic(name):
    graph = movie_to_chart_graph(CORPUS[name])
    again = movie_to_chart_graph(chart_graph_to_movie(graph))
    assert charts_isomorphic(graph, again)


def test_isomorphism_sees_labels():
    assert not charts_isomorphic(movie_to_chart_graph(CORPUS["saddle-pos"]),
                                 movie_to_chart_graph(CORPUS["xdot-pair"]))


def test_canonical_white_compiles_rotations():
    graph = movie_to_chart_graph(CORPUS["white-d15-neg"])
    m = chart_graph_to_movie(graph, canonical_white=True)
    whites = [ev for ev in m.events if ev.kind is K.WHITE]
    assert whites and all(ev.param("variant") == "R5" for ev in whites)
    assert final_word(m) == final_word(CORPUS["white-d15-neg"])


def test_straight_edge_chart_has_no_events():
    m = chart_graph_to_movie(load_chart(CORPUS_DIR / "black-arc.chart.json"))
    assert word_to_text(m.start) == "g1"
    assert m.events == ()


def test_closed_e_loop_reads_as_cap_and_cup():
    m = chart_graph_to_movie(load_chart(CORPUS_DIR / "e-loop-caps.chart.json"))
    assert m == CORPUS["e-loop-caps"]
    assert normalize_caps(m).events == CORPUS["e-loop-normal"].events


def test_boundary_arc_is_laid_out_with_a_bump():
    data = {
        "degree": 2,
        "edges": [
            {"label": "g1", "source": {"boundary": "bottom", "index": 0}, "target": {"boundary": "bottom", "index": 1}},
        ],
    }
    graph = chart_from_dict(data)
    assert len(graph.edges[0].points) == 3
    assert chart_graph_to_movie(graph) == CORPUS["g-cancel"]


def test_wrong_reading_raises_sweep_error():
    graph = with_vertex_type(movie_to_chart_graph(CORPUS["square6"]), "v0", "h")
    assert validate_chart_graph(graph)
    with pytest.raises(ChartGraphError):
        chart_graph_to_movie(graph)


def test_horizontal_loop_segment_is_tilted():
    data = {
        "degree": 2,
        "edges": [
            {"label": "e1", "source": None, "target": None,
             "points": [[0.3, 0.4], [0.7, 0.4], [0.5, 0.6], [0.3, 0.4]]},
        ],
    }
    assert chart_graph_to_movie(chart_from_dict(data)) == CORPUS["e-loop-caps"]


def test_horizontal_jog_in_a_through_edge():
    data = {
        "degree": 2,
        "edges": [
            {"label": "g1", "source": {"boundary": "bottom", "index": 0}, "target": {"boundary": "top", "index": 0},
             "points": [[0.5, 0.0], [0.5, 0.4], [0.6, 0.4], [0.6, 1.0]]},
        ],
    }
    m = chart_graph_to_movie(chart_from_dict(data))
    assert word_to_text(m.start) == "g1"
    assert m.events == ()


def test_flat_top_reads_as_one_cap():
    data = {
        "degree": 2,
        "edges": [
            {"label": "g1", "source": {"boundary": "bottom", "index": 0}, "target": {"boundary": "bottom", "index": 1},
             "points": [[1 / 3, 0.0], [0.4, 0.5], [0.6, 0.5], [2 / 3, 0.0]]},
        ],
    }
    assert chart_graph_to_movie(chart_from_dict(data)) == CORPUS["g-cancel"]


# --- Local checks ---


@pytest.mark.parametrize(
    "name,vtype,message",
    [
        ("black-g-pos", "d", "(d)"),
        ("xdot-pair", "a", "(a)"),
        ("saddle-pos", "i", "(i)"),
        ("crossing-gg", "f", "crossing type"),
        ("crossing-ge", "b", "crossing type"),
        ("white-r5", "k", "(k)"),
        ("square8", "i", "(i)"),
        ("square5-r6", "g", "(g)"),
        ("branch-left", "i", "(i)"),
        ("xtri-merges", "j", "(j)"),
        ("square6", "z", "unknown vertex type"),
    ],
)
def test_mutated_vertex_types_are_reported(name, vtype, message):
    graph = with_vertex_type(movie_to_chart_graph(CORPUS[name]), "v0", vtype)
    problems = validate_chart_graph(graph)
    assert problems
    assert any(message in problem for problem in problems)


def mutate_end(graph: ChartGraph, kind: str, mutation: str) -> ChartGraph:
    """Change the first `kind` edge at v0: swap its label letter, reverse it, or shift its index."""
    edge = next(end.edge for end in vertex_ends(graph, graph.vertex("v0")) if end.kind == kind)
    if mutation == "label":
        changed = replace(edge, label=("e" if kind == "g" else "g") + edge.label[1:])
    elif mutation == "orientation":
        changed = replace(edge, source=edge.target, target=edge.source, points=edge.points[::-1])
    else:
        index = edge.index + 1 if edge.index + 1 <= graph.degree - 1 else edge.index - 1
        changed = replace(edge, label=f"{kind}{index}")
    return replace(graph, edges=tuple(changed if other.id == edge.id else other for other in graph.edges))


@pytest.mark.parametrize(
    "name,kind,mutation,clause",
    [
        ("black-g-pos", "g", "label", "a"),
        ("crossing-gg", "g", "orientation", "b"),
        ("crossing-gg", "g", "index", "b"),
        ("white-r5", "g", "orientation", "c"),
        ("white-r5", "g", "index", "c"),
        ("xdot-pair", "e", "label", "d"),
        ("saddle-pos", "e", "label", "e"),
        ("crossing-ge", "g", "orientation", "f"),
        ("square8", "e", "index", "g"),
        ("square8", "e", "label", "g"),
        ("square5-r6", "g", "orientation", "h"),
        ("square5-r6-neg", "g", "orientation", "h"),
        ("square5-r6", "g", "index", "h"),
        ("xtri-merges", "e", "label", "i"),
        ("branch-left", "g", "label", "j"),
        ("square6", "g", "orientation", "k"),
        ("square6-mixed", "g", "orientation", "k"),
        ("xstar-5", "e", "index", "i'"),
        ("xstar-4", "e", "label", "i'"),
        ("square-star-right", "e", "label", "j'"),
    ],
)
def test_mutated_edges_are_reported_with_clause(name, kind, mutation, clause):
    graph = movie_to_chart_graph(CORPUS[name])
    assert validate_chart_graph(graph) == []
    problems = validate_chart_graph(mutate_end(graph, kind, mutation))
    assert any(problem.startswith(f"vertex v0 ({clause})") for problem in problems)


def test_square5_with_one_reversed_g_edge():
    graph = movie_to_chart_graph(CORPUS["square5-r6"])
    flipped = mutate_end(graph, "g", "orientation")
    assert any("point toward or both away" in problem for problem in validate_chart_graph(flipped))
    both = mutate_end(flipped, "g", "orientation")
    # flipping the same edge back restores the chart
    assert validate_chart_graph(both) == []


def test_bad_edge_labels_reported():
    graph = movie_to_chart_graph(CORPUS["black-g-pos"])
    edge = graph.edges[0]
    assert "out of range" in validate_chart_graph(replace(graph, edges=(replace(edge, label="g2"),)))[0]
    assert "bad label" in validate_chart_graph(replace(graph, edges=(replace(edge, label="x1"),)))[0]
    assert "unknown vertex" in validate_chart_graph(replace(graph, vertices=graph.vertices[:1]))[0]


@pytest.mark.parametrize("name", NORMAL_FORM)
def test_generated_charts_validate(name):
    assert validate_chart_graph(movie_to_chart_graph(CORPUS[name])) == []


# --- Chart files ---


def test_chart_file_round_trip(tmp_path):
    graph = movie_to_chart_graph(CORPUS["square8"])
    save_chart(graph, tmp_path / "square8.chart.json")
    again = load_chart(tmp_path / "square8.chart.json")
    assert charts_isomorphic(graph, again)
    assert loads_chart(dumps_chart(again)) == again


def strip_coordinates(graph: ChartGraph) -> dict:
    data = chart_to_dict(graph)
    for vertex in data["vertices"]:
        del vertex["x"], vertex["y"]
    for edge in data["edges"]:
        del edge["points"]
    return data


@pytest.mark.parametrize("name", ["square5-r6", "white-r5", "crossing-gg", "black-g-pos", "saddle-pos"])
def test_vertices_without_coordinates_are_laid_out(name):
    graph = chart_from_dict(strip_coordinates(movie_to_chart_graph(CORPUS[name])))
    assert all(0.0 < v.x < 1.0 and 0.0 < v.y < 1.0 for v in graph.vertices)
    assert validate_chart_graph(graph) == []
    assert movie_slices(chart_graph_to_movie(graph)) == movie_slices(CORPUS[name])


def test_vertex_levels_follow_edge_direction():
    graph = chart_from_dict(strip_coordinates(movie_to_chart_graph(CORPUS["black-g-pos"])))
    assert graph.vertex("v0").y < graph.vertex("v1").y
    assert graph.vertex("v0").x == graph.vertex("v1").x == 0.5


def test_directed_cycle_of_vertices_still_laid_out():
    data = {
        "degree": 2,
        "vertices": [{"id": "v0", "type": "i"}, {"id": "v1", "type": "i"}],
        "edges": [
            {"label": "e1", "source": {"vertex": "v0"}, "target": {"vertex": "v1"}},
            {"label": "e1", "source": {"vertex": "v1"}, "target": {"vertex": "v0"}},
        ],
    }
    graph = chart_from_dict(data)
    assert graph.vertex("v0").y < graph.vertex("v1").y


@pytest.mark.parametrize(
    "text",
    [
        "[",
        '{"vertices": []}',
        '{"degree": 2, "vertices": [{"id": "v0", "x": 0.5, "y": 0.5}]}',
        '{"degree": 2, "edges": [{"label": "e1", "source": null, "target": null}]}',
        '{"degree": 2, "edges": [{"label": "g1", "source": {"boundary": "left", "index": 0}, '
        '"target": {"boundary": "top", "index": 0}}]}',
        '{"degree": 2, "edges": [{"label": "g1", "source": {"vertex": "v9"}, '
        '"target": {"boundary": "top", "index": 0}}]}',
    ],
)
def test_malformed_chart_files(text):
    with pytest.raises(FormatError):
        loads_chart(text)


# --- Invariants ---


def test_disk_pair_invariants():
    inv = surface_invariants(CORPUS["e-loop-normal"])
    assert inv.to_dict() == {
        "euler_characteristic": 2,
        "boundary_components": 2,
        "trivial_boundary": True,
        "interval_components_start": 2,
        "circle_components_start": 0,
    }


def test_two_merges_count_four_disks():
    inv = surface_invariants(CORPUS["xtri-merges"])
    assert inv.euler_characteristic == 4
    assert inv.circle_components_start == 2
    assert not inv.trivial_boundary


@pytest.mark.parametrize("degree", [1, 2, 3, 5])
def test_product_sheets(degree):
    inv = surface_invariants(ChartMovie(degree, parse_word("1", degree)))
    assert (inv.euler_characteristic, inv.boundary_components, inv.trivial_boundary) == (degree, degree, True)


def test_band_pair_invariants():
    assert surface_invariants(CORPUS["black-g-pos"]).euler_characteristic == 0
    assert surface_invariants(CORPUS["g-loop"]).euler_characteristic == 2


def test_caps_need_normalizing():
    with pytest.raises(MovieError):
        surface_invariants(CORPUS["e-loop-caps"])
    assert surface_invariants_extended(CORPUS["e-loop-caps"]) == surface_invariants(CORPUS["e-loop-normal"])


@pytest.mark.parametrize("name", NORMAL_FORM)
def test_trivial_boundary_means_n_components(name):
    inv = surface_invariants(CORPUS[name])
    if inv.trivial_boundary:
        assert inv.boundary_components == CORPUS[name].degree


@pytest.mark.parametrize("name", ["xstar-3", "xstar-4", "xstar-5", "square6", "square-star-right"])
def test_composite_expansion_keeps_invariants(name):
    m = CORPUS[name]
    assert surface_invariants(expand_composite_vertices(m)) == surface_invariants(m)


@pytest.mark.parametrize("m,below", [(3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 3)])
def test_every_xstar_tree_has_same_invariants(m, below):
    star = make_event(K.XSTAR, i=1, m=m, below=below)
    start = parse_word(" ".join(["e1"] * below), 2)
    reference = surface_invariants(ChartMovie(2, start, (star,)))
    assert reference.euler_characteristic == 2 + m - 2
    for chain in xstar_tree_expansions(star):
        assert surface_invariants(ChartMovie(2, start, tuple(chain))) == reference


def test_euler_characteristic_adds_along_interfaces():
    names = [name for name in NORMAL_FORM if CORPUS[name].degree == 2]
    glued = 0
    for a in names:
        for b in names:
            first, second = CORPUS[a], CORPUS[b]
            if final_word(first) != second.start:
                continue
            both = surface_invariants(concat_movies(first, second)).euler_characteristic
            parts = surface_invariants(first).euler_characteristic + surface_invariants(second).euler_characteristic
            assert both == parts - 2
            glued += 1
    assert glued > 0
