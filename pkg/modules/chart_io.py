"""
Chart Files
JSON load/save for chart graphs; missing coordinates and polylines are laid out automatically
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from modules.converters import ChartEdge, ChartGraph, ChartVertex, Endpoint
from modules.errors import FormatError

logger = logging.getLogger(__name__)

BUMP = 0.1
SIDE_Y = {"bottom": 0.0, "top": 1.0}


def _endpoint_to_dict(end: Optional[Endpoint]) -> Optional[Dict[str, Any]]:
    return None if end is None else end.to_dict()


def chart_to_dict(graph: ChartGraph) -> Dict[str, Any]:
    return {
        "degree": graph.degree,
        "vertices": [
            {"id": v.id, "type": v.vtype, "x": round(v.x, 6), "y": round(v.y, 6)} for v in graph.vertices
        ],
        "edges": [
            {
                "id": edge.id,
                "label": edge.label,
                "source": _endpoint_to_dict(edge.source),
                "target": _endpoint_to_dict(edge.target),
                "points": [[round(x, 6), round(y, 6)] for x, y in edge.points],
            }
            for edge in graph.edges
        ],
    }


def _endpoint_from_dict(data: Optional[Dict[str, Any]]) -> Optional[Endpoint]:
    if data is None:
        return None
    if "vertex" in data:
        return Endpoint("vertex", str(data["vertex"]))
    side = data.get("boundary")
    if side not in SIDE_Y or not isinstance(data.get("index"), int):
        raise FormatError(f"bad endpoint {data!r}")
    return Endpoint(side, data["index"])


def _boundary_x(edges: List[Dict[str, Any]]) -> Dict[Tuple[str, int], float]:
    """x coordinate of every boundary point: given explicitly or spaced evenly along its side."""
    given: Dict[Tuple[str, int], float] = {}
    counts = {"bottom": 0, "top": 0}
    for item in edges:
        for key in ("source", "target"):
            end = item.get(key)
            if end and end.get("boundary") in counts and isinstance(end.get("index"), int):
                side, index = end["boundary"], end["index"]
                counts[side] = max(counts[side], index + 1)
                if "x" in end:
                    given[(side, index)] = float(end["x"])
    spaced = {}
    for side, count in counts.items():
        for index, x in enumerate(np.linspace(0.0, 1.0, count + 2)[1:-1]):
            spaced[(side, index)] = given.get((side, index), float(x))
    return spaced


def _layout_points(item: Dict[str, Any], ends: Tuple[Tuple[float, float], Tuple[float, float]]) -> List[Tuple]:
    (x0, y0), (x1, y1) = ends
    if y0 != y1:
        return [(x0, y0), (x1, y1)]
    # equal heights: bend toward the interior so the edge has an extremum, not a flat run
    dy = BUMP if y0 < 0.5 else -BUMP
    logger.warning(f"edge {item.get('id')}: ends at equal height {y0}, adding a bump")
    return [(x0, y0), ((x0 + x1) / 2, y0 + dy), (x1, y1)]


def _vertex_levels(ids: List[str], ends: List[Tuple[Optional[Endpoint], Optional[Endpoint]]]) -> Dict[str, int]:
    """Level of every vertex: topological generation along vertex-to-vertex edges."""
    dag = nx.DiGraph()
    dag.add_nodes_from(ids)
    for source, target in ends:
        if source and target and source.kind == target.kind == "vertex" and source.ref != target.ref:
            dag.add_edge(source.ref, target.ref)
    if nx.is_directed_acyclic_graph(dag):
        return {v: level for level, generation in enumerate(nx.topological_generations(dag)) for v in generation}
    logger.warning("vertex edges form a directed cycle, layering vertices by distance instead")
    undirected = dag.to_undirected()
    levels: Dict[str, int] = {}
    for component in sorted(nx.connected_components(undirected), key=min):
        levels.update(nx.single_source_shortest_path_length(undirected, min(component)))
    return levels


def _place_vertices(
    raw_vertices: List[Dict[str, Any]],
    ends: List[Tuple[Optional[Endpoint], Optional[Endpoint]]],
    boundary_x: Dict[Tuple[str, int], float],
) -> Dict[str, Tuple[float, float]]:
    """Coordinates of every vertex: given explicitly, or spread over levels and ordered by their neighbours."""
    ids = [str(item["id"]) for item in raw_vertices]
    where = {
        str(item["id"]): (float(item["x"]), float(item["y"]))
        for item in raw_vertices if "x" in item and "y" in item
    }
    missing = [v for v in ids if v not in where]
    if not missing:
        return where
    levels = _vertex_levels(ids, ends)
    heights = np.linspace(0.0, 1.0, max(levels.values()) + 3)[1:-1]
    neighbours: Dict[str, List[Endpoint]] = {v: [] for v in ids}
    for source, target in ends:
        for near, far in ((source, target), (target, source)):
            if near and far and near.kind == "vertex" and near.ref in neighbours:
                neighbours[near.ref].append(far)

    def known_x(end: Endpoint) -> Optional[float]:
        if end.kind == "vertex":
            return where[end.ref][0] if end.ref in where else None
        return boundary_x.get((end.kind, end.ref))

    for level in sorted({levels[v] for v in missing}):
        row = [v for v in missing if levels[v] == level]
        centre = {}
        for v in row:
            xs = [x for x in map(known_x, neighbours[v]) if x is not None]
            centre[v] = float(np.mean(xs)) if xs else 0.5
        row.sort(key=lambda v: (centre[v], v))
        for v, x in zip(row, np.linspace(0.0, 1.0, len(row) + 2)[1:-1]):
            where[v] = (float(x), float(heights[level]))
    logger.info(f"laid out {len(missing)} vertices without coordinates")
    return where


def chart_from_dict(data: Dict[str, Any]) -> ChartGraph:
    try:
        degree = int(data["degree"])
        raw_vertices = data.get("vertices", [])
        raw_edges = data.get("edges", [])
    except (KeyError, TypeError, ValueError) as err:
        raise FormatError(f"malformed chart: {err}") from err

    for item in raw_vertices:
        if "id" not in item or "type" not in item:
            raise FormatError(f"vertex {item!r} needs an id and a type")
    ends = [(_endpoint_from_dict(item.get("source")), _endpoint_from_dict(item.get("target"))) for item in raw_edges]
    boundary_x = _boundary_x(raw_edges)
    where = _place_vertices(raw_vertices, ends, boundary_x)
    vertices = [ChartVertex(str(item["id"]), str(item["type"]), *where[str(item["id"])]) for item in raw_vertices]

    def locate(end: Optional[Endpoint]) -> Tuple[float, float]:
        if end.kind == "vertex":
            if end.ref not in where:
                raise FormatError(f"unknown vertex {end.ref!r}")
            return where[end.ref]
        return boundary_x[(end.kind, end.ref)], SIDE_Y[end.kind]

    edges = []
    for number, (item, (source, target)) in enumerate(zip(raw_edges, ends)):
        edge_id = str(item.get("id", f"c{number}"))
        if "label" not in item:
            raise FormatError(f"edge {edge_id} has no label")
        points = item.get("points")
        if points:
            polyline = tuple((float(x), float(y)) for x, y in points)
        elif source is None or target is None:
            raise FormatError(f"edge {edge_id}: a closed loop needs explicit points")
        else:
            polyline = tuple(_layout_points(item, (locate(source), locate(target))))
        edges.append(ChartEdge(edge_id, str(item["label"]), source, target, polyline))
    return ChartGraph(degree, tuple(vertices), tuple(edges))


def dumps_chart(graph: ChartGraph) -> str:
    return json.dumps(chart_to_dict(graph), indent=2) + "\n"


def loads_chart(text: str) -> ChartGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"chart file is not JSON: {err}") from err
    return chart_from_dict(data)


def load_chart(path: Path) -> ChartGraph:
    with open(path, "r", encoding="utf-8") as f:
        graph = loads_chart(f.read())
    logger.debug(f"loaded {path}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
    return graph


def save_chart(graph: ChartGraph, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_chart(graph))
    logger.info(f"saved chart to {path}")
