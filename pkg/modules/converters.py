"""
Chart Conversions
Leveled movies to planar chart graphs and back, plus surface invariants of a movie
"""

import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from modules.chart_movie import (
    E_CAPS,
    ChartMovie,
    Event,
    EventKind,
    compile_white_rotations,
    event_clause,
    event_sides,
    final_word,
    make_event,
    movie_slices,
    normalize_caps,
    require_valid,
)
from modules.errors import ChartGraphError, EventError, MovieError, SweepError
from modules.word_algebra import Letter, Word, brauer_image, e, g, word_to_text

logger = logging.getLogger(__name__)

K = EventKind
Point = Tuple[float, float]

# vertical offset given to points of a horizontal polyline run
TILT = 1e-9


@dataclass(frozen=True)
class Endpoint:
    kind: str  # "vertex", "bottom" or "top"
    ref: Any

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "vertex":
            return {"vertex": self.ref}
        return {"boundary": self.kind, "index": self.ref}


@dataclass(frozen=True)
class ChartVertex:
    id: str
    vtype: str
    x: float
    y: float


@dataclass(frozen=True)
class ChartEdge:
    """A labeled edge; g-edges are oriented from source to target along `points`."""

    id: str
    label: str
    source: Optional[Endpoint]
    target: Optional[Endpoint]
    points: Tuple[Point, ...]

    @property
    def oriented(self) -> bool:
        return self.label.startswith("g")

    @property
    def index(self) -> int:
        return int(self.label[1:])

    @property
    def is_loop(self) -> bool:
        return self.source is None and self.target is None


@dataclass(frozen=True)
class ChartGraph:
    degree: int
    vertices: Tuple[ChartVertex, ...] = ()
    edges: Tuple[ChartEdge, ...] = ()

    def vertex(self, vertex_id: str) -> ChartVertex:
        for vertex in self.vertices:
            if vertex.id == vertex_id:
                return vertex
        raise ChartGraphError(f"no vertex {vertex_id!r}")


@dataclass(frozen=True)
class SurfaceInvariants:
    euler_characteristic: int
    boundary_components: int
    trivial_boundary: bool
    interval_components_start: int
    circle_components_start: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "euler_characteristic": self.euler_characteristic,
            "boundary_components": self.boundary_components,
            "trivial_boundary": self.trivial_boundary,
            "interval_components_start": self.interval_components_start,
            "circle_components_start": self.circle_components_start,
        }


# --- Movie -> chart ---


def _node_letter(letter: Letter) -> str:
    return f"{'e' if letter.is_hook else 'g'}{letter.index}"


def movie_to_chart_graph(m: ChartMovie) -> ChartGraph:
    if any(event.kind in E_CAPS for event in m.events):
        raise MovieError("movie has e-edge caps or cups; normalize caps first")
    require_valid(m, allow_caps=False)
    slices = movie_slices(m)
    count = len(m.events)

    def level_y(k: int) -> float:
        return (k + 0.5) / (count + 1)

    def event_y(j: int) -> float:
        return (j + 1) / (count + 1)

    def px(k: int, q: int) -> float:
        return (q + 1) / (len(slices[k]) + 1)

    graph = nx.Graph()
    for k, word in enumerate(slices):
        for q, letter in enumerate(word.letters):
            graph.add_node(("p", k, q), role="point", pos=(px(k, q), level_y(k)), letter=letter)
    for q in range(len(slices[0])):
        graph.add_node(("b", q), role="bottom", pos=(px(0, q), 0.0), index=q)
        graph.add_edge(("b", q), ("p", 0, q))
    for q in range(len(slices[-1])):
        graph.add_node(("t", q), role="top", pos=(px(count, q), 1.0), index=q)
        graph.add_edge(("p", count, q), ("t", q))

    for j, event in enumerate(m.events):
        source, target = event_sides(event, m.degree)
        s, t, p = len(source), len(target), event.position
        for q in range(len(slices[j])):
            if q < p:
                graph.add_edge(("p", j, q), ("p", j + 1, q))
            elif q >= p + s:
                graph.add_edge(("p", j, q), ("p", j + 1, q - s + t))
        if event.kind is K.LEVEL:
            continue
        if event.kind is K.GCAP:
            x = (px(j + 1, p) + px(j + 1, p + 1)) / 2
            graph.add_node(("x", j), role="extremum", pos=(x, event_y(j)))
            graph.add_edge(("p", j + 1, p), ("x", j))
            graph.add_edge(("x", j), ("p", j + 1, p + 1))
            continue
        if event.kind is K.GCUP:
            x = (px(j, p) + px(j, p + 1)) / 2
            graph.add_node(("x", j), role="extremum", pos=(x, event_y(j)))
            graph.add_edge(("p", j, p), ("x", j))
            graph.add_edge(("x", j), ("p", j, p + 1))
            continue
        xs = [px(j, p + q) for q in range(s)] + [px(j + 1, p + q) for q in range(t)]
        graph.add_node(("v", j), role="vertex", pos=(sum(xs) / len(xs), event_y(j)), vtype=event_clause(event))
        for q in range(s):
            graph.add_edge(("p", j, p + q), ("v", j))
        for q in range(t):
            graph.add_edge(("v", j), ("p", j + 1, p + q))

    vertices = tuple(
        ChartVertex(f"v{node[1]}", data["vtype"], *data["pos"])
        for node, data in sorted(graph.nodes(data=True))
        if data["role"] == "vertex"
    )
    edges = tuple(
        _chain_to_edge(graph, f"c{number}", chain) for number, chain in enumerate(_trace_chains(graph))
    )
    logger.debug(f"chart from movie: {len(vertices)} vertices, {len(edges)} edges")
    return ChartGraph(m.degree, vertices, edges)


def _trace_chains(graph: nx.Graph) -> List[List[Tuple]]:
    interior = ("point", "extremum")
    visited = set()
    chains = []
    for start in sorted(n for n, d in graph.nodes(data=True) if d["role"] not in interior):
        for first in sorted(graph.neighbors(start)):
            if frozenset((start, first)) in visited:
                continue
            visited.add(frozenset((start, first)))
            chain, prev, cur = [start], start, first
            while graph.nodes[cur]["role"] in interior:
                chain.append(cur)
                nxt = next(n for n in graph.neighbors(cur) if n != prev)
                visited.add(frozenset((cur, nxt)))
                prev, cur = cur, nxt
            chain.append(cur)
            chains.append(chain)
    # closed loops: cycles through interior nodes only
    for start in sorted(graph.nodes):
        if all(frozenset((start, n)) in visited for n in graph.neighbors(start)):
            continue
        cycle, prev, cur = [start], None, start
        while True:
            nxt = next(n for n in sorted(graph.neighbors(cur)) if n != prev and frozenset((cur, n)) not in visited)
            visited.add(frozenset((cur, nxt)))
            if nxt == start:
                break
            cycle.append(nxt)
            prev, cur = cur, nxt
        low = min(range(len(cycle)), key=lambda k: (graph.nodes[cycle[k]]["pos"][1], cycle[k]))
        cycle = cycle[low:] + cycle[:low]
        chains.append(cycle + [cycle[0]])
    return chains


def _chain_to_edge(graph: nx.Graph, edge_id: str, chain: List[Tuple]) -> ChartEdge:
    nodes = graph.nodes
    at = next(k for k, n in enumerate(chain) if nodes[n]["role"] == "point")
    letter = nodes[chain[at]]["letter"]
    if not letter.is_hook:
        before = nodes[chain[at - 1]]["pos"][1] if at > 0 else nodes[chain[-2]]["pos"][1]
        after = nodes[chain[at + 1]]["pos"][1]
        if (letter.sign == 1) != (after > before):
            chain = list(reversed(chain))

    def endpoint(node) -> Optional[Endpoint]:
        role = nodes[node]["role"]
        if role == "vertex":
            return Endpoint("vertex", f"v{node[1]}")
        if role in ("bottom", "top"):
            return Endpoint(role, nodes[node]["index"])
        return None

    closed = chain[0] == chain[-1] and nodes[chain[0]]["role"] in ("point", "extremum")
    source = None if closed else endpoint(chain[0])
    target = None if closed else endpoint(chain[-1])
    points = tuple(tuple(nodes[n]["pos"]) for n in chain)
    return ChartEdge(edge_id, _node_letter(letter), source, target, points)


# --- Local vertex checks ---


@dataclass(frozen=True)
class EdgeEnd:
    edge: ChartEdge
    outgoing: bool
    angle: float

    @property
    def kind(self) -> str:
        return self.edge.label[0]

    @property
    def index(self) -> int:
        return self.edge.index


def _angle(origin: Point, towards: Point) -> float:
    return math.atan2(towards[1] - origin[1], towards[0] - origin[0]) % (2 * math.pi)


def vertex_ends(graph: ChartGraph, vertex: ChartVertex) -> List[EdgeEnd]:
    """Edge ends at a vertex in counterclockwise order."""
    ends = []
    for edge in graph.edges:
        if edge.source == Endpoint("vertex", vertex.id):
            ends.append(EdgeEnd(edge, True, _angle((vertex.x, vertex.y), edge.points[1])))
        if edge.target == Endpoint("vertex", vertex.id):
            ends.append(EdgeEnd(edge, False, _angle((vertex.x, vertex.y), edge.points[-2])))
    return sorted(ends, key=lambda end: end.angle)


def _cyclic_variants(sequence: Sequence) -> List[Tuple]:
    items = list(sequence)
    variants = []
    for base in (items, items[::-1]):
        for shift in range(len(base)):
            variants.append(tuple(base[shift:] + base[:shift]))
    return variants


def _matches_reading(ends: List[EdgeEnd], pattern: Sequence[Tuple[str, str]]) -> bool:
    """Compare the cyclic label order with a pattern over symbolic indices 'i', 'j'."""
    seen = tuple((end.kind, end.index) for end in ends)
    indices = sorted({end.index for end in ends})
    if len(indices) != 2 or abs(indices[0] - indices[1]) != 1:
        return False
    for i, j in (indices, indices[::-1]):
        concrete = [(kind, i if sym == "i" else j) for kind, sym in pattern]
        if seen in _cyclic_variants(concrete):
            return True
    return False


H_READING = [("g", "i"), ("g", "j"), ("e", "i"), ("e", "i"), ("e", "j")]
K_READING = [("g", "j"), ("g", "i"), ("e", "j"), ("g", "i"), ("g", "j"), ("e", "i")]


def _paired_g_coherent(ends: List[EdgeEnd]) -> bool:
    """Cyclically adjacent g_i, g_j ends both point toward or both away from the vertex."""
    count = len(ends)
    for q in range(count):
        a, b = ends[q], ends[(q + 1) % count]
        if a.kind == b.kind == "g" and a.index != b.index and a.outgoing != b.outgoing:
            return False
    return True


def _check_vertex(graph: ChartGraph, vertex: ChartVertex) -> List[str]:
    ends = vertex_ends(graph, vertex)
    kinds = [end.kind for end in ends]
    indices = [end.index for end in ends]
    vt = vertex.vtype
    tag = f"vertex {vertex.id} ({vt})"
    degree = len(ends)

    def need(condition: bool, message: str) -> List[str]:
        return [] if condition else [f"{tag}: {message}"]

    if vt in ("a", "d"):
        return need(degree == 1 and kinds[0] == ("g" if vt == "a" else "e"), "needs exactly one "
                    + ("g-edge" if vt == "a" else "e-edge"))
    if vt == "e":
        return need(degree == 2 and sorted(kinds) == ["e", "g"] and len(set(indices)) == 1,
                    "needs one g_i and one e_i edge")
    if vt in ("b", "f"):
        if degree != 4:
            return need(False, "needs degree 4")
        alternating = ends[0].edge.label[1:] == ends[2].edge.label[1:] and kinds[0] == kinds[2] \
            and ends[1].edge.label[1:] == ends[3].edge.label[1:] and kinds[1] == kinds[3]
        far = abs(indices[0] - indices[1]) > 1
        all_g = all(k == "g" for k in kinds)
        coherent = all(ends[q].outgoing != ends[q + 2].outgoing for q in (0, 1) if kinds[q] == "g")
        return (
            need(alternating, "opposite edges must share a label")
            + need(far, "needs |i-j| > 1")
            + need(all_g if vt == "b" else not all_g, "labels do not fit the crossing type")
            + need(coherent, "g-edges must pass straight through")
        )
    if vt == "c":
        if degree != 6 or any(k != "g" for k in kinds):
            return need(False, "needs six g-edges")
        alternating = all(indices[q] == indices[q % 2] for q in range(6)) and abs(indices[0] - indices[1]) == 1
        flags = [end.outgoing for end in ends]
        three = any(all(flags[(s + q) % 6] == flags[s] for q in range(3)) and
                    all(flags[(s + 3 + q) % 6] != flags[s] for q in range(3)) for s in range(6))
        return need(alternating, "labels must alternate g_i, g_j with |i-j| = 1") + need(
            three, "three consecutive edges must point in and three out")
    if vt == "g":
        counts = sorted(indices.count(x) for x in set(indices))
        return need(degree == 4 and all(k == "e" for k in kinds) and counts == [1, 3]
                    and abs(max(indices) - min(indices)) == 1, "needs three e_i edges and one e_j edge")
    if vt == "h":
        return need(degree == 5 and _matches_reading(ends, H_READING),
                    "labels must read g_i, g_j, e_i, e_i, e_j") + need(
            _paired_g_coherent(ends), "g_i and g_j edges must both point toward or both away from the vertex")
    if vt == "k":
        return need(degree == 6 and _matches_reading(ends, K_READING),
                    "labels must read g_j, g_i, e_j, g_i, g_j, e_i") + need(
            _paired_g_coherent(ends), "each g_i, g_j pair must point toward or away from the vertex together")
    if vt in ("i", "i'"):
        return need((degree == 3 if vt == "i" else degree >= 3) and all(k == "e" for k in kinds)
                    and len(set(indices)) == 1, "needs e-edges of one index")
    if vt in ("j", "j'"):
        return need((degree == 3 if vt == "j" else degree >= 3) and kinds.count("e") == 2
                    and len(set(indices)) == 1, "needs two e_i edges and g_i edges")
    return [f"{tag}: unknown vertex type"]


def validate_chart_graph(graph: ChartGraph) -> List[str]:
    problems = []
    ids = {vertex.id for vertex in graph.vertices}
    for edge in graph.edges:
        if edge.label[:1] not in ("g", "e") or not edge.label[1:].isdigit():
            problems.append(f"edge {edge.id}: bad label {edge.label!r}")
            continue
        if not 1 <= edge.index <= graph.degree - 1:
            problems.append(f"edge {edge.id}: label {edge.label} out of range for degree {graph.degree}")
        if len(edge.points) < 2:
            problems.append(f"edge {edge.id}: needs at least two points")
        for end in (edge.source, edge.target):
            if end is not None and end.kind == "vertex" and end.ref not in ids:
                problems.append(f"edge {edge.id}: unknown vertex {end.ref!r}")
        if (edge.source is None) != (edge.target is None):
            problems.append(f"edge {edge.id}: a loop has neither endpoint")
    if problems:
        return problems
    for vertex in graph.vertices:
        problems.extend(_check_vertex(graph, vertex))
    return problems


# --- Chart -> movie ---


@dataclass
class _Piece:
    """A y-monotone stretch of an edge, points ordered bottom to top."""

    edge: ChartEdge
    seq: int
    points: List[Point]
    letter: Letter
    lower: Tuple
    upper: Tuple

    def x_at(self, y: float) -> float:
        pts = self.points
        if y <= pts[0][1]:
            return pts[0][0]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if y0 <= y <= y1:
                return x0 if y1 == y0 else x0 + (x1 - x0) * (y - y0) / (y1 - y0)
        return pts[-1][0]


def _end_key(end: Optional[Endpoint], edge: ChartEdge, index: int) -> Tuple:
    if end is None:
        return ("ext", edge.id, index)
    return (end.kind, end.ref)


def _tilt_flat_runs(edge: ChartEdge, pts: List[Point]) -> List[Point]:
    """Shift points of horizontal runs by TILT so every segment climbs or falls, following the nearest slope."""
    slopes = [b[1] - a[1] for a, b in zip(pts, pts[1:])]
    if all(slopes):
        return pts
    logger.warning(f"edge {edge.id} has a horizontal segment, tilting it")
    out = list(pts)
    for k, slope in enumerate(slopes):
        if slope:
            continue
        ahead = next((1.0 if t > 0 else -1.0 for t in slopes[k + 1:] if t), 0.0)
        behind = next((1.0 if t > 0 else -1.0 for t in reversed(slopes[:k]) if t), 0.0)
        out[k + 1] = (out[k + 1][0], out[k][1] + (ahead or behind or 1.0) * TILT)
    return out


def _split_pieces(edge: ChartEdge) -> Tuple[List[_Piece], List[Point]]:
    pts = list(edge.points)
    if edge.is_loop:
        ring = pts[:-1] if pts[0] == pts[-1] else pts
        # start at a lowest point not reached by a horizontal run
        low = min(range(len(ring)), key=lambda k: (ring[k][1], ring[k - 1][1] == ring[k][1], ring[k][0]))
        ring = ring[low:] + ring[:low]
        pts = ring + [ring[0]]
    pts = _tilt_flat_runs(edge, pts)
    ys = [p[1] for p in pts]
    cuts = [0] + [k for k in range(1, len(pts) - 1) if (ys[k] - ys[k - 1]) * (ys[k + 1] - ys[k]) < 0]
    cuts.append(len(pts) - 1)

    def key(k: int) -> Tuple:
        if k == 0:
            return _end_key(edge.source, edge, 0)
        if k == len(pts) - 1:
            return _end_key(edge.target, edge, 0) if not edge.is_loop else ("ext", edge.id, 0)
        return ("ext", edge.id, k)

    pieces = []
    for seq, (a, b) in enumerate(zip(cuts, cuts[1:])):
        up = ys[b] > ys[a]
        segment = pts[a:b + 1]
        if edge.oriented:
            letter = g(edge.index, 1 if up else -1)
        else:
            letter = e(edge.index)
        lower, upper = (key(a), key(b)) if up else (key(b), key(a))
        pieces.append(_Piece(edge, seq, segment if up else segment[::-1], letter, lower, upper))
    return pieces, pts


TYPE_KINDS = {
    "a": [K.BLACK_G], "b": [K.CROSSING], "f": [K.CROSSING], "c": [K.WHITE], "d": [K.XDOT],
    "e": [K.SADDLE], "g": [K.SQUARE8], "h": [K.SQUARE5], "i": [K.XTRI], "j": [K.BRANCH],
    "k": [K.SQUARE6], "i'": [K.XSTAR], "j'": [K.SQUARE_STAR],
}
SIGNS = (1, -1)
FLAGS = (False, True)


def _candidates(kind: EventKind, source: Tuple[Letter, ...], target: Tuple[Letter, ...]) -> Iterator[Event]:
    letters = source + target
    indices = sorted({letter.index for letter in letters})
    pairs = [(i, j) for i in indices for j in indices if i != j]
    if kind is K.BLACK_G or kind is K.SADDLE:
        for i, eps, rev in product(indices, SIGNS, FLAGS):
            yield make_event(kind, 0, i=i, eps=eps, reverse=rev)
    elif kind is K.XDOT or kind is K.XTRI:
        for i, rev in product(indices, FLAGS):
            yield make_event(kind, 0, i=i, reverse=rev)
    elif kind is K.CROSSING and len(source) == 2:
        yield make_event(kind, 0, left=source[0].token, right=source[1].token)
    elif kind is K.WHITE:
        for variant, eps, rev, (i, j) in product(("R5", "D15", "D16", "D17"), SIGNS, FLAGS, pairs):
            if variant != "R5" or eps == 1:
                yield make_event(kind, 0, i=i, j=j, eps=eps, variant=variant, reverse=rev)
    elif kind is K.SQUARE8:
        for rev, (i, j) in product(FLAGS, pairs):
            yield make_event(kind, 0, i=i, j=j, reverse=rev)
    elif kind is K.SQUARE5:
        for mirror, eps, rev, (i, j) in product(FLAGS, SIGNS, FLAGS, pairs):
            yield make_event(kind, 0, i=i, j=j, eps=eps, mirror=mirror, reverse=rev)
    elif kind is K.SQUARE6:
        for eps, delta, rev, (i, j) in product(SIGNS, SIGNS, FLAGS, pairs):
            yield make_event(kind, 0, i=i, j=j, eps=eps, delta=delta, reverse=rev)
    elif kind is K.BRANCH:
        for side, eps, rev, i in product(("left", "right"), SIGNS, FLAGS, indices):
            yield make_event(kind, 0, i=i, eps=eps, side=side, reverse=rev)
    elif kind is K.XSTAR and len(indices) == 1:
        yield make_event(kind, 0, i=indices[0], m=len(letters), below=len(source))
    elif kind is K.SQUARE_STAR and len(indices) == 1:
        rev = len(target) == 1
        grown = source if rev else target
        gs = [letter for letter in grown if not letter.is_hook]
        side = "left" if grown and grown[-1].is_hook else "right"
        signs = "".join("+" if letter.sign == 1 else "-" for letter in gs)
        yield make_event(kind, 0, i=indices[0], signs=signs, side=side, reverse=rev)


def infer_event(vtype: str, position: int, source: Tuple[Letter, ...], target: Tuple[Letter, ...],
                degree: int) -> Event:
    """The event of a vertex type that rewrites `source` into `target`."""
    for kind in TYPE_KINDS.get(vtype, []):
        for candidate in _candidates(kind, source, target):
            try:
                sides = event_sides(candidate, degree)
            except EventError:
                continue
            if sides == (source, target):
                return candidate.at(position)
    have = " ".join(x.token for x in source) or "1"
    want = " ".join(x.token for x in target) or "1"
    raise SweepError(f"type ({vtype}) vertex reads '{have}' -> '{want}', not a canonical reading")


def chart_graph_to_movie(graph: ChartGraph, canonical_white: bool = False) -> ChartMovie:
    problems = validate_chart_graph(graph)
    if problems:
        raise ChartGraphError("; ".join(problems))

    pieces: List[_Piece] = []
    items: Dict[Tuple, Dict[str, Any]] = {}
    for vertex in graph.vertices:
        items[("vertex", vertex.id)] = {"x": vertex.x, "y": vertex.y, "vtype": vertex.vtype, "tie": (0, vertex.id)}
    for edge in graph.edges:
        edge_pieces, pts = _split_pieces(edge)
        pieces.extend(edge_pieces)
        for piece in edge_pieces:
            for key in (piece.lower, piece.upper):
                if key[0] == "ext" and key not in items:
                    x, y = pts[key[2]]
                    items[key] = {"x": x, "y": y, "vtype": None, "tie": (1, edge.id, key[2]), "edge": edge}

    consumed: Dict[Tuple, List[_Piece]] = {key: [] for key in items}
    produced: Dict[Tuple, List[_Piece]] = {key: [] for key in items}
    active: List[_Piece] = []
    finals: List[_Piece] = []
    for piece in pieces:
        if piece.lower[0] == "top" or piece.upper[0] == "bottom":
            raise SweepError(f"edge {piece.edge.id} leaves the square through the wrong side")
        if piece.lower[0] == "bottom":
            active.append(piece)
        else:
            produced[piece.lower].append(piece)
        if piece.upper[0] == "top":
            finals.append(piece)
        else:
            consumed[piece.upper].append(piece)
    active.sort(key=lambda pc: pc.points[0][0])
    finals.sort(key=lambda pc: pc.points[-1][0])

    start = Word(graph.degree, tuple(pc.letter for pc in active))
    events: List[Event] = []
    pending = sorted(items, key=lambda key: (items[key]["y"], items[key]["tie"]))
    while pending:
        ids = {id(pc) for pc in active}
        ready = next((key for key in pending if all(id(pc) in ids for pc in consumed[key])), None)
        if ready is None:
            raise SweepError("unresolvable vertical alignment: no item can be swept next")
        pending.remove(ready)
        item = items[ready]
        below = sorted(consumed[ready], key=lambda pc: next(n for n, a in enumerate(active) if a is pc))
        if below:
            slots = [next(n for n, a in enumerate(active) if a is pc) for pc in below]
            if slots != list(range(slots[0], slots[0] + len(slots))):
                raise SweepError(f"edges entering {ready} are not adjacent in the sweep")
            position = slots[0]
        else:
            position = sum(1 for pc in active if pc.x_at(item["y"]) < item["x"])
        above = produced[ready]
        if above:
            step = min(pc.points[1][1] - item["y"] for pc in above) / 2
            above = sorted(above, key=lambda pc: pc.x_at(item["y"] + step))
        source = tuple(pc.letter for pc in below)
        target = tuple(pc.letter for pc in above)
        if item["vtype"] is None:
            events.append(_extremum_event(item["edge"], position, source, target))
        else:
            events.append(infer_event(item["vtype"], position, source, target, graph.degree))
        active[position:position + len(below)] = above

    if [id(pc) for pc in active] != [id(pc) for pc in finals]:
        raise SweepError("sweep does not end on the top boundary points")
    movie = ChartMovie(graph.degree, start, tuple(events))
    require_valid(movie)
    logger.debug(f"movie from chart: start '{word_to_text(start)}', {len(events)} events")
    return compile_white_rotations(movie) if canonical_white else movie


def _extremum_event(edge: ChartEdge, position: int, source, target) -> Event:
    pair = target or source
    if len(pair) != 2 or (source and target):
        raise SweepError(f"extremum of edge {edge.id} does not open or close a pair")
    if edge.oriented:
        return make_event(K.GCAP if target else K.GCUP, position, i=edge.index, eps=pair[0].sign)
    return make_event(K.ECAP if target else K.ECUP, position, i=edge.index)


# --- Combinatorial comparison ---


def chart_graph_to_networkx(graph: ChartGraph) -> nx.MultiGraph:
    """Vertices, boundary points and one midpoint node per edge carrying its label."""
    out = nx.MultiGraph()
    for vertex in graph.vertices:
        out.add_node(("v", vertex.id), kind=f"vertex:{vertex.vtype}")

    def node_of(end: Endpoint):
        if end.kind == "vertex":
            return ("v", end.ref)
        node = (end.kind, end.ref)
        out.add_node(node, kind=f"{end.kind}:{end.ref}")
        return node

    for edge in graph.edges:
        mid = ("c", edge.id)
        out.add_node(mid, kind=f"edge:{edge.label}" + (":loop" if edge.is_loop else ""))
        if edge.is_loop:
            continue
        out.add_edge(node_of(edge.source), mid, role="tail" if edge.oriented else "end")
        out.add_edge(mid, node_of(edge.target), role="head" if edge.oriented else "end")
    return out


def charts_isomorphic(a: ChartGraph, b: ChartGraph) -> bool:
    return a.degree == b.degree and nx.is_isomorphic(
        chart_graph_to_networkx(a),
        chart_graph_to_networkx(b),
        node_match=lambda x, y: x["kind"] == y["kind"],
        edge_match=lambda x, y: sorted(d["role"] for d in x.values()) == sorted(d["role"] for d in y.values()),
    )


# --- Invariants ---


BAND_KINDS = (K.BLACK_G, K.XDOT, K.SADDLE)


def _boundary_components(start: Word, end: Word) -> int:
    n = start.degree
    tau0, tau1 = brauer_image(start), brauer_image(end)
    graph = nx.Graph()
    for label, diagram in (("t0", tau0), ("t1", tau1)):
        for point, partner in enumerate(diagram.pairing):
            graph.add_edge((label, point), (label, partner))
    for q in range(n):
        graph.add_edge(("t0", q), ("t1", q))
        graph.add_edge(("t0", n + q), ("t1", n + q))
    return nx.number_connected_components(graph) + tau0.loops + tau1.loops


def surface_invariants(m: ChartMovie) -> SurfaceInvariants:
    if any(event.kind in E_CAPS for event in m.events):
        raise MovieError("movie has e-edge caps or cups; normalize caps first")
    require_valid(m, allow_caps=False)
    disks = sum(1 for ev in m.events if ev.kind is K.XTRI)
    disks += sum(ev.param("m") - 2 for ev in m.events if ev.kind is K.XSTAR)
    bands = sum(1 for ev in m.events if ev.kind in BAND_KINDS)
    tau0 = brauer_image(m.start)
    end = final_word(m)
    return SurfaceInvariants(
        euler_characteristic=m.degree + disks - bands,
        boundary_components=_boundary_components(m.start, end),
        trivial_boundary=m.start.is_identity and end.is_identity,
        interval_components_start=m.degree,
        circle_components_start=tau0.loops,
    )


def surface_invariants_extended(m: ChartMovie) -> SurfaceInvariants:
    """Invariants of a movie that may still contain e-edge caps and cups."""
    return surface_invariants(normalize_caps(m))
