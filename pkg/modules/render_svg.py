"""
SVG Rendering
Charts as labeled planar graphs with typed vertex glyphs; movies as a strip of strand diagrams per slice
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from modules.chart_movie import ChartMovie, movie_slices, require_valid
from modules.converters import ChartGraph, movie_to_chart_graph, validate_chart_graph
from modules.errors import ChartGraphError
from modules.word_algebra import Letter, Word

logger = logging.getLogger(__name__)

CHART = "chart"
MOVIE_STRIP = "movie-strip"

BLACK_DISK = ("a",)
WHITE_CIRCLE = ("c",)
X_MARK = ("d", "e", "i", "i'")
SQUARE = ("g", "h", "j", "k", "j'")


@dataclass(frozen=True)
class RenderSpec:
    target: Optional[str] = None  # chart | movie-strip; None picks from the input
    size: float = 400.0
    margin: float = 24.0
    stroke: str = "black"
    stroke_width: float = 2.0
    glyph_radius: float = 5.0
    font_size: float = 10.0
    label_edges: bool = True
    strand_gap: float = 24.0
    row_height: float = 24.0
    panel_gap: float = 36.0


def _f(value: float) -> str:
    return f"{value:.2f}"


def _document(width: float, height: float, body: List[str], title: str) -> str:
    header = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_f(width)} {_f(height)}" '
        f'width="{_f(width)}" height="{_f(height)}">'
    )
    return "\n".join([header, f"<title>{title}</title>"] + body + ["</svg>"]) + "\n"


# --- Charts ---


def _chart_body(graph: ChartGraph, spec: RenderSpec) -> List[str]:
    def sx(x: float) -> float:
        return spec.margin + x * spec.size

    def sy(y: float) -> float:
        return spec.margin + (1.0 - y) * spec.size

    body = [
        f'<rect class="frame" x="{_f(spec.margin)}" y="{_f(spec.margin)}" width="{_f(spec.size)}" '
        f'height="{_f(spec.size)}" fill="none" stroke="gray" stroke-width="1"/>'
    ]
    for edge in graph.edges:
        d = "M " + " L ".join(f"{_f(sx(x))} {_f(sy(y))}" for x, y in edge.points)
        dash = "" if edge.oriented else ' stroke-dasharray="6 3"'
        body.append(
            f'<path class="edge" data-label="{edge.label}" d="{d}" stroke="{spec.stroke}" '
            f'fill="none" stroke-width="{_f(spec.stroke_width)}"{dash}/>'
        )
        middle = len(edge.points) // 2
        (x0, y0), (x1, y1) = edge.points[middle - 1], edge.points[middle]
        mx, my = sx((x0 + x1) / 2), sy((y0 + y1) / 2)
        if edge.oriented:
            body.append(_arrow(mx, my, sx(x1) - sx(x0), sy(y1) - sy(y0), spec))
        if spec.label_edges:
            body.append(
                f'<text class="label" x="{_f(mx + 4)}" y="{_f(my - 4)}" font-family="monospace" '
                f'font-size="{_f(spec.font_size)}">{edge.label}</text>'
            )
    for vertex in graph.vertices:
        body.append(_glyph(vertex.vtype, sx(vertex.x), sy(vertex.y), spec))
    return body


def _arrow(x: float, y: float, dx: float, dy: float, spec: RenderSpec) -> str:
    length = float(np.hypot(dx, dy)) or 1.0
    ux, uy = dx / length, dy / length
    r = spec.glyph_radius
    tip = (x + ux * r, y + uy * r)
    left = (x - ux * r - uy * r * 0.6, y - uy * r + ux * r * 0.6)
    right = (x - ux * r + uy * r * 0.6, y - uy * r - ux * r * 0.6)
    points = " ".join(f"{_f(px)},{_f(py)}" for px, py in (tip, left, right))
    return f'<polygon class="arrow" points="{points}" fill="{spec.stroke}"/>'


def _glyph(vtype: str, x: float, y: float, spec: RenderSpec) -> str:
    r = spec.glyph_radius
    if vtype in BLACK_DISK:
        return f'<circle class="vertex black" data-type="{vtype}" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill="black"/>'
    if vtype in WHITE_CIRCLE:
        return (
            f'<circle class="vertex white" data-type="{vtype}" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" '
            f'fill="white" stroke="black" stroke-width="1.5"/>'
        )
    if vtype in X_MARK:
        return (
            f'<g class="vertex xmark" data-type="{vtype}" stroke="black" stroke-width="2">'
            f'<line x1="{_f(x - r)}" y1="{_f(y - r)}" x2="{_f(x + r)}" y2="{_f(y + r)}"/>'
            f'<line x1="{_f(x - r)}" y1="{_f(y + r)}" x2="{_f(x + r)}" y2="{_f(y - r)}"/></g>'
        )
    if vtype in SQUARE:
        return (
            f'<rect class="vertex square" data-type="{vtype}" x="{_f(x - r)}" y="{_f(y - r)}" '
            f'width="{_f(2 * r)}" height="{_f(2 * r)}" fill="white" stroke="black" stroke-width="1.5"/>'
        )
    # (b), (f): the crossing itself is the glyph
    return f'<circle class="vertex crossing" data-type="{vtype}" cx="{_f(x)}" cy="{_f(y)}" r="1.00" fill="black"/>'


# --- Movie strips ---


def _letter_paths(letter: Letter, columns: np.ndarray, bottom: float, top: float, spec: RenderSpec) -> List[str]:
    a, b = letter.index - 1, letter.index
    xa, xb = float(columns[a]), float(columns[b])
    style = f'stroke="{spec.stroke}" fill="none" stroke-width="{_f(spec.stroke_width)}"'
    if letter.is_hook:
        mid, centre = (bottom + top) / 2, _f((xa + xb) / 2)
        return [
            f'<path class="hook" d="M {_f(xa)} {_f(bottom)} Q {centre} {_f(mid)} {_f(xb)} {_f(bottom)}" {style}/>',
            f'<path class="hook" d="M {_f(xa)} {_f(top)} Q {centre} {_f(mid)} {_f(xb)} {_f(top)}" {style}/>',
        ]
    # positive letters carry the strand from bottom-left over to top-right
    over = ((xa, bottom), (xb, top)) if letter.sign == 1 else ((xb, bottom), (xa, top))
    under = ((xb, bottom), (xa, top)) if letter.sign == 1 else ((xa, bottom), (xb, top))
    (ux0, uy0), (ux1, uy1) = under
    cut = 0.35
    first = (ux0 + (ux1 - ux0) * cut, uy0 + (uy1 - uy0) * cut)
    second = (ux0 + (ux1 - ux0) * (1 - cut), uy0 + (uy1 - uy0) * (1 - cut))
    (ox0, oy0), (ox1, oy1) = over
    return [
        f'<path class="crossing over" d="M {_f(ox0)} {_f(oy0)} L {_f(ox1)} {_f(oy1)}" {style}/>',
        f'<path class="crossing under" d="M {_f(ux0)} {_f(uy0)} L {_f(first[0])} {_f(first[1])}" {style}/>',
        f'<path class="crossing under" d="M {_f(second[0])} {_f(second[1])} L {_f(ux1)} {_f(uy1)}" {style}/>',
    ]


def _panel(word: Word, left: float, height: float, spec: RenderSpec) -> List[str]:
    columns = left + np.arange(word.degree) * spec.strand_gap
    top_edge = spec.margin
    base = spec.margin + height
    rows = max(len(word), 1)
    row = height / rows
    body = []
    for r in range(rows):
        bottom, top = base - r * row, base - (r + 1) * row
        busy = set()
        if r < len(word):
            letter = word[r]
            busy = {letter.index - 1, letter.index}
            body.extend(_letter_paths(letter, columns, bottom, top, spec))
        for q, x in enumerate(columns):
            if q not in busy:
                body.append(
                    f'<path class="strand" d="M {_f(float(x))} {_f(bottom)} L {_f(float(x))} {_f(top)}" '
                    f'stroke="{spec.stroke}" fill="none" stroke-width="{_f(spec.stroke_width)}"/>'
                )
    body.append(
        f'<text class="word" x="{_f(left)}" y="{_f(top_edge - 6)}" font-family="monospace" '
        f'font-size="{_f(spec.font_size)}">{word}</text>'
    )
    return body


def _strip_body(m: ChartMovie, spec: RenderSpec) -> Tuple[List[str], float, float]:
    slices = movie_slices(m)
    longest = max(max(len(w) for w in slices), 1)
    height = longest * spec.row_height
    panel_width = (m.degree - 1) * spec.strand_gap
    lefts = spec.margin + np.arange(len(slices)) * (panel_width + spec.panel_gap)
    body = []
    for k, (word, left) in enumerate(zip(slices, lefts)):
        body.append(f'<g class="slice" data-level="{k}">')
        body.extend(_panel(word, float(left), height, spec))
        body.append("</g>")
        if k < len(m.events):
            label_x = float(left) + panel_width + spec.panel_gap / 2
            body.append(
                f'<text class="event" x="{_f(label_x)}" y="{_f(spec.margin + height + 16)}" text-anchor="middle" '
                f'font-family="monospace" font-size="{_f(spec.font_size * 0.8)}">{m.events[k]}</text>'
            )
    width = float(lefts[-1]) + panel_width + spec.margin
    return body, width, spec.margin + height + 28


def render_svg(item: Union[ChartGraph, ChartMovie], spec: RenderSpec = RenderSpec()) -> str:
    """One SVG document; identical input and spec give identical text."""
    if isinstance(item, ChartMovie):
        require_valid(item)
        if spec.target == CHART:
            item = movie_to_chart_graph(item)
        else:
            body, width, height = _strip_body(item, spec)
            logger.debug(f"rendered movie strip with {len(item.events) + 1} slices")
            return _document(width, height, body, f"movie of degree {item.degree}")
    if spec.target == MOVIE_STRIP:
        raise ChartGraphError("a chart cannot be drawn as a movie strip; convert it first")
    problems = validate_chart_graph(item)
    if problems:
        raise ChartGraphError("; ".join(problems))
    side = spec.size + 2 * spec.margin
    logger.debug(f"rendered chart with {len(item.vertices)} vertices and {len(item.edges)} edges")
    return _document(side, side, _chart_body(item, spec), f"chart of degree {item.degree}")
