"""
BMW Chart Moves
Move instances on leveled movies, their application, canonical hashing and bounded equivalence search
"""

import hashlib
import json
import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from modules.chart_movie import (
    COMPOSITES,
    E_CAPS,
    PARAM_SCHEMA,
    ChartMovie,
    Event,
    EventKind,
    cap_replacement,
    event_inverse,
    event_sides,
    make_event,
    movie_slices,
    require_valid,
    strip_levels,
)
from modules.errors import BMWError, DegreeError, FormatError, MoveError, WordParseError
from modules.movie_io import movie_to_dict
from modules.settings import DEFAULT_TEMPLATES, DEFAULT_WINDOW
from modules.word_algebra import g, letter_from_token

logger = logging.getLogger(__name__)

K = EventKind


class MoveKind(Enum):
    CI_LOOP = "CI-loop"
    CI_COMMUTE = "CI-commute"
    CI_WHITE_CANCEL = "CI-white-cancel"
    CII = "CII"
    CIII = "CIII"
    TANGLE_B = "TangleB"
    TANGLE_C = "TangleC"


ALL_KINDS = frozenset(MoveKind)
KIND_ORDER = {kind: n for n, kind in enumerate(MoveKind)}

# (b2): no vertices of degree one or two, no type (i) vertices, no composite vertices
B2_FORBIDDEN = frozenset((K.BLACK_G, K.XDOT, K.SADDLE, K.XTRI) + COMPOSITES)
# (b2'): composite vertices allowed except (i')
B2_PRIME_FORBIDDEN = frozenset((K.BLACK_G, K.XDOT, K.SADDLE, K.XTRI, K.XSTAR))


@dataclass(frozen=True)
class MoveInstance:
    """A move on events[start:end]; start == end is an insertion at that level."""

    kind: MoveKind
    start: int
    end: int
    params: Tuple[Tuple[str, Any], ...] = ()

    def param(self, name: str, default: Any = None) -> Any:
        return dict(self.params).get(name, default)

    def to_line(self) -> str:
        payload = json.dumps(dict(self.params), sort_keys=True, separators=(",", ":"))
        return f"{self.kind.value} {self.start} {self.end} {payload}"

    @classmethod
    def from_line(cls, line: str) -> "MoveInstance":
        parts = line.strip().split(" ", 3)
        try:
            kind, start, end = MoveKind(parts[0]), int(parts[1]), int(parts[2])
            params = json.loads(parts[3]) if len(parts) > 3 else {}
        except (IndexError, ValueError) as err:
            raise FormatError(f"bad witness line {line!r}") from err
        if not isinstance(params, dict):
            raise FormatError(f"witness params must be an object: {line!r}")
        return cls(kind, start, end, tuple(sorted(params.items())))

    def __str__(self) -> str:
        return self.to_line()


def _instance(kind: MoveKind, start: int, end: int, **params) -> MoveInstance:
    return MoveInstance(kind, start, end, tuple(sorted(params.items())))


@dataclass
class SearchResult:
    found: bool
    witness: Optional[List[MoveInstance]] = None
    explored: int = 0
    budget_exhausted: bool = False
    depth_reached: int = 0
    levels: List[int] = field(default_factory=list)


# --- Templates ---


@dataclass(frozen=True)
class MoveTemplate:
    name: str
    kind: MoveKind
    lhs: Tuple[Dict[str, Any], ...]
    rhs: Tuple[Dict[str, Any], ...]
    where: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()
    # symbols read off the slice below the span, as offsets from the anchor
    context: Tuple[Tuple[str, int], ...] = ()


@lru_cache(maxsize=8)
def load_templates(path: str = str(DEFAULT_TEMPLATES)) -> Tuple[MoveTemplate, ...]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as err:
        raise MoveError(f"cannot read move templates {path}: {err}") from err
    templates = []
    for item in data.get("templates", []):
        try:
            templates.append(
                MoveTemplate(
                    name=item["name"],
                    kind=MoveKind(item["kind"]),
                    lhs=tuple(item["lhs"]),
                    rhs=tuple(item["rhs"]),
                    where=tuple((key, tuple(value)) for key, value in item.get("where", {}).items()),
                    context=tuple(sorted(item.get("slice", {}).items())),
                )
            )
        except (KeyError, ValueError) as err:
            raise MoveError(f"bad template {item.get('name')!r} in {path}: {err}") from err
    logger.debug(f"loaded {len(templates)} move templates from {path}")
    return tuple(templates)


def _template(name: str, templates_path: str) -> MoveTemplate:
    for template in load_templates(templates_path):
        if template.name == name:
            return template
    raise MoveError(f"no move template named {name!r}")


def _bind(symbol: str, actual: Any, binding: Dict[str, Any]) -> bool:
    if symbol == "$g":
        try:
            letter = letter_from_token(str(actual))
        except WordParseError:
            return False
        if letter.is_hook:
            return False
        return _bind("$i", letter.index, binding) and _bind("$eps", letter.sign, binding)
    if symbol == "$x":
        try:
            letter_from_token(str(actual))
        except WordParseError:
            return False
    if symbol in binding:
        return binding[symbol] == actual
    binding[symbol] = actual
    return True


def _match_event(pattern: Dict[str, Any], event: Event, binding: Dict[str, Any]) -> bool:
    kind = K(pattern["kind"])
    if event.kind is not kind:
        return False
    required, optional = PARAM_SCHEMA[kind]
    given = pattern.get("params", {})
    for name in required + tuple(optional):
        want = given.get(name, optional.get(name))
        have = event.param(name)
        if isinstance(want, str) and want.startswith("$"):
            if not _bind(want, have, binding):
                return False
        elif want is not None and want != have:
            return False
    return True


def _substitute(value: Any, binding: Dict[str, Any]) -> Any:
    if not isinstance(value, str) or not value.startswith("$"):
        return value
    if value == "$g":
        return g(binding["$i"], binding["$eps"]).token
    return binding[value]


def _index_of(symbol: str, binding: Dict[str, Any]) -> int:
    value = binding[symbol]
    return value if isinstance(value, int) else letter_from_token(str(value)).index


def _holds(template: MoveTemplate, binding: Dict[str, Any]) -> bool:
    for relation, (a, b) in template.where:
        gap = abs(_index_of(a, binding) - _index_of(b, binding))
        if relation == "far" and gap <= 1:
            return False
        if relation == "adjacent" and gap != 1:
            return False
    return True


def _bind_context(template: MoveTemplate, m: ChartMovie, start: int, anchor: int, binding: Dict[str, Any]) -> bool:
    word = movie_slices(m)[start]
    for symbol, offset in template.context:
        q = anchor + offset
        if not 0 <= q < len(word):
            return False
        letter = word.letters[q]
        value = letter.token if symbol in ("$x", "$g") else letter.index
        if not _bind(symbol, value, binding):
            return False
    return True


def _match_template(template: MoveTemplate, m: ChartMovie, start: int, direction: str) -> Optional[List[Event]]:
    """Events replacing the matched side; every symbol is bound by the events or the slice below them."""
    events = m.events
    source, target = (template.lhs, template.rhs) if direction == "forward" else (template.rhs, template.lhs)
    if start + len(source) > len(events):
        return None
    anchor = events[start].position - source[0]["position"]
    if anchor < 0:
        return None
    binding: Dict[str, Any] = {}
    for offset, pattern in enumerate(source):
        event = events[start + offset]
        if event.position != anchor + pattern["position"] or not _match_event(pattern, event, binding):
            return None
    if not _bind_context(template, m, start, anchor, binding):
        return None
    try:
        if not _holds(template, binding):
            return None
        return [
            make_event(
                pattern["kind"],
                anchor + pattern["position"],
                **{name: _substitute(value, binding) for name, value in pattern.get("params", {}).items()},
            )
            for pattern in target
        ]
    except (KeyError, WordParseError):
        return None


# --- Replacements ---


def _commuted(first: Event, second: Event, degree: int, side: str) -> Optional[List[Event]]:
    s1, t1 = (len(x) for x in event_sides(first, degree))
    s2, t2 = (len(x) for x in event_sides(second, degree))
    p1, p2 = first.position, second.position
    if side == "right" and p2 >= p1 + t1:
        return [second.at(p2 - t1 + s1), first]
    if side == "left" and p2 + s2 <= p1:
        return [second, first.at(p1 + t2 - s2)]
    return None


def _is_mirror_span(span: Tuple[Event, ...]) -> bool:
    if not span or len(span) % 2:
        return False
    half = len(span) // 2
    return all(span[half + k] == event_inverse(span[half - 1 - k]) for k in range(half))


def _has_equal_hooks(word) -> bool:
    return any(a.is_hook and a == b for a, b in zip(word.letters, word.letters[1:]))


def _tangle_b_ok(m: ChartMovie, start: int, end: int, b2prime: bool) -> bool:
    span = m.events[start:end]
    if not _is_mirror_span(span):
        return False
    forbidden = B2_PRIME_FORBIDDEN if b2prime else B2_FORBIDDEN
    if any(event.kind in forbidden for event in span):
        return False
    slices = movie_slices(m)
    return not any(_has_equal_hooks(slices[level]) for level in range(start, end + 1))


def _contract_caps(span: Tuple[Event, ...]) -> Optional[List[Event]]:
    out, k, changed = [], 0, False
    while k < len(span):
        head = span[k]
        if head.kind in (K.XDOT, K.XTRI) and k + 1 < len(span):
            cap = K.ECAP if head.kind is K.XDOT else K.ECUP
            folded = make_event(cap, head.position, i=head.param("i"))
            if list(span[k:k + 2]) == cap_replacement(folded):
                out.append(folded)
                k += 2
                changed = True
                continue
        out.append(head)
        k += 1
    return out if changed else None


def _replacement(m: ChartMovie, inst: MoveInstance, b2prime: bool = False,
                 templates_path: str = str(DEFAULT_TEMPLATES)) -> List[Event]:
    events = m.events
    if not 0 <= inst.start <= inst.end <= len(events):
        raise MoveError(f"span {inst.start}..{inst.end} outside the movie")
    span = events[inst.start:inst.end]
    kind = inst.kind

    if kind is MoveKind.CI_LOOP:
        i, eps, p = inst.param("i"), inst.param("eps"), inst.param("position")
        loop = [make_event(K.GCAP, p, i=i, eps=eps), make_event(K.GCUP, p, i=i, eps=eps)]
        if inst.param("insert"):
            if span:
                raise MoveError("a loop insertion has an empty span")
            return loop
        if list(span) != loop:
            raise MoveError("span is not a closed g-edge loop")
        return []
    if kind is MoveKind.CI_COMMUTE:
        if len(span) != 2 or K.LEVEL in (span[0].kind, span[1].kind):
            raise MoveError("commutation needs two events")
        swapped = _commuted(span[0], span[1], m.degree, inst.param("side", "right"))
        if swapped is None:
            raise MoveError("events do not have disjoint supports")
        if swapped == list(span):
            raise MoveError("commutation leaves the span unchanged")
        return swapped
    if kind is MoveKind.CI_WHITE_CANCEL:
        if len(span) != 2 or span[0].kind is not K.WHITE or span[1] != event_inverse(span[0]):
            raise MoveError("span is not a white vertex followed by its inverse")
        return []
    if kind in (MoveKind.CII, MoveKind.CIII):
        template = _template(inst.param("template"), templates_path)
        direction = inst.param("direction", "forward")
        source = template.lhs if direction == "forward" else template.rhs
        if template.kind is not kind or len(span) != len(source):
            raise MoveError(f"template {template.name} does not fit the span")
        replaced = _match_template(template, m, inst.start, direction)
        if replaced is None:
            raise MoveError(f"template {template.name} does not match the span")
        return replaced
    if kind is MoveKind.TANGLE_B:
        if not _tangle_b_ok(m, inst.start, inst.end, b2prime):
            raise MoveError("span is not a mirror-symmetric tangle disk")
        return []
    if kind is MoveKind.TANGLE_C:
        if inst.param("direction", "expand") == "expand":
            if not span or span[0].kind not in E_CAPS or span[-1].kind not in E_CAPS:
                raise MoveError("expansion span must start and end on e-edge extrema")
            return [piece for event in span for piece in cap_replacement(event)]
        contracted = _contract_caps(span)
        if contracted is None or span[-1] == contracted[-1] or span[0] == contracted[0]:
            raise MoveError("contraction span must start and end on two-event cap forms")
        return contracted
    raise MoveError(f"unknown move kind {kind}")


def apply_chart_move(m: ChartMovie, inst: MoveInstance, b2prime: bool = False,
                     templates_path: str = str(DEFAULT_TEMPLATES)) -> ChartMovie:
    """Replace the instance's span; the rest of the movie is unchanged."""
    replaced = _replacement(m, inst, b2prime, templates_path)
    events = m.events[:inst.start] + tuple(replaced) + m.events[inst.end:]
    moved = m.with_events(events)
    try:
        require_valid(moved)
        before = movie_slices(m)
        after = movie_slices(moved)
    except BMWError as err:
        raise MoveError(f"{inst.kind.value} at {inst.start}..{inst.end} breaks the movie: {err}") from err
    if after[inst.start + len(replaced)] != before[inst.end]:
        raise MoveError(f"{inst.kind.value} at {inst.start}..{inst.end} changes the slice above the span")
    return moved


# --- Enumeration ---


def _candidates(m: ChartMovie, kinds: frozenset, window: int, grow: bool,
                templates_path: str) -> Iterable[MoveInstance]:
    events = m.events
    count = len(events)
    slices = movie_slices(m)

    if MoveKind.CI_LOOP in kinds:
        for s in range(count - 1):
            first = events[s]
            if first.kind is K.GCAP and events[s + 1] == make_event(K.GCUP, first.position, **first.options):
                yield _instance(MoveKind.CI_LOOP, s, s + 2, insert=False, i=first.param("i"),
                                eps=first.param("eps"), position=first.position)
        if grow:
            for level in range(count + 1):
                for p in range(len(slices[level]) + 1):
                    for i in range(1, m.degree):
                        for eps in (1, -1):
                            yield _instance(MoveKind.CI_LOOP, level, level, insert=True, i=i, eps=eps, position=p)
    if MoveKind.CI_COMMUTE in kinds:
        for s in range(count - 1):
            for side in ("right", "left"):
                yield _instance(MoveKind.CI_COMMUTE, s, s + 2, side=side)
    if MoveKind.CI_WHITE_CANCEL in kinds:
        for s in range(count - 1):
            if events[s].kind is K.WHITE:
                yield _instance(MoveKind.CI_WHITE_CANCEL, s, s + 2)
    for template in load_templates(templates_path):
        if template.kind not in kinds:
            continue
        for direction in ("forward", "backward"):
            size = len(template.lhs if direction == "forward" else template.rhs)
            for s in range(count - size + 1):
                if _match_template(template, m, s, direction) is not None:
                    yield _instance(template.kind, s, s + size, template=template.name, direction=direction)
    if MoveKind.TANGLE_B in kinds:
        for s in range(count):
            for size in range(2, min(window, count - s) + 1, 2):
                yield _instance(MoveKind.TANGLE_B, s, s + size)
    if MoveKind.TANGLE_C in kinds:
        for s in range(count):
            for end in range(s + 1, min(s + window, count) + 1):
                if events[s].kind in E_CAPS:
                    yield _instance(MoveKind.TANGLE_C, s, end, direction="expand")
                elif events[s].kind in (K.XDOT, K.XTRI):
                    yield _instance(MoveKind.TANGLE_C, s, end, direction="contract")


def applicable_moves(m: ChartMovie, kinds: Optional[Iterable] = None, window: int = DEFAULT_WINDOW,
                     b2prime: bool = False, grow: bool = False,
                     templates_path: str = str(DEFAULT_TEMPLATES)) -> List[MoveInstance]:
    require_valid(m)
    wanted = ALL_KINDS if kinds is None else frozenset(MoveKind(k) for k in kinds)
    found = []
    for inst in _candidates(m, wanted, window, grow, str(templates_path)):
        try:
            apply_chart_move(m, inst, b2prime, str(templates_path))
        except MoveError:
            continue
        found.append(inst)
    found.sort(key=lambda inst: (inst.start, inst.end, KIND_ORDER[inst.kind], inst.to_line()))
    return found


# --- Hashing and search ---


def canonical_hash(m: ChartMovie) -> str:
    """sha256 of the movie's canonical JSON with empty levels removed."""
    data = movie_to_dict(strip_levels(m))
    raw = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    return hashlib.sha256(raw).hexdigest()


def _successors(m: ChartMovie, kinds, window: int, b2prime: bool, grow: bool,
                templates_path: str) -> List[Tuple[MoveInstance, ChartMovie]]:
    out = []
    for inst in applicable_moves(m, kinds, window, b2prime, grow, templates_path):
        out.append((inst, apply_chart_move(m, inst, b2prime, templates_path)))
    return out


def equivalent_bounded(a: ChartMovie, b: ChartMovie, depth: int = 6, budget: int = 100_000,
                       workers: int = 4, kinds: Optional[Iterable] = None, window: int = DEFAULT_WINDOW,
                       b2prime: bool = False, grow: bool = False,
                       templates_path: str = str(DEFAULT_TEMPLATES)) -> SearchResult:
    """Breadth-first search for a move sequence turning `a` into `b`; not finding one proves nothing."""
    if a.degree != b.degree:
        raise DegreeError(f"cannot compare degree {a.degree} with degree {b.degree}")
    require_valid(a)
    require_valid(b)
    target = canonical_hash(b)
    seen = {canonical_hash(a)}
    if target in seen:
        return SearchResult(True, [], 1)
    result = SearchResult(False, explored=1)
    frontier = deque([(a, [])])
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for level in range(1, depth + 1):
            nodes = list(frontier)
            expanded = pool.map(
                lambda node: _successors(node[0], kinds, window, b2prime, grow, templates_path), nodes
            )
            frontier = deque()
            for (_, path), successors in zip(nodes, expanded):
                for inst, child in successors:
                    key = canonical_hash(child)
                    if key in seen:
                        continue
                    seen.add(key)
                    result.explored += 1
                    witness = path + [inst]
                    if key == target:
                        result.found, result.witness, result.depth_reached = True, witness, level
                        logger.info(f"search: found a witness of length {level} after {result.explored} movies")
                        return result
                    if result.explored >= budget:
                        result.budget_exhausted, result.depth_reached = True, level
                        logger.warning(f"search: budget of {budget} movies exhausted at depth {level}")
                        return result
                    frontier.append((child, witness))
            result.levels.append(len(frontier))
            result.depth_reached = level
            logger.info(f"search depth {level}: {len(frontier)} new movies, {result.explored} explored")
            if not frontier:
                break
    return result


# --- Witness logs ---


def format_witness(instances: Iterable[MoveInstance]) -> str:
    return "".join(inst.to_line() + "\n" for inst in instances)


def parse_witness(text: str) -> List[MoveInstance]:
    return [
        MoveInstance.from_line(line)
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]


def read_witness_log(path: Path) -> List[MoveInstance]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_witness(f.read())


def write_witness_log(instances: Iterable[MoveInstance], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_witness(instances))


def replay_witness(m: ChartMovie, instances: Iterable[MoveInstance], b2prime: bool = False,
                   templates_path: str = str(DEFAULT_TEMPLATES)) -> ChartMovie:
    for number, inst in enumerate(instances):
        try:
            m = apply_chart_move(m, inst, b2prime, templates_path)
        except MoveError as err:
            raise MoveError(f"witness step {number}: {err}") from err
    return m
