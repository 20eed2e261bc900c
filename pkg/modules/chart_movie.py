"""
BMW Chart Movies
Leveled charts: a start word and a sequence of vertex/extremum events acting on it
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Tuple

from modules.errors import DegreeError, EventError, MovieError, RuleError, WordParseError
from modules.word_algebra import Letter, Word, e, g, letter_from_token, word_to_text
from modules.word_rules import Direction, MoveScript, RuleId, expand_derived_rule, rule_sides, rule_spec

logger = logging.getLogger(__name__)


class EventKind(Enum):
    BLACK_G = "BlackG"
    XDOT = "XDot"
    SADDLE = "Saddle"
    GCAP = "GCap"
    GCUP = "GCup"
    ECAP = "ECap"
    ECUP = "ECup"
    WHITE = "White"
    CROSSING = "Crossing"
    SQUARE8 = "Square8"
    SQUARE5 = "Square5"
    XTRI = "XTri"
    BRANCH = "Branch"
    SQUARE6 = "Square6"
    XSTAR = "XStar"
    SQUARE_STAR = "SquareStar"
    LEVEL = "Level"


K = EventKind
EXTREMA = (K.GCAP, K.GCUP, K.ECAP, K.ECUP)
E_CAPS = (K.ECAP, K.ECUP)
COMPOSITES = (K.XSTAR, K.SQUARE_STAR, K.SQUARE6)
WHITE_VARIANTS = ("R5", "D15", "D16", "D17")
EXTREMUM_CLAUSE = "extremum"

# kind -> (required parameter names, optional parameters with defaults)
PARAM_SCHEMA: Dict[EventKind, Tuple[Tuple[str, ...], Dict[str, Any]]] = {
    K.BLACK_G: (("i", "eps"), {"reverse": False}),
    K.XDOT: (("i",), {"reverse": False}),
    K.SADDLE: (("i", "eps"), {"reverse": False}),
    K.GCAP: (("i", "eps"), {}),
    K.GCUP: (("i", "eps"), {}),
    K.ECAP: (("i",), {}),
    K.ECUP: (("i",), {}),
    K.WHITE: (("i", "j"), {"eps": 1, "variant": "R5", "reverse": False}),
    K.CROSSING: (("left", "right"), {}),
    K.SQUARE8: (("i", "j"), {"reverse": False}),
    K.SQUARE5: (("i", "j", "eps"), {"mirror": False, "reverse": False}),
    K.XTRI: (("i",), {"reverse": False}),
    K.BRANCH: (("i", "eps"), {"side": "left", "reverse": False}),
    K.SQUARE6: (("i", "j", "eps", "delta"), {"reverse": False}),
    K.XSTAR: (("i", "m"), {"below": None}),
    K.SQUARE_STAR: (("i", "signs"), {"side": "left", "reverse": False}),
    K.LEVEL: ((), {}),
}

VERTEX_CLAUSE = {
    K.BLACK_G: "a",
    K.WHITE: "c",
    K.XDOT: "d",
    K.SADDLE: "e",
    K.SQUARE8: "g",
    K.SQUARE5: "h",
    K.XTRI: "i",
    K.BRANCH: "j",
    K.SQUARE6: "k",
    K.XSTAR: "i'",
    K.SQUARE_STAR: "j'",
}


def _normal_params(kind: EventKind, params: Dict[str, Any]) -> Tuple[Tuple[str, Any], ...]:
    optional = PARAM_SCHEMA[kind][1]
    kept = {}
    for name, value in params.items():
        if name in optional and optional[name] is not None and value == optional[name]:
            continue
        if kind is K.XSTAR and name == "below" and "m" in params and value == params["m"] - 1:
            continue
        kept[name] = value
    return tuple(sorted(kept.items()))


@dataclass(frozen=True)
class Event:
    """One level of a movie; params are kept sorted with defaults dropped, so equal events compare equal."""

    kind: EventKind
    position: int = 0
    params: Tuple[Tuple[str, Any], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", _normal_params(self.kind, dict(self.params)))

    def param(self, name: str, default: Any = None) -> Any:
        for key, value in self.params:
            if key == name:
                return value
        schema = PARAM_SCHEMA[self.kind][1]
        if name in schema and schema[name] is not None:
            return schema[name]
        if self.kind is K.XSTAR and name == "below":
            return self.param("m") - 1
        return default

    @property
    def options(self) -> Dict[str, Any]:
        return dict(self.params)

    def at(self, position: int) -> "Event":
        return Event(self.kind, position, self.params)

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind.value}@{self.position}({args})"


def make_event(kind, position: int = 0, **params) -> Event:
    """Build an event with parameters sorted and defaults dropped."""
    return Event(EventKind(kind), position, tuple(params.items()))


def event_clause(event: Event) -> str:
    """Vertex clause (a)-(k), (i'), (j') of an event, or 'extremum'."""
    if event.kind is K.CROSSING:
        tokens = (str(event.param("left", "")), str(event.param("right", "")))
        return "b" if all(t[:1] in ("g", "G") for t in tokens) else "f"
    if event.kind in EXTREMA:
        return EXTREMUM_CLAUSE
    return VERTEX_CLAUSE.get(event.kind, "")


Sides = Tuple[Tuple[Letter, ...], Tuple[Letter, ...]]


def _rule_of(event: Event) -> Tuple[RuleId, Direction]:
    p = event.param
    kind = event.kind
    backward = Direction.BACKWARD if p("reverse") else Direction.FORWARD
    if kind is K.BLACK_G:
        return RuleId("R1", p("i"), eps=p("eps")), backward
    if kind is K.XDOT:
        return RuleId("R2", p("i")), backward
    if kind is K.SADDLE:
        return RuleId("R3", p("i"), eps=p("eps")), backward
    if kind is K.GCAP:
        return RuleId("R4", p("i"), eps=p("eps")), Direction.BACKWARD
    if kind is K.GCUP:
        return RuleId("R4", p("i"), eps=p("eps")), Direction.FORWARD
    if kind is K.WHITE:
        if p("variant") not in WHITE_VARIANTS:
            raise EventError(f"unknown white reading {p('variant')!r}", "c")
        return RuleId(p("variant"), p("i"), p("j"), eps=p("eps")), backward
    if kind is K.SQUARE8:
        return RuleId("R8", p("i"), p("j")), backward
    if kind is K.SQUARE5:
        return RuleId("R7" if p("mirror") else "R6", p("i"), p("j"), eps=p("eps")), backward
    if kind is K.XTRI:
        return RuleId("R12", p("i")), backward
    if kind is K.BRANCH:
        side = p("side")
        if side not in ("left", "right"):
            raise EventError(f"branch side must be left or right, got {side!r}", "j")
        return RuleId("D20" if side == "left" else "D21", p("i"), eps=p("eps")), backward
    if kind is K.SQUARE6:
        return RuleId("D22", p("i"), p("j"), eps=p("eps"), delta=p("delta")), backward
    raise EventError(f"{kind.value} has no single rule")


def _check_schema(event: Event, clause: str) -> None:
    required, optional = PARAM_SCHEMA[event.kind]
    names = {key for key, _ in event.params}
    missing = [name for name in required if name not in names]
    if missing:
        raise EventError(f"missing parameter(s) {', '.join(missing)}", clause)
    unknown = sorted(names - set(required) - set(optional))
    if unknown:
        raise EventError(f"unexpected parameter(s) {', '.join(unknown)}", clause)


def _check_index(i: Any, degree: int, clause: str) -> int:
    if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= degree - 1:
        raise EventError(f"index {i!r} out of range for degree {degree}", clause)
    return i


def event_sides(event: Event, degree: int) -> Sides:
    """(source, target) letters the event rewrites, after checking its parameters."""
    clause = event_clause(event)
    _check_schema(event, clause)
    kind, p = event.kind, event.param
    flip = bool(p("reverse"))

    if kind is K.LEVEL:
        return (), ()
    if kind in E_CAPS:
        i = _check_index(p("i"), degree, clause)
        pair = (e(i), e(i))
        return ((), pair) if kind is K.ECAP else (pair, ())
    if kind is K.CROSSING:
        try:
            a, b = letter_from_token(str(p("left"))), letter_from_token(str(p("right")))
        except WordParseError as err:
            raise EventError(str(err), clause) from err
        _check_index(a.index, degree, clause)
        _check_index(b.index, degree, clause)
        if abs(a.index - b.index) <= 1:
            raise EventError(f"crossing of {a.token} and {b.token} needs |i-j| > 1", clause)
        return (a, b), (b, a)
    if kind is K.XSTAR:
        i = _check_index(p("i"), degree, clause)
        m, below = p("m"), p("below")
        if not isinstance(m, int) or m < 3:
            raise EventError(f"degree m must be at least 3, got {m!r}", clause)
        if not isinstance(below, int) or not 1 <= below <= m - 1:
            raise EventError(f"below must lie in 1..{m - 1}, got {below!r}", clause)
        return tuple(e(i) for _ in range(below)), tuple(e(i) for _ in range(m - below))
    if kind is K.SQUARE_STAR:
        i = _check_index(p("i"), degree, clause)
        signs, side = p("signs"), p("side")
        if not isinstance(signs, str) or not signs or set(signs) - {"+", "-"}:
            raise EventError(f"signs must be a non-empty string over +/-, got {signs!r}", clause)
        if side not in ("left", "right"):
            raise EventError(f"side must be left or right, got {side!r}", clause)
        gs = tuple(g(i, 1 if s == "+" else -1) for s in signs)
        grown = gs + (e(i),) if side == "left" else (e(i),) + gs
        return ((grown, (e(i),)) if flip else ((e(i),), grown))

    rule, direction = _rule_of(event)
    try:
        lhs, rhs = rule_sides(rule, degree)
    except RuleError as err:
        raise EventError(str(err), clause) from err
    return (lhs, rhs) if direction is Direction.FORWARD else (rhs, lhs)


def apply_event(word: Word, event: Event) -> Word:
    clause = event_clause(event)
    source, target = event_sides(event, word.degree)
    position = event.position
    if not isinstance(position, int) or not 0 <= position <= len(word) - len(source):
        raise EventError(f"position {position} out of range for slice '{word_to_text(word)}'", clause)
    found = word.letters[position:position + len(source)]
    if tuple(found) != source:
        want = " ".join(x.token for x in source)
        have = " ".join(x.token for x in found) or "1"
        raise EventError(f"expects '{want}' at {position}, slice has '{have}'", clause)
    return word.replace(position, len(source), target)


def event_inverse(event: Event) -> Event:
    """The event undoing `event` at the same position."""
    kind, options = event.kind, event.options
    swap = {K.GCAP: K.GCUP, K.GCUP: K.GCAP, K.ECAP: K.ECUP, K.ECUP: K.ECAP}
    if kind in swap:
        return make_event(swap[kind], event.position, **options)
    if kind is K.CROSSING:
        return make_event(kind, event.position, left=options["right"], right=options["left"])
    if kind is K.XSTAR:
        return make_event(kind, event.position, i=event.param("i"), m=event.param("m"),
                          below=event.param("m") - event.param("below"))
    if kind is K.LEVEL:
        return event
    options["reverse"] = not event.param("reverse")
    return make_event(kind, event.position, **options)


@dataclass(frozen=True)
class ChartMovie:
    degree: int
    start: Word
    events: Tuple[Event, ...] = ()

    def __post_init__(self):
        if self.start.degree != self.degree:
            raise DegreeError(f"start word has degree {self.start.degree}, movie has {self.degree}")

    def __len__(self) -> int:
        return len(self.events)

    def with_events(self, events) -> "ChartMovie":
        return ChartMovie(self.degree, self.start, tuple(events))


@lru_cache(maxsize=8192)
def movie_slices(m: ChartMovie) -> Tuple[Word, ...]:
    """Every slice of the movie, level 0 through len(events)."""
    words = [m.start]
    for index, event in enumerate(m.events):
        try:
            words.append(apply_event(words[-1], event))
        except EventError as err:
            raise EventError(err.detail, err.clause, index) from err
    return tuple(words)


def movie_slice(m: ChartMovie, level: int) -> Word:
    if not 0 <= level <= len(m.events):
        raise MovieError(f"level {level} out of range 0..{len(m.events)}")
    word = m.start
    for index, event in enumerate(m.events[:level]):
        try:
            word = apply_event(word, event)
        except EventError as err:
            raise EventError(err.detail, err.clause, index) from err
    return word


def final_word(m: ChartMovie) -> Word:
    return movie_slices(m)[-1]


# --- Validation ---


@dataclass(frozen=True)
class EventCheck:
    index: int
    kind: str
    clause: str
    ok: bool
    message: str = ""
    checked: bool = True


@dataclass(frozen=True)
class ValidationReport:
    degree: int
    checks: Tuple[EventCheck, ...]

    @property
    def valid(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def first_failure(self) -> Optional[int]:
        for check in self.checks:
            if not check.ok:
                return check.index
        return None

    @property
    def failure(self) -> Optional[EventCheck]:
        index = self.first_failure
        return None if index is None else self.checks[index]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "valid": self.valid,
            "first_failure": self.first_failure,
            "events": [
                {
                    "index": c.index,
                    "kind": c.kind,
                    "clause": c.clause,
                    "ok": c.ok,
                    "checked": c.checked,
                    "message": c.message,
                }
                for c in self.checks
            ],
        }


def validate_movie(m: ChartMovie, allow_caps: bool = True) -> ValidationReport:
    checks: List[EventCheck] = []
    word = m.start
    failed = False
    for index, event in enumerate(m.events):
        clause = event_clause(event)
        if failed:
            checks.append(EventCheck(index, event.kind.value, clause, False, "not checked", checked=False))
            continue
        if event.kind in E_CAPS and not allow_caps:
            failed = True
            checks.append(EventCheck(index, event.kind.value, clause, False, "e-edge extremum; normalize caps first"))
            continue
        try:
            word = apply_event(word, event)
            checks.append(EventCheck(index, event.kind.value, clause, True, f"slice {word_to_text(word)}"))
        except EventError as err:
            failed = True
            checks.append(EventCheck(index, event.kind.value, clause, False, str(err)))
            logger.debug(f"event {index} rejected: {err}")
    return ValidationReport(m.degree, tuple(checks))


def require_valid(m: ChartMovie, allow_caps: bool = True) -> None:
    report = validate_movie(m, allow_caps)
    if not report.valid:
        failure = report.failure
        raise MovieError(f"invalid movie: event {failure.index} [{failure.clause}] {failure.message}")


class Regularity(Enum):
    REGULAR = "regular"
    NON_REGULAR = "non-regular"


def classify(m: ChartMovie) -> Regularity:
    require_valid(m)
    if any(event.kind in (K.BRANCH, K.SQUARE_STAR) for event in m.events):
        return Regularity.NON_REGULAR
    return Regularity.REGULAR


# --- Rewriting whole movies ---


def cap_replacement(event: Event) -> List[Event]:
    """The two-event form of an e-edge minimum or maximum."""
    i, p = event.param("i"), event.position
    if event.kind is K.ECAP:
        return [make_event(K.XDOT, p, i=i), make_event(K.XTRI, p, i=i, reverse=True)]
    if event.kind is K.ECUP:
        return [make_event(K.XTRI, p, i=i), make_event(K.XDOT, p, i=i, reverse=True)]
    return [event]


def normalize_caps(m: ChartMovie) -> ChartMovie:
    require_valid(m, allow_caps=True)
    events: List[Event] = []
    for event in m.events:
        events.extend(cap_replacement(event))
    return m.with_events(events)


def _xtri(i: int, position: int, split: bool = False) -> Event:
    return make_event(K.XTRI, position, i=i, reverse=split)


def expand_event(event: Event) -> List[Event]:
    """Primitive events realizing a composite event; primitives map to themselves."""
    p = event.position
    if event.kind is K.XSTAR:
        i, m, below = event.param("i"), event.param("m"), event.param("below")
        merges = [_xtri(i, p) for _ in range(below - 1)]
        splits = [_xtri(i, p, split=True) for _ in range(m - below - 1)]
        return merges + splits
    if event.kind is K.SQUARE_STAR:
        i, side = event.param("i"), event.param("side")
        signs = [1 if s == "+" else -1 for s in event.param("signs")]
        if side == "left":
            chain = [make_event(K.BRANCH, p + t, i=i, eps=s) for t, s in enumerate(signs)]
        else:
            chain = [make_event(K.BRANCH, p, i=i, eps=s, side="right") for s in reversed(signs)]
        return _reversed_chain(chain) if event.param("reverse") else chain
    if event.kind is K.SQUARE6:
        i, j, eps, delta = (event.param(n) for n in ("i", "j", "eps", "delta"))
        chain = [
            make_event(K.SQUARE5, p, i=i, j=j, eps=eps),
            make_event(K.SQUARE5, p, i=j, j=i, eps=delta, mirror=True, reverse=True),
        ]
        return _reversed_chain(chain) if event.param("reverse") else chain
    return [event]


def _reversed_chain(chain: List[Event]) -> List[Event]:
    return [event_inverse(event) for event in reversed(chain)]


def expand_composite_vertices(m: ChartMovie) -> ChartMovie:
    require_valid(m)
    events: List[Event] = []
    for event in m.events:
        events.extend(expand_event(event))
    expanded = m.with_events(events)
    require_valid(expanded)
    return expanded


def xstar_tree_expansions(event: Event) -> List[List[Event]]:
    """Every binary-tree expansion of an XStar event into XTri events."""
    if event.kind is not K.XSTAR:
        raise EventError(f"{event.kind.value} is not an XStar event", event_clause(event))
    i, p, m, below = event.param("i"), event.position, event.param("m"), event.param("below")

    def merge_orders(count: int) -> Iterator[List[Event]]:
        if count == 1:
            yield []
            return
        for q in range(count - 1):
            for rest in merge_orders(count - 1):
                yield [_xtri(i, p + q)] + rest

    def split_orders(current: int, goal: int) -> Iterator[List[Event]]:
        if current == goal:
            yield []
            return
        for q in range(current):
            for rest in split_orders(current + 1, goal):
                yield [_xtri(i, p + q, split=True)] + rest

    return [a + b for a, b in product(list(merge_orders(below)), list(split_orders(1, m - below)))]


_EXCHANGE_TAGS = ("R9", "R10", "R11", "D18", "D19")
_RULE_EVENT = {
    "R1": K.BLACK_G, "R2": K.XDOT, "R3": K.SADDLE, "R5": K.WHITE, "D15": K.WHITE,
    "D16": K.WHITE, "D17": K.WHITE, "R6": K.SQUARE5, "R7": K.SQUARE5, "R8": K.SQUARE8,
    "R12": K.XTRI, "R13": K.BRANCH, "R14": K.BRANCH, "D20": K.BRANCH, "D21": K.BRANCH,
    "D22": K.SQUARE6,
}


def script_to_events(script: MoveScript) -> List[Event]:
    """Compile a base-rule script into the events performing the same rewrites."""
    events = []
    for step in script.steps:
        rule, p = step.rule, step.position
        reverse = step.direction is Direction.BACKWARD
        tag = rule.tag
        if tag == "R4":
            events.append(make_event(K.GCAP if reverse else K.GCUP, p, i=rule.i, eps=rule.eps))
        elif tag in _EXCHANGE_TAGS:
            lhs, rhs = rule_spec(tag).sides(rule)
            source = rhs if reverse else lhs
            events.append(make_event(K.CROSSING, p, left=source[0].token, right=source[1].token))
        elif tag in ("R1", "R3"):
            events.append(make_event(_RULE_EVENT[tag], p, i=rule.i, eps=rule.eps, reverse=reverse))
        elif tag in ("R2", "R12"):
            events.append(make_event(_RULE_EVENT[tag], p, i=rule.i, reverse=reverse))
        elif tag in ("R5", "D15", "D16", "D17"):
            events.append(make_event(K.WHITE, p, i=rule.i, j=rule.j, eps=rule.eps, variant=tag, reverse=reverse))
        elif tag in ("R6", "R7"):
            events.append(make_event(K.SQUARE5, p, i=rule.i, j=rule.j, eps=rule.eps,
                                     mirror=tag == "R7", reverse=reverse))
        elif tag == "R8":
            events.append(make_event(K.SQUARE8, p, i=rule.i, j=rule.j, reverse=reverse))
        elif tag in ("R13", "R14", "D20", "D21"):
            side = "left" if tag in ("R13", "D20") else "right"
            events.append(make_event(K.BRANCH, p, i=rule.i, eps=rule.eps, side=side, reverse=reverse))
        elif tag == "D22":
            events.append(make_event(K.SQUARE6, p, i=rule.i, j=rule.j, eps=rule.eps,
                                     delta=rule.delta, reverse=reverse))
        else:
            raise EventError(f"no event performs {tag}")
    return events


def compile_white_rotations(m: ChartMovie) -> ChartMovie:
    """Replace every non-R5 white reading by the events of its derived-rule script."""
    events: List[Event] = []
    for event in m.events:
        variant = event.param("variant") if event.kind is K.WHITE else "R5"
        if variant == "R5":
            events.append(event)
            continue
        rule = RuleId(variant, event.param("i"), event.param("j"), eps=event.param("eps"))
        chain = [ev.at(ev.position + event.position) for ev in script_to_events(expand_derived_rule(rule))]
        events.extend(_reversed_chain(chain) if event.param("reverse") else chain)
    compiled = m.with_events(events)
    require_valid(compiled)
    return compiled


def concat_movies(a: ChartMovie, b: ChartMovie) -> ChartMovie:
    """Glue `b` on top of `a` along their common interface word."""
    if a.degree != b.degree:
        raise DegreeError(f"cannot glue degree {a.degree} to degree {b.degree}")
    if final_word(a) != b.start:
        raise MovieError(f"interface mismatch: '{word_to_text(final_word(a))}' vs '{word_to_text(b.start)}'")
    return ChartMovie(a.degree, a.start, a.events + b.events)


def strip_levels(m: ChartMovie) -> ChartMovie:
    return m.with_events(event for event in m.events if event.kind is not K.LEVEL)
