"""
BMW Word Rules
Normal-form moves R1-R14 on tangle words, derived moves D15-D24 and their replay scripts
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from modules.errors import MoveScriptError, RuleError
from modules.word_algebra import Letter, Word, e, g

logger = logging.getLogger(__name__)

Sides = Tuple[Tuple[Letter, ...], Tuple[Letter, ...]]


class Category(Enum):
    BAND = "band"
    DISK = "disk"
    ISOTOPY_REGULAR = "isotopy-regular"
    ISOTOPY_RI = "isotopy-RI"


class Direction(Enum):
    FORWARD = "->"
    BACKWARD = "<-"

    @property
    def flipped(self) -> "Direction":
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD


@dataclass(frozen=True)
class RuleId:
    tag: str
    i: int
    j: Optional[int] = None
    eps: int = 1
    delta: int = 1
    k: int = 0

    @property
    def category(self) -> Category:
        return rule_spec(self.tag).category

    def __str__(self) -> str:
        parts = [f"i={self.i}"]
        if self.j is not None:
            parts.append(f"j={self.j}")
        spec = RULES.get(self.tag)
        if spec is None or spec.signed:
            parts.append(f"eps={self.eps:+d}")
        if spec is None or spec.uses_delta:
            parts.append(f"delta={self.delta:+d}")
        if spec is None or spec.uses_k:
            parts.append(f"k={self.k}")
        return f"{self.tag}({', '.join(parts)})"


@dataclass(frozen=True)
class RuleSpec:
    tag: str
    category: Category
    relation: Optional[str]  # "adjacent", "far" or None when the rule has no j
    signed: bool
    uses_delta: bool
    uses_k: bool
    derived: bool
    sides: Callable[[RuleId], Sides]


def _exchange(a: Letter, b: Letter) -> Sides:
    """Adjacent transposition a b <-> b a of two distant letters."""
    return (a, b), (b, a)


def _power(i: int, k: int) -> Tuple[Letter, ...]:
    sign = 1 if k > 0 else -1
    return tuple(g(i, sign) for _ in range(abs(k)))


def _spec(tag, category, relation, sides, signed=False, delta=False, k=False):
    return RuleSpec(tag, category, relation, signed, delta, k, tag.startswith("D"), sides)


BAND, DISK = Category.BAND, Category.DISK
REG, RI = Category.ISOTOPY_REGULAR, Category.ISOTOPY_RI

RULES: Dict[str, RuleSpec] = {
    spec.tag: spec
    for spec in [
        _spec("R1", BAND, None, lambda r: ((), (g(r.i, r.eps),)), signed=True),
        _spec("R2", BAND, None, lambda r: ((), (e(r.i),))),
        _spec("R3", BAND, None, lambda r: ((g(r.i, r.eps),), (e(r.i),)), signed=True),
        _spec("R4", REG, None, lambda r: ((g(r.i, r.eps), g(r.i, -r.eps)), ()), signed=True),
        _spec(
            "R5", REG, "adjacent",
            lambda r: ((g(r.i), g(r.j), g(r.i)), (g(r.j), g(r.i), g(r.j))),
        ),
        _spec(
            "R6", REG, "adjacent",
            lambda r: ((g(r.i, r.eps), g(r.j, r.eps), e(r.i)), (e(r.j), e(r.i))),
            signed=True,
        ),
        _spec(
            "R7", REG, "adjacent",
            lambda r: ((e(r.i), g(r.j, r.eps), g(r.i, r.eps)), (e(r.i), e(r.j))),
            signed=True,
        ),
        _spec("R8", REG, "adjacent", lambda r: ((e(r.i), e(r.j), e(r.i)), (e(r.i),))),
        _spec("R9", REG, "far", lambda r: _exchange(g(r.i), g(r.j))),
        _spec("R10", REG, "far", lambda r: _exchange(g(r.i), e(r.j))),
        _spec("R11", REG, "far", lambda r: _exchange(e(r.i), e(r.j))),
        _spec("R12", DISK, None, lambda r: ((e(r.i), e(r.i)), (e(r.i),))),
        _spec("R13", RI, None, lambda r: ((e(r.i),), (g(r.i), e(r.i)))),
        _spec("R14", RI, None, lambda r: ((e(r.i),), (e(r.i), g(r.i)))),
        _spec(
            "D15", REG, "adjacent",
            lambda r: (
                (g(r.i, r.eps), g(r.j, r.eps), g(r.i, r.eps)),
                (g(r.j, r.eps), g(r.i, r.eps), g(r.j, r.eps)),
            ),
            signed=True,
        ),
        _spec(
            "D16", REG, "adjacent",
            lambda r: (
                (g(r.i, r.eps), g(r.j, r.eps), g(r.i, -r.eps)),
                (g(r.j, -r.eps), g(r.i, r.eps), g(r.j, r.eps)),
            ),
            signed=True,
        ),
        _spec(
            "D17", REG, "adjacent",
            lambda r: (
                (g(r.i, r.eps), g(r.j, -r.eps), g(r.i, -r.eps)),
                (g(r.j, -r.eps), g(r.i, -r.eps), g(r.j, r.eps)),
            ),
            signed=True,
        ),
        _spec("D18", REG, "far", lambda r: _exchange(g(r.i, r.eps), g(r.j, r.delta)), signed=True, delta=True),
        _spec("D19", REG, "far", lambda r: _exchange(g(r.i, r.eps), e(r.j)), signed=True),
        _spec("D20", RI, None, lambda r: ((e(r.i),), (g(r.i, r.eps), e(r.i))), signed=True),
        _spec("D21", RI, None, lambda r: ((e(r.i),), (e(r.i), g(r.i, r.eps))), signed=True),
        _spec(
            "D22", REG, "adjacent",
            lambda r: ((g(r.i, r.eps), g(r.j, r.eps), e(r.i)), (e(r.j), g(r.i, r.delta), g(r.j, r.delta))),
            signed=True,
            delta=True,
        ),
        _spec("D23", RI, None, lambda r: ((e(r.i),), _power(r.i, r.k) + (e(r.i),)), k=True),
        _spec("D24", RI, None, lambda r: ((e(r.i),), (e(r.i),) + _power(r.i, r.k)), k=True),
    ]
}

TAG_ORDER = {tag: position for position, tag in enumerate(RULES)}
BASE_TAGS = [tag for tag, spec in RULES.items() if not spec.derived]
DERIVED_TAGS = [tag for tag, spec in RULES.items() if spec.derived]


def rule_spec(tag: str) -> RuleSpec:
    spec = RULES.get(tag)
    if spec is None:
        raise RuleError(f"unknown rule {tag!r}", tag=tag)
    return spec


def rule_sides(rule: RuleId, degree: int) -> Sides:
    """Return (lhs, rhs) for `rule` after checking its index and sign constraints."""
    spec = rule_spec(rule.tag)

    def fail(message: str) -> RuleError:
        return RuleError(f"{rule}: {message}", tag=rule.tag)

    if not 1 <= rule.i <= degree - 1:
        raise fail(f"index i out of range for degree {degree}")
    if spec.relation is None:
        if rule.j is not None:
            raise fail("rule takes no second index")
    else:
        if rule.j is None:
            raise fail("rule needs a second index j")
        if not 1 <= rule.j <= degree - 1:
            raise fail(f"index j out of range for degree {degree}")
        gap = abs(rule.i - rule.j)
        if spec.relation == "adjacent" and gap != 1:
            raise fail("needs |i-j| = 1")
        if spec.relation == "far" and gap <= 1:
            raise fail("needs |i-j| > 1")
    for name, value, used in (("eps", rule.eps, spec.signed), ("delta", rule.delta, spec.uses_delta)):
        if value not in (1, -1):
            raise fail(f"{name} must be +1 or -1")
        if not used and value != 1:
            raise fail(f"rule takes no sign {name}")
    if not spec.uses_k and rule.k != 0:
        raise fail("rule takes no power k")
    return spec.sides(rule)


def apply_rule(w: Word, rule: RuleId, position: int, direction: Direction = Direction.FORWARD) -> Word:
    lhs, rhs = rule_sides(rule, w.degree)
    source, target = (lhs, rhs) if direction is Direction.FORWARD else (rhs, lhs)
    if not 0 <= position <= len(w) - len(source):
        raise RuleError(f"{rule} {direction.value}: position {position} out of range", rule.tag, position)
    if tuple(w.letters[position:position + len(source)]) != source:
        raise RuleError(f"{rule} {direction.value}: pattern mismatch at {position}", rule.tag, position)
    return w.replace(position, len(source), target)


def _parameter_grid(spec: RuleSpec, degree: int) -> Iterable[RuleId]:
    indices = range(1, degree)
    signs = (1, -1) if spec.signed else (1,)
    deltas = (1, -1) if spec.uses_delta else (1,)
    for i in indices:
        js = [None] if spec.relation is None else [
            j for j in indices
            if (abs(i - j) == 1 if spec.relation == "adjacent" else abs(i - j) > 1)
        ]
        for j in js:
            for eps in signs:
                for delta in deltas:
                    yield RuleId(spec.tag, i, j, eps, delta)


Application = Tuple[RuleId, int, Direction]


def enumerate_rule_applications(
    w: Word,
    categories: Iterable,
    include_derived: bool = False,
    free_insertions: bool = False,
) -> List[Application]:
    """Every (rule, position, direction) that apply_rule accepts on `w`.

    R4 read backwards inserts g g^-1 anywhere, so it is only listed when
    `free_insertions` is set. D23/D24 are never listed.
    """
    wanted = {Category(c) for c in categories}
    found = []
    for tag, spec in RULES.items():
        if spec.category not in wanted or spec.uses_k:
            continue
        if spec.derived and not include_derived:
            continue
        for rule in _parameter_grid(spec, w.degree):
            lhs, rhs = spec.sides(rule)
            for direction, source in ((Direction.FORWARD, lhs), (Direction.BACKWARD, rhs)):
                if tag == "R4" and direction is Direction.BACKWARD and not free_insertions:
                    continue
                width = len(source)
                for position in range(len(w) - width + 1):
                    if tuple(w.letters[position:position + width]) == source:
                        found.append((rule, position, direction))

    def key(item: Application):
        rule, position, direction = item
        return (position, TAG_ORDER[rule.tag], direction.value != "->", rule.i, rule.j or 0, -rule.eps, -rule.delta)

    return sorted(found, key=key)


# --- Move scripts ---


@dataclass(frozen=True)
class ScriptStep:
    rule: RuleId
    position: int
    direction: Direction

    def __str__(self) -> str:
        return f"{self.rule} {self.direction.value} @{self.position}"


@dataclass(frozen=True)
class MoveScript:
    steps: Tuple[ScriptStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "MoveScript") -> "MoveScript":
        return MoveScript(self.steps + other.steps)

    def shifted(self, offset: int) -> "MoveScript":
        return MoveScript(tuple(ScriptStep(s.rule, s.position + offset, s.direction) for s in self.steps))

    def lines(self) -> List[str]:
        return [str(step) for step in self.steps]


FWD, BWD = Direction.FORWARD, Direction.BACKWARD


def _script(*steps: Tuple) -> MoveScript:
    """Build a script from (tag, position, direction, rule kwargs) tuples."""
    return MoveScript(tuple(ScriptStep(RuleId(tag, **params), pos, d) for tag, pos, d, params in steps))


def _insert_pair(i: int, eps: int, position: int) -> MoveScript:
    """g_i^eps g_i^-eps inserted at `position`."""
    return _script(("R4", position, BWD, {"i": i, "eps": eps}))


def _cancel_pair(i: int, eps: int, position: int) -> MoveScript:
    return _script(("R4", position, FWD, {"i": i, "eps": eps}))


def _expand_d15(i: int, j: int, eps: int) -> MoveScript:
    if eps == 1:
        return _script(("R5", 0, FWD, {"i": i, "j": j}))
    # insert g_j g_i g_j g_j^-1 g_i^-1 g_j^-1 after the word, braid, then cancel inwards
    return (
        _insert_pair(j, 1, 3)
        + _insert_pair(i, 1, 4)
        + _insert_pair(j, 1, 5)
        + _script(("R5", 3, BWD, {"i": i, "j": j}))
        + _cancel_pair(i, -1, 2)
        + _cancel_pair(j, -1, 1)
        + _cancel_pair(i, -1, 0)
    )


def _expand_d18(i: int, j: int, eps: int, delta: int) -> MoveScript:
    if eps == delta == 1:
        return _script(("R9", 0, FWD, {"i": i, "j": j}))
    if eps == delta == -1:
        return (
            _insert_pair(i, 1, 2)
            + _insert_pair(j, 1, 3)
            + _script(("R9", 2, FWD, {"i": i, "j": j}))
            + _cancel_pair(j, -1, 1)
            + _cancel_pair(i, -1, 0)
        )
    return _insert_pair(j, -eps, 0) + _expand_d18(j, i, eps, eps).shifted(1) + _cancel_pair(j, eps, 2)


def _expand_d20(i: int, eps: int) -> MoveScript:
    if eps == 1:
        return _script(("R13", 0, FWD, {"i": i}))
    return _insert_pair(i, -1, 0) + _script(("R13", 1, BWD, {"i": i}))


def _expand_d21(i: int, eps: int) -> MoveScript:
    if eps == 1:
        return _script(("R14", 0, FWD, {"i": i}))
    return _insert_pair(i, 1, 1) + _script(("R14", 0, BWD, {"i": i}))


def expand_derived_rule(rule: RuleId) -> MoveScript:
    """Script over base rules taking the rule's left side (at offset 0) to its right side."""
    spec = rule_spec(rule.tag)
    if not spec.derived:
        raise RuleError(f"{rule.tag} is a base rule, not a derived one", tag=rule.tag)
    i, j, eps, delta, k = rule.i, rule.j, rule.eps, rule.delta, rule.k
    if rule.tag == "D15":
        return _expand_d15(i, j, eps)
    if rule.tag == "D16":
        return _insert_pair(j, -eps, 0) + _expand_d15(j, i, eps).shifted(1) + _cancel_pair(i, eps, 3)
    if rule.tag == "D17":
        return _insert_pair(j, -eps, 3) + _expand_d15(j, i, -eps).shifted(1) + _cancel_pair(i, eps, 0)
    if rule.tag == "D18":
        return _expand_d18(i, j, eps, delta)
    if rule.tag == "D19":
        if eps == 1:
            return _script(("R10", 0, FWD, {"i": i, "j": j}))
        return _insert_pair(i, 1, 2) + _script(("R10", 1, BWD, {"i": i, "j": j})) + _cancel_pair(i, -1, 0)
    if rule.tag == "D20":
        return _expand_d20(i, eps)
    if rule.tag == "D21":
        return _expand_d21(i, eps)
    if rule.tag == "D22":
        return _script(
            ("R6", 0, FWD, {"i": i, "j": j, "eps": eps}),
            ("R7", 0, BWD, {"i": j, "j": i, "eps": delta}),
        )
    if rule.tag == "D23":
        script = MoveScript()
        for step in range(abs(k)):
            script = script + _expand_d20(i, 1 if k > 0 else -1).shifted(step)
        return script
    # D24
    script = MoveScript()
    for _ in range(abs(k)):
        script = script + _expand_d21(i, 1 if k > 0 else -1)
    return script


def verify_move_script(start: Word, script: MoveScript) -> Word:
    word = start
    for index, step in enumerate(script.steps):
        try:
            word = apply_rule(word, step.rule, step.position, step.direction)
        except RuleError as err:
            raise MoveScriptError(index, err) from err
        logger.debug(f"step {index}: {step} -> {word}")
    return word


def derived_rule_words(rule: RuleId, degree: int) -> Tuple[Word, Word]:
    """The two sides of a rule as words of the given degree."""
    lhs, rhs = rule_sides(rule, degree)
    return Word(degree, lhs), Word(degree, rhs)


def parse_rule(tag: str, i: int, j: Optional[int] = None, eps: int = 1, delta: int = 1, k: int = 0) -> RuleId:
    rule_spec(tag)
    return RuleId(tag, i, j, eps, delta, k)
