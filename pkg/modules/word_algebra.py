"""
BMW Word Algebra
Letters g_i, g_i^-1, e_i, tangle words of degree n and their Brauer diagrams
"""

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

from modules.errors import DegreeError, WordParseError

TOKEN_PATTERN = re.compile(r"^([gGe])(\d+)$")
IDENTITY_TOKEN = "1"


class LetterKind(Enum):
    POSITIVE = "g"
    NEGATIVE = "G"
    HOOK = "e"


@dataclass(frozen=True)
class Letter:
    index: int
    kind: LetterKind

    @property
    def token(self) -> str:
        return f"{self.kind.value}{self.index}"

    @property
    def sign(self) -> int:
        """+1 for g_i, -1 for g_i^-1, 0 for e_i."""
        if self.kind is LetterKind.POSITIVE:
            return 1
        if self.kind is LetterKind.NEGATIVE:
            return -1
        return 0

    @property
    def is_hook(self) -> bool:
        return self.kind is LetterKind.HOOK

    def inverse(self) -> "Letter":
        if self.kind is LetterKind.POSITIVE:
            return Letter(self.index, LetterKind.NEGATIVE)
        if self.kind is LetterKind.NEGATIVE:
            return Letter(self.index, LetterKind.POSITIVE)
        return self

    def __str__(self) -> str:
        return self.token


def g(i: int, eps: int = 1) -> Letter:
    """g_i^eps for eps in {+1, -1}."""
    if eps not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {eps}")
    return Letter(i, LetterKind.POSITIVE if eps == 1 else LetterKind.NEGATIVE)


def e(i: int) -> Letter:
    return Letter(i, LetterKind.HOOK)


def letter_from_token(token: str) -> Letter:
    match = TOKEN_PATTERN.match(token)
    if not match:
        raise WordParseError(f"malformed token {token!r}")
    return Letter(int(match.group(2)), LetterKind(match.group(1)))


@dataclass(frozen=True)
class Word:
    """A BMW tangle word; letters read bottom to top, the empty tuple is the identity."""

    degree: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise DegreeError(f"degree must be at least 1, got {self.degree}")
        for letter in self.letters:
            if not 1 <= letter.index <= self.degree - 1:
                raise DegreeError(f"letter {letter.token} out of range for degree {self.degree}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        return self.letters[item]

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def replace(self, position: int, length: int, letters: Iterable[Letter]) -> "Word":
        """Swap letters[position:position+length] for `letters`."""
        head = self.letters[:position]
        tail = self.letters[position + length:]
        return Word(self.degree, head + tuple(letters) + tail)

    def __str__(self) -> str:
        return word_to_text(self)


def parse_word(text: str, degree: int) -> Word:
    tokens = text.split()
    if not tokens:
        raise WordParseError("empty word text; use '1' for the identity")
    if tokens == [IDENTITY_TOKEN]:
        return Word(degree)
    if IDENTITY_TOKEN in tokens:
        raise WordParseError("'1' must be the only token of the identity word")
    return Word(degree, tuple(letter_from_token(t) for t in tokens))


def word_to_text(w: Word) -> str:
    if w.is_identity:
        return IDENTITY_TOKEN
    return " ".join(letter.token for letter in w.letters)


def concat(a: Word, b: Word) -> Word:
    """a below b."""
    if a.degree != b.degree:
        raise DegreeError(f"cannot concatenate degree {a.degree} with degree {b.degree}")
    return Word(a.degree, a.letters + b.letters)


def read_word_lines(path: Path, degree: int) -> List[Word]:
    """One word per line; blank lines and '#' comments are skipped."""
    words = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.append(parse_word(line, degree))
    return words


# --- Brauer diagrams ---
# Points 0..n-1 are bottom_1..bottom_n, points n..2n-1 are top_1..top_n.


@dataclass(frozen=True)
class BrauerDiagram:
    degree: int
    pairing: Tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        size = 2 * self.degree
        if len(self.pairing) != size:
            raise DegreeError(f"pairing needs {size} entries, got {len(self.pairing)}")
        for point, partner in enumerate(self.pairing):
            if partner == point or self.pairing[partner] != point:
                raise ValueError(f"pairing is not a fixed-point-free involution at {point}")

    @classmethod
    def identity(cls, degree: int) -> "BrauerDiagram":
        n = degree
        return cls(degree, tuple(list(range(n, 2 * n)) + list(range(n))))

    @classmethod
    def of_letter(cls, degree: int, letter: Letter) -> "BrauerDiagram":
        n = degree
        pairing = list(range(n, 2 * n)) + list(range(n))
        a, b = letter.index - 1, letter.index
        if letter.is_hook:
            pairing[a], pairing[b] = b, a
            pairing[n + a], pairing[n + b] = n + b, n + a
        else:
            pairing[a], pairing[n + b] = n + b, a
            pairing[b], pairing[n + a] = n + a, b
        return cls(degree, tuple(pairing))

    def compose(self, other: "BrauerDiagram") -> "BrauerDiagram":
        """Stack `self` below `other`; closed cycles in the middle become loops."""
        if self.degree != other.degree:
            raise DegreeError(f"cannot compose degree {self.degree} with degree {other.degree}")
        n = self.degree
        # outer points: self bottoms keep ids 0..n-1, other tops keep ids n..2n-1
        result = [-1] * (2 * n)
        seen_middle = set()

        def walk(start_in_self: bool, point: int) -> int:
            in_self = start_in_self
            while True:
                partner = (self if in_self else other).pairing[point]
                if in_self and partner < n:
                    return partner
                if not in_self and partner >= n:
                    return partner
                middle = partner - n if in_self else partner
                seen_middle.add(middle)
                in_self = not in_self
                point = middle if not in_self else middle + n

        for point in range(n):
            if result[point] == -1:
                end = walk(True, point)
                result[point], result[end] = end, point
        for point in range(n, 2 * n):
            if result[point] == -1:
                end = walk(False, point)
                result[point], result[end] = end, point

        loops = 0
        for middle in range(n):
            if middle in seen_middle:
                continue
            loops += 1
            point, in_self = middle + n, True
            while True:
                seen_middle.add(point - n if in_self else point)
                partner = (self if in_self else other).pairing[point]
                nxt = partner - n if in_self else partner
                if nxt in seen_middle:
                    break
                in_self = not in_self
                point = nxt if not in_self else nxt + n
        return BrauerDiagram(n, tuple(result), self.loops + other.loops + loops)

    def to_dict(self) -> Dict[str, object]:
        n = self.degree

        def name(p: int) -> str:
            return f"b{p + 1}" if p < n else f"t{p - n + 1}"

        pairs = sorted(
            (name(p), name(q)) for p, q in enumerate(self.pairing) if p < q
        )
        return {"degree": n, "pairs": [list(pair) for pair in pairs], "loops": self.loops}


def brauer_image(w: Word) -> BrauerDiagram:
    diagram = BrauerDiagram.identity(w.degree)
    for letter in w.letters:
        diagram = diagram.compose(BrauerDiagram.of_letter(w.degree, letter))
    return diagram
