"""
Test Word Algebra - Letters, tangle words and Brauer diagrams
Brauer images are checked against a strand-tracing oracle built with networkx
"""

import networkx as nx
import numpy as np
import pytest

from modules.errors import DegreeError, WordParseError
from modules.word_algebra import (
    BrauerDiagram,
    Letter,
    LetterKind,
    Word,
    brauer_image,
    concat,
    e,
    g,
    letter_from_token,
    parse_word,
    read_word_lines,
    word_to_text,
)


def traced_brauer(w: Word):
    """Pairing and loop count of a non-empty word, by tracing strands level by level."""
    n, levels = w.degree, len(w)
    graph = nx.Graph()
    graph.add_nodes_from((r, q) for r in range(levels + 1) for q in range(n))
    for r, letter in enumerate(w.letters):
        a, b = letter.index - 1, letter.index
        for q in range(n):
            if q not in (a, b):
                graph.add_edge((r, q), (r + 1, q))
        if letter.is_hook:
            graph.add_edge((r, a), (r, b))
            graph.add_edge((r + 1, a), (r + 1, b))
        else:
            graph.add_edge((r, a), (r + 1, b))
            graph.add_edge((r, b), (r + 1, a))

    def point(node) -> int:
        r, q = node
        return q if r == 0 else n + q

    pairing = [-1] * (2 * n)
    loops = 0
    for component in nx.connected_components(graph):
        ends = [node for node in component if node[0] in (0, levels)]
        if not ends:
            loops += 1
            continue
        first, second = ends
        pairing[point(first)], pairing[point(second)] = point(second), point(first)
    return tuple(pairing), loops


def random_word(rng, degree: int, length: int) -> Word:
    kinds = list(LetterKind)
    letters = [Letter(int(rng.integers(1, degree)), kinds[int(rng.integers(0, 3))]) for _ in range(length)]
    return Word(degree, tuple(letters))


# --- Parsing ---


def test_parse_and_print_tokens():
    """Tokens gI, GI, eI read bottom to top and print back unchanged"""
    w = parse_word("g1 G2 e1", 3)
    assert [x.token for x in w] == ["g1", "G2", "e1"]
    assert [x.sign for x in w] == [1, -1, 0]
    assert word_to_text(w) == "g1 G2 e1"


def test_identity_word():
    w = parse_word("1", 4)
    assert w.is_identity
    assert len(w) == 0
    assert str(w) == "1"


@pytest.mark.parametrize("text", ["", "x1", "g", "1 g1", "g1 1", "e-1"])
def test_malformed_words_rejected(text):
    with pytest.raises(WordParseError):
        parse_word(text, 3)


@pytest.mark.parametrize("text,degree", [("g0", 3), ("g3", 3), ("e2", 2), ("G5", 4)])
def test_out_of_range_letters_rejected(text, degree):
    with pytest.raises(DegreeError):
        parse_word(text, degree)


def test_degree_must_be_positive():
    with pytest.raises(DegreeError):
        Word(0)


def test_letter_helpers():
    assert g(2) == letter_from_token("g2")
    assert g(2, -1) == letter_from_token("G2")
    assert g(2).inverse() == g(2, -1)
    assert e(1).inverse() == e(1)
    with pytest.raises(ValueError):
        g(1, 0)


def test_concat_and_replace():
    a, b = parse_word("g1", 3), parse_word("e2", 3)
    assert word_to_text(concat(a, b)) == "g1 e2"
    assert word_to_text(concat(a, b).replace(0, 1, [e(1), e(1)])) == "e1 e1 e2"
    with pytest.raises(DegreeError):
        concat(a, parse_word("g1", 2))


def test_read_word_lines(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# sample words\ng1 g2\n\n1\ne2\n", encoding="utf-8")
    words = read_word_lines(path, 3)
    assert [word_to_text(w) for w in words] == ["g1 g2", "1", "e2"]


# --- Brauer diagrams ---


def test_identity_diagram():
    d = brauer_image(parse_word("1", 3))
    assert d == BrauerDiagram.identity(3)
    assert d.to_dict()["pairs"] == [["b1", "t1"], ["b2", "t2"], ["b3", "t3"]]


def test_hook_diagram():
    d = brauer_image(parse_word("e1", 2))
    assert d.to_dict() == {"degree": 2, "pairs": [["b1", "b2"], ["t1", "t2"]], "loops": 0}


def test_crossing_diagram():
    d = brauer_image(parse_word("g1", 2))
    assert d.to_dict()["pairs"] == [["b1", "t2"], ["b2", "t1"]]


def test_hook_squared_closes_a_loop():
    """e_i e_i leaves one closed component in the middle"""
    d = brauer_image(parse_word("e1 e1", 2))
    assert d.loops == 1
    assert d.pairing == brauer_image(parse_word("e1", 2)).pairing


def test_inverse_pair_is_identity():
    assert brauer_image(parse_word("g2 G2", 3)) == BrauerDiagram.identity(3)


def test_twist_absorbed_by_hook():
    assert brauer_image(parse_word("e1 g1", 2)) == brauer_image(parse_word("e1", 2))


def test_compose_rejects_mixed_degrees():
    with pytest.raises(DegreeError):
        BrauerDiagram.identity(2).compose(BrauerDiagram.identity(3))


def test_bad_pairing_rejected():
    with pytest.raises(ValueError):
        BrauerDiagram(2, (0, 1, 2, 3))


@pytest.mark.parametrize("seed", range(12))
def test_brauer_image_matches_strand_tracing(seed):
    rng = np.random.default_rng(seed)
    degree = int(rng.integers(2, 6))
    w = random_word(rng, degree, int(rng.integers(1, 9)))
    d = brauer_image(w)
    assert (d.pairing, d.loops) == traced_brauer(w)
