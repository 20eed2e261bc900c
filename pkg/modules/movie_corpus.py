"""
Movie Corpus
Hand-built chart movies covering every event kind, used by the report, the CLI samples and the tests
"""

import logging
from pathlib import Path
from typing import Dict, Tuple

from modules.chart_movie import ChartMovie, Event, EventKind, make_event
from modules.movie_io import save_movie
from modules.word_algebra import parse_word

logger = logging.getLogger(__name__)

K = EventKind
CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def _movie(degree: int, start: str, *events: Event) -> ChartMovie:
    return ChartMovie(degree, parse_word(start, degree), tuple(events))


def _ev(kind: EventKind, position: int = 0, **params) -> Event:
    return make_event(kind, position, **params)


def build_corpus() -> Dict[str, ChartMovie]:
    """Every corpus movie by name; each one replays cleanly."""
    corpus = {
        # --- band events ---
        "black-g-pos": _movie(2, "1", _ev(K.BLACK_G, i=1, eps=1), _ev(K.BLACK_G, i=1, eps=1, reverse=True)),
        "black-g-neg": _movie(2, "1", _ev(K.BLACK_G, i=1, eps=-1), _ev(K.BLACK_G, i=1, eps=-1, reverse=True)),
        "black-g-open": _movie(2, "1", _ev(K.BLACK_G, i=1, eps=1)),
        "black-g-deg3": _movie(3, "g1", _ev(K.BLACK_G, 1, i=2, eps=1)),
        "xdot-pair": _movie(2, "1", _ev(K.XDOT, i=1), _ev(K.XDOT, i=1, reverse=True)),
        "xdot-deg4": _movie(4, "g3", _ev(K.XDOT, i=1)),
        "saddle-pos": _movie(2, "g1", _ev(K.SADDLE, i=1, eps=1), _ev(K.SADDLE, i=1, eps=1, reverse=True)),
        "saddle-neg": _movie(2, "G1", _ev(K.SADDLE, i=1, eps=-1)),
        "saddle-deg3": _movie(3, "g2 g1", _ev(K.SADDLE, 1, i=1, eps=1)),
        # --- g-edge extrema ---
        "g-loop": _movie(2, "1", _ev(K.GCAP, i=1, eps=1), _ev(K.GCUP, i=1, eps=1)),
        "g-loop-neg": _movie(3, "e2", _ev(K.GCAP, 1, i=1, eps=-1), _ev(K.GCUP, 1, i=1, eps=-1)),
        "g-cancel": _movie(2, "g1 G1", _ev(K.GCUP, i=1, eps=1)),
        "g-create": _movie(3, "1", _ev(K.GCAP, i=2, eps=-1)),
        # --- disks ---
        "e-loop-caps": _movie(2, "1", _ev(K.ECAP, i=1), _ev(K.ECUP, i=1)),
        "e-loop-normal": _movie(
            2, "1",
            _ev(K.XDOT, i=1), _ev(K.XTRI, i=1, reverse=True), _ev(K.XTRI, i=1), _ev(K.XDOT, i=1, reverse=True),
        ),
        "xtri-merges": _movie(2, "e1 e1 e1", _ev(K.XTRI, i=1), _ev(K.XTRI, i=1)),
        "xtri-split": _movie(3, "e2", _ev(K.XTRI, i=2, reverse=True)),
        "xtri-merge-deg4": _movie(4, "e1 e3 e3", _ev(K.XTRI, 1, i=3)),
        # --- white vertices ---
        "white-r5": _movie(3, "g1 g2 g1", _ev(K.WHITE, i=1, j=2)),
        "white-r5-rev": _movie(3, "g2 g1 g2", _ev(K.WHITE, i=1, j=2, reverse=True)),
        "white-r5-swap": _movie(3, "g2 g1 g2", _ev(K.WHITE, i=2, j=1)),
        "white-d15-neg": _movie(3, "G1 G2 G1", _ev(K.WHITE, i=1, j=2, eps=-1, variant="D15")),
        "white-d16": _movie(3, "g1 g2 G1", _ev(K.WHITE, i=1, j=2, variant="D16")),
        "white-d16-neg": _movie(3, "G1 G2 g1", _ev(K.WHITE, i=1, j=2, eps=-1, variant="D16")),
        "white-d17": _movie(3, "g1 G2 G1", _ev(K.WHITE, i=1, j=2, variant="D17")),
        "white-cancel": _movie(3, "g1 g2 g1", _ev(K.WHITE, i=1, j=2), _ev(K.WHITE, i=1, j=2, reverse=True)),
        "white-deg4": _movie(4, "g3 g2 g3 g1", _ev(K.WHITE, i=3, j=2)),
        # --- crossings ---
        "crossing-gg": _movie(4, "g1 g3", _ev(K.CROSSING, left="g1", right="g3")),
        "crossing-gG": _movie(4, "G1 g3", _ev(K.CROSSING, left="G1", right="g3")),
        "crossing-ge": _movie(4, "g1 e3", _ev(K.CROSSING, left="g1", right="e3")),
        "crossing-ee": _movie(4, "e1 e3", _ev(K.CROSSING, left="e1", right="e3")),
        "crossing-round": _movie(
            4, "g1 g3", _ev(K.CROSSING, left="g1", right="g3"), _ev(K.CROSSING, left="g3", right="g1"),
        ),
        # --- square vertices ---
        "square8": _movie(3, "e1 e2 e1", _ev(K.SQUARE8, i=1, j=2)),
        "square8-rev": _movie(3, "e2", _ev(K.SQUARE8, i=2, j=1, reverse=True)),
        "square5-r6": _movie(3, "g1 g2 e1", _ev(K.SQUARE5, i=1, j=2, eps=1)),
        "square5-r6-neg": _movie(3, "G1 G2 e1", _ev(K.SQUARE5, i=1, j=2, eps=-1)),
        "square5-r7": _movie(3, "e1 g2 g1", _ev(K.SQUARE5, i=1, j=2, eps=1, mirror=True)),
        "square5-rev": _movie(3, "e2 e1", _ev(K.SQUARE5, i=1, j=2, eps=1, reverse=True)),
        "square6": _movie(3, "g1 g2 e1", _ev(K.SQUARE6, i=1, j=2, eps=1, delta=1)),
        "square6-mixed": _movie(3, "G1 G2 e1", _ev(K.SQUARE6, i=1, j=2, eps=-1, delta=1)),
        "square6-rev": _movie(3, "e2 G1 G2", _ev(K.SQUARE6, i=1, j=2, eps=1, delta=-1, reverse=True)),
        # --- Reidemeister-I vertices ---
        "branch-left": _movie(2, "e1", _ev(K.BRANCH, i=1, eps=1)),
        "branch-right-neg": _movie(2, "e1", _ev(K.BRANCH, i=1, eps=-1, side="right")),
        "branch-palindrome": _movie(2, "e1", _ev(K.BRANCH, i=1, eps=1), _ev(K.BRANCH, i=1, eps=1, reverse=True)),
        "square-star-left": _movie(2, "e1", _ev(K.SQUARE_STAR, i=1, signs="+-")),
        "square-star-right": _movie(2, "e1", _ev(K.SQUARE_STAR, i=1, signs="++", side="right")),
        "square-star-rev": _movie(2, "G1 e1", _ev(K.SQUARE_STAR, i=1, signs="-", reverse=True)),
        # --- composite disks ---
        "xstar-3": _movie(2, "e1", _ev(K.XSTAR, i=1, m=3, below=1)),
        "xstar-4": _movie(2, "e1 e1 e1", _ev(K.XSTAR, i=1, m=4)),
        "xstar-4-split": _movie(2, "e1 e1", _ev(K.XSTAR, i=1, m=4, below=2)),
        "xstar-5": _movie(3, "e2 e2", _ev(K.XSTAR, i=2, m=5, below=2)),
        # --- mixed ---
        "band-then-braid": _movie(
            3, "1",
            _ev(K.BLACK_G, i=1, eps=1), _ev(K.BLACK_G, 1, i=2, eps=1), _ev(K.BLACK_G, 2, i=1, eps=1),
            _ev(K.WHITE, i=1, j=2),
        ),
        "hook-slide": _movie(
            4, "g1 e3",
            _ev(K.CROSSING, left="g1", right="e3"), _ev(K.SADDLE, 1, i=1, eps=1),
            _ev(K.CROSSING, left="e3", right="e1"),
        ),
        "level-padded": _movie(2, "g1", _ev(K.LEVEL), _ev(K.SADDLE, i=1, eps=1), _ev(K.LEVEL)),
    }
    for n in (3, 4, 5):
        corpus[f"g-loop-deg{n}"] = _movie(n, "1", _ev(K.GCAP, i=n - 1, eps=1), _ev(K.GCUP, i=n - 1, eps=1))
    logger.debug(f"built corpus of {len(corpus)} movies")
    return corpus


def normal_form_names(corpus: Dict[str, ChartMovie]) -> Tuple[str, ...]:
    """Names of corpus movies without e-edge caps or cups."""
    return tuple(
        name for name, m in corpus.items() if not any(ev.kind in (K.ECAP, K.ECUP) for ev in m.events)
    )


def save_corpus(directory: Path = CORPUS_DIR) -> int:
    directory.mkdir(parents=True, exist_ok=True)
    corpus = build_corpus()
    for name, m in corpus.items():
        save_movie(m, directory / f"{name}.movie.json")
    logger.info(f"wrote {len(corpus)} movies to {directory}")
    return len(corpus)
