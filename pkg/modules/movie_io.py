"""
Movie Files
JSON load/save for chart movies: {degree, start, events: [{kind, position, params}]}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

from modules.chart_movie import ChartMovie, Event, EventKind, make_event
from modules.errors import BMWError, FormatError
from modules.word_algebra import parse_word, word_to_text

logger = logging.getLogger(__name__)

SCALARS = (str, int, float, bool, type(None))


def event_to_dict(event: Event) -> Dict[str, Any]:
    return {"kind": event.kind.value, "position": event.position, "params": dict(event.params)}


def event_from_dict(data: Dict[str, Any]) -> Event:
    try:
        kind = EventKind(data["kind"])
    except (KeyError, ValueError) as err:
        raise FormatError(f"bad event kind in {data!r}") from err
    position = data.get("position", 0)
    if not isinstance(position, int) or isinstance(position, bool):
        raise FormatError(f"event position must be an integer, got {position!r}")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise FormatError(f"event params must be an object, got {params!r}")
    for name, value in params.items():
        if not isinstance(value, SCALARS):
            raise FormatError(f"event parameter {name!r} must be a string, number or boolean, got {value!r}")
    return make_event(kind, position, **params)


def movie_to_dict(m: ChartMovie) -> Dict[str, Any]:
    return {
        "degree": m.degree,
        "start": word_to_text(m.start),
        "events": [event_to_dict(event) for event in m.events],
    }


def movie_from_dict(data: Dict[str, Any]) -> ChartMovie:
    try:
        degree = int(data["degree"])
        start = parse_word(str(data.get("start", "1")), degree)
        events = tuple(event_from_dict(item) for item in data.get("events", []))
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, BMWError) as err:
        raise FormatError(f"malformed movie: {err}") from err
    return ChartMovie(degree, start, events)


def dumps_movie(m: ChartMovie) -> str:
    return json.dumps(movie_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def loads_movie(text: str) -> ChartMovie:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise FormatError(f"movie file is not JSON: {err}") from err
    return movie_from_dict(data)


def load_movie(path: Path) -> ChartMovie:
    with open(path, "r", encoding="utf-8") as f:
        movie = loads_movie(f.read())
    logger.debug(f"loaded {path}: degree {movie.degree}, {len(movie.events)} events")
    return movie


def save_movie(m: ChartMovie, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_movie(m))
    logger.info(f"saved movie to {path}")
