"""
BMW Charts CLI
Parse and rewrite tangle words, validate and convert chart movies, search chart moves, render SVG
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Union

from modules.chart_io import chart_from_dict, dumps_chart
from modules.chart_movie import (
    ChartMovie,
    classify,
    expand_composite_vertices,
    normalize_caps,
    validate_movie,
)
from modules.chart_moves import (
    MoveInstance,
    MoveKind,
    apply_chart_move,
    applicable_moves,
    equivalent_bounded,
    format_witness,
    read_witness_log,
    replay_witness,
)
from modules.converters import (
    ChartGraph,
    chart_graph_to_movie,
    movie_to_chart_graph,
    surface_invariants,
    surface_invariants_extended,
    validate_chart_graph,
)
from modules.corpus_report import write_report
from modules.errors import BMWError, FormatError
from modules.logging_setup import configure_logging
from modules.movie_corpus import CORPUS_DIR, save_corpus
from modules.movie_io import dumps_movie, movie_from_dict
from modules.render_svg import CHART, MOVIE_STRIP, RenderSpec, render_svg
from modules.settings import Settings, load_settings
from modules.word_algebra import Word, brauer_image, parse_word, read_word_lines, word_to_text
from modules.word_rules import (
    Category,
    Direction,
    RuleId,
    apply_rule,
    derived_rule_words,
    enumerate_rule_applications,
    expand_derived_rule,
    parse_rule,
    verify_move_script,
)

logger = logging.getLogger("bmw_charts")

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _load_any(path: str) -> Union[ChartMovie, ChartGraph]:
    """A movie or a chart, told apart by the keys of the JSON file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise FormatError(f"{path} is not JSON: {err}") from err
    if not isinstance(data, dict):
        raise FormatError(f"{path} does not hold a movie or a chart")
    if "vertices" in data or "edges" in data:
        return chart_from_dict(data)
    return movie_from_dict(data)


def _load_movie(path: str) -> ChartMovie:
    item = _load_any(path)
    if not isinstance(item, ChartMovie):
        raise FormatError(f"{path} holds a chart, expected a movie")
    return item


def _load_chart(path: str) -> ChartGraph:
    item = _load_any(path)
    if not isinstance(item, ChartGraph):
        raise FormatError(f"{path} holds a movie, expected a chart")
    return item


def _rule_from_args(args) -> RuleId:
    return parse_rule(args.rule, args.i, args.j, args.eps, args.delta, args.k)


# --- Subcommands ---


def _word_summary(w: Word) -> dict:
    return {"word": word_to_text(w), "length": len(w), "brauer": brauer_image(w).to_dict()}


def cmd_parse(args, settings: Settings) -> int:
    if args.file and args.word:
        raise UsageError("give either words or --file, not both")
    if args.file:
        # one summary per line of the word file
        words = read_word_lines(Path(args.file), args.degree)
        _emit(_json([_word_summary(w) for w in words]), args.out)
        return EXIT_OK
    if not args.word:
        raise UsageError("parse needs a word or --file")
    _emit(_json(_word_summary(parse_word(" ".join(args.word), args.degree))), args.out)
    return EXIT_OK


def cmd_validate(args, settings: Settings) -> int:
    item = _load_any(args.file)
    if isinstance(item, ChartGraph):
        problems = validate_chart_graph(item)
        _emit(_json({"valid": not problems, "problems": problems}), args.out)
        return EXIT_OK if not problems else EXIT_INVALID
    report = validate_movie(item)
    _emit(_json(report.to_dict()), args.out)
    if not report.valid:
        failure = report.failure
        logger.error(f"event {failure.index} [{failure.clause}] {failure.message}")
        return EXIT_INVALID
    return EXIT_OK


def cmd_rewrite(args, settings: Settings) -> int:
    w = parse_word(" ".join(args.word), args.degree)
    if args.list:
        categories = args.category or [c.value for c in Category]
        lines = [
            f"{rule.tag} {rule} {direction.value} @{position} => "
            f"{word_to_text(apply_rule(w, rule, position, direction))}"
            for rule, position, direction in enumerate_rule_applications(
                w, categories, include_derived=args.derived, free_insertions=args.free
            )
        ]
        _emit("".join(line + "\n" for line in lines), args.out)
        return EXIT_OK
    if args.rule is None or args.i is None or args.position is None:
        raise UsageError("rewrite needs --rule, --i and --position, or --list")
    direction = Direction.BACKWARD if args.backward else Direction.FORWARD
    result = apply_rule(w, _rule_from_args(args), args.position, direction)
    _emit(word_to_text(result) + "\n", args.out)
    return EXIT_OK


def cmd_expand(args, settings: Settings) -> int:
    rule = parse_rule(args.tag, args.i, args.j, args.eps, args.delta, args.k)
    script = expand_derived_rule(rule)
    lhs, rhs = derived_rule_words(rule, args.degree)
    reached = verify_move_script(lhs, script)
    lines = script.lines()
    verdict = "verified" if reached == rhs else "MISMATCH"
    lines.append(f"# {verdict}: {word_to_text(lhs)} -> {word_to_text(reached)}")
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK if reached == rhs else EXIT_INVALID


def cmd_chart_from_movie(args, settings: Settings) -> int:
    m = _load_movie(args.movie)
    if args.normalize:
        m = normalize_caps(m)
    _emit(dumps_chart(movie_to_chart_graph(m)), args.out)
    return EXIT_OK


def cmd_movie_from_chart(args, settings: Settings) -> int:
    m = chart_graph_to_movie(_load_chart(args.chart), canonical_white=args.canonical_white)
    _emit(dumps_movie(m), args.out)
    return EXIT_OK


def cmd_invariants(args, settings: Settings) -> int:
    m = _load_movie(args.movie)
    inv = surface_invariants_extended(m) if args.normalize else surface_invariants(m)
    data = inv.to_dict()
    data["regularity"] = classify(m).value
    _emit(_json(data), args.out)
    return EXIT_OK


def cmd_expand_composites(args, settings: Settings) -> int:
    _emit(dumps_movie(expand_composite_vertices(_load_movie(args.movie))), args.out)
    return EXIT_OK


def cmd_moves(args, settings: Settings) -> int:
    m = _load_movie(args.movie)
    templates = str(settings.templates_path)
    if args.apply:
        moved = replay_witness(m, read_witness_log(Path(args.apply)), settings.b2prime, templates)
        _emit(dumps_movie(moved), args.out)
        return EXIT_OK
    found = applicable_moves(m, args.kind, settings.move_window, settings.b2prime, args.grow, templates)
    _emit(format_witness(found), args.out)
    logger.info(f"{len(found)} applicable moves")
    return EXIT_OK


def cmd_search(args, settings: Settings) -> int:
    a, b = _load_movie(args.source), _load_movie(args.target)
    result = equivalent_bounded(
        a,
        b,
        depth=settings.search_depth,
        budget=settings.search_budget,
        workers=settings.search_workers,
        kinds=args.kind,
        window=settings.move_window,
        b2prime=settings.b2prime,
        grow=args.grow,
        templates_path=str(settings.templates_path),
    )
    if result.found:
        _emit(format_witness(result.witness), args.out)
        logger.info(f"equivalent: witness of {len(result.witness)} moves, {result.explored} movies explored")
        return EXIT_OK
    if result.budget_exhausted:
        logger.error(f"budget of {settings.search_budget} movies exhausted at depth {result.depth_reached}")
        return EXIT_BUDGET
    _emit(f"# not found within depth {settings.search_depth} ({result.explored} movies explored)\n", args.out)
    logger.warning("no witness found; this does not show the movies are inequivalent")
    return EXIT_OK


def cmd_render(args, settings: Settings) -> int:
    item = _load_any(args.input)
    spec = RenderSpec(target=args.target, size=args.size)
    _emit(render_svg(item, spec), args.out)
    return EXIT_OK


def cmd_report(args, settings: Settings) -> int:
    out = args.out or str(Path(args.directory) / "report.csv")
    table = write_report(Path(args.directory), Path(out), Path(args.kinds) if args.kinds else None)
    logger.info(f"{len(table)} rows")
    return EXIT_OK


def cmd_corpus(args, settings: Settings) -> int:
    count = save_corpus(Path(args.directory))
    logger.info(f"{count} sample movies in {args.directory}")
    return EXIT_OK


def cmd_apply_move(args, settings: Settings) -> int:
    # single instance given on the command line as a witness line
    m = _load_movie(args.movie)
    moved = apply_chart_move(m, MoveInstance.from_line(args.line), settings.b2prime, str(settings.templates_path))
    _emit(dumps_movie(moved), args.out)
    return EXIT_OK


# --- Parser ---


def _add_rule_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--eps", type=int, default=1)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--k", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    # options shared by every subcommand, accepted after the subcommand name
    common = _Parser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="debug diagnostics")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--b2prime", action="store_true", default=None, help="tangle moves use condition (b2')")
    common.add_argument("--depth", type=int, help="search depth")
    common.add_argument("--budget", type=int, help="search node budget")
    common.add_argument("--workers", type=int, help="search worker threads")
    common.add_argument("--window", type=int, help="longest span examined for moves")

    parser = _Parser(prog="bmw_charts", description=__doc__.strip().splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=text, parents=[common])

    p = command("parse", "canonical text and Brauer image of a word")
    p.add_argument("word", nargs="*")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--file", help="read one word per line from this file")
    p.set_defaults(handler=cmd_parse)

    p = command("validate", "check a movie or chart file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = command("rewrite", "apply one rule to a word, or list all applications")
    p.add_argument("word", nargs="+")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--rule")
    p.add_argument("--position", type=int)
    p.add_argument("--backward", action="store_true")
    p.add_argument("--list", action="store_true")
    p.add_argument("--category", action="append", choices=[c.value for c in Category])
    p.add_argument("--derived", action="store_true", help="also list D15-D22")
    p.add_argument("--free", action="store_true", help="also list g g^-1 insertions")
    _add_rule_options(p)
    p.set_defaults(handler=cmd_rewrite)

    p = command("expand", "base-rule script of a derived rule, verified")
    p.add_argument("tag")
    p.add_argument("--degree", type=int, required=True)
    _add_rule_options(p)
    p.set_defaults(handler=cmd_expand)

    p = command("expand-composites", "replace composite vertices by primitive events")
    p.add_argument("movie")
    p.set_defaults(handler=cmd_expand_composites)

    p = command("chart-from-movie", "planar chart of a movie")
    p.add_argument("movie")
    p.add_argument("--normalize", action="store_true", help="replace e-edge caps first")
    p.set_defaults(handler=cmd_chart_from_movie)

    p = command("movie-from-chart", "leveled movie of a chart")
    p.add_argument("chart")
    p.add_argument("--canonical-white", action="store_true")
    p.set_defaults(handler=cmd_movie_from_chart)

    p = command("invariants", "Euler characteristic and boundary of the presented surface")
    p.add_argument("movie")
    p.add_argument("--normalize", action="store_true", help="accept e-edge caps")
    p.set_defaults(handler=cmd_invariants)

    p = command("moves", "list applicable chart moves, or replay a witness log")
    p.add_argument("movie")
    p.add_argument("--kind", action="append", choices=[k.value for k in MoveKind])
    p.add_argument("--grow", action="store_true", help="include closed-loop insertions")
    p.add_argument("--apply", help="witness log to replay")
    p.set_defaults(handler=cmd_moves)

    p = command("apply-move", "apply one move given as a witness line")
    p.add_argument("movie")
    p.add_argument("line")
    p.set_defaults(handler=cmd_apply_move)

    p = command("search", "bounded search for a chart-move witness")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--kind", action="append", choices=[k.value for k in MoveKind])
    p.add_argument("--grow", action="store_true")
    p.set_defaults(handler=cmd_search)

    p = command("render", "SVG of a chart or a movie")
    p.add_argument("input")
    p.add_argument("--target", choices=[CHART, MOVIE_STRIP])
    p.add_argument("--size", type=float, default=400.0)
    p.set_defaults(handler=cmd_render)

    p = command("report", "CSV of invariants for every movie in a directory")
    p.add_argument("directory")
    p.add_argument("--kinds", help="also write event-kind counts to this CSV")
    p.set_defaults(handler=cmd_report)

    p = command("corpus", "write the built-in sample movies to a directory")
    p.add_argument("directory", nargs="?", default=str(CORPUS_DIR))
    p.set_defaults(handler=cmd_corpus)
    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        sys.stderr.write(f"{parser.prog}: {err}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_USAGE

    settings = load_settings().override(
        search_depth=args.depth,
        search_budget=args.budget,
        search_workers=args.workers,
        move_window=args.window,
        b2prime=args.b2prime,
    )
    configure_logging("DEBUG" if args.verbose else settings.log_level, color=not settings.no_color)
    try:
        return args.handler(args, settings)
    except UsageError as err:
        logger.error(str(err))
        return EXIT_USAGE
    except OSError as err:
        logger.error(f"cannot access {err.filename}: {err.strerror}")
        return EXIT_USAGE
    except BMWError as err:
        logger.error(str(err))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(cli_main())
