"""Terminal front door: hot-seat play, log replay, physics demos, bound
tables, and the local game server.

Exit codes: 0 success, 2 parse/usage failures, 3 rule failures (illegal
or impossible input in scripted contexts, failed demo checks), 4 io
failures (missing or corrupt files).
"""

from __future__ import annotations

import argparse
import sys

from .bounds import (
    RuntimeGuard,
    contour_crossings,
    heatmap_csv,
    max_superposition_size,
    naive_bound,
    subspace_size,
)
from .demos import DEMO_NAMES, run_demo
from .errors import CorruptLogError, ParseError, PositionError, QchessError
from .game import Game, GameStatus
from .state import EMPTY, FILES

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RULE = 3
EXIT_IO = 4


def render_board(game: Game) -> str:
    """8x8 grid, each occupied cell showing the piece letter and the
    integer-percent occupancy probability."""
    margs = game.state.marginals()
    lines = []
    for rank in range(7, -1, -1):
        cells = []
        for file in range(8):
            sq = rank * 8 + file
            piece = game.layer.values[sq]
            if piece == EMPTY:
                cells.append(" .  ")
            else:
                cells.append(f"{piece}{round(margs[sq] * 100):<3d}")
        lines.append(f"{rank + 1} " + " ".join(cells))
    lines.append("   " + "    ".join(FILES))
    return "\n".join(lines)


def _load_position(text):
    """--position accepts inline FEN/JSON or @path to a file."""
    if text is None:
        return None
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise _IoFailure(str(exc)) from exc
    return text


class _IoFailure(Exception):
    pass


def _parse_guard(text):
    if text is None:
        return None
    ceiling, _, mode = text.partition(":")
    return RuntimeGuard(ceiling=int(ceiling), mode=mode or "warn")


def cmd_play(args) -> int:
    try:
        game = Game(
            _load_position(args.position),
            seed=args.seed,
            guard=_parse_guard(args.guard),
            free_play=args.free_play,
        )
    except (PositionError, ValueError) as exc:
        print(f"bad position: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = sys.stdout
    print(render_board(game), file=out)
    print(f"{game.layer.flags.turn} to move", file=out)
    for line in sys.stdin:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text in ("quit", "exit"):
            break
        if text == "moves":
            print(" ".join(game.legal_moves()), file=out)
            continue
        if text.startswith("save "):
            path = text[5:].strip()
            try:
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(game.save() + "\n")
                print(f"saved to {path}", file=out)
            except OSError as exc:
                print(f"save failed: {exc}", file=out)
            continue
        result = game.submit_move(text)
        if not result.accepted:
            print(f"rejected ({result.reason}): {result.message} -- repeat your turn", file=out)
            continue
        if result.outcome is not None:
            print(f"measurement outcome: {result.outcome}", file=out)
        for warning in result.warnings:
            print(f"warning: {warning}", file=out)
        print(f"played {result.notation}", file=out)
        print(render_board(game), file=out)
        if game.status != GameStatus.ONGOING:
            print(f"game over: {game.status.value}", file=out)
            break
        print(f"{game.layer.flags.turn} to move", file=out)
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        with open(args.logfile, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        print(f"cannot read log: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        game = Game.replay(
            lines,
            position=_load_position(args.position),
            seed=args.seed,
            free_play=args.free_play,
        )
    except _IoFailure as exc:
        print(f"cannot read position: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, PositionError) as exc:
        print(f"bad log or position: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CorruptLogError, QchessError) as exc:
        print(f"corrupt log: {exc}", file=sys.stderr)
        return EXIT_RULE
    print(render_board(game))
    print(f"moves replayed: {game.ply}")
    print(f"status: {game.status.value}")
    print(f"state fingerprint: {game.state_fingerprint()}")
    return EXIT_OK


def cmd_demo(args) -> int:
    report = run_demo(args.name)
    print(f"demo: {report['name']}")
    print(f"moves: {' '.join(report['log'])}")
    if "probabilities" in report:
        for sq in sorted(report["probabilities"]):
            print(
                f"  p({sq}) = {report['probabilities'][sq]:.6f}"
                f"  (expected {report['expected'][sq]:.6f})"
            )
    else:
        print(f"  pair {report['pair']}: expected {report['expected']}")
        for pattern, (re_part, im_part) in report["state"].items():
            print(f"  |{pattern}> = {re_part:+.6f}{im_part:+.6f}i")
    print("PASS" if report["ok"] else "FAIL")
    return EXIT_OK if report["ok"] else EXIT_RULE


def cmd_bounds(args) -> int:
    if args.naive:
        value = naive_bound()
        print(f"naive bound: {value} (~{value:.1e})")
    if args.max:
        value, budget = max_superposition_size()
        print(f"max bound: {value} (~{value:.1e})")
        for letter in "PNBRQKpnbrqk":
            s, m = budget[letter]
            print(f"  {letter}: squares={s} multiplicity={m} S={subspace_size(s, m)}")
    if args.heatmap:
        try:
            m_lo, m_hi = (int(x) for x in args.heatmap[0].split(":"))
            s_lo, s_hi = (int(x) for x in args.heatmap[1].split(":"))
        except ValueError:
            print("heatmap ranges must look like 0:10 0:64", file=sys.stderr)
            return EXIT_PARSE
        if not (0 <= m_lo <= m_hi <= 64 and 0 <= s_lo <= s_hi <= 64):
            print("heatmap ranges must lie within 0..64", file=sys.stderr)
            return EXIT_PARSE
        sys.stdout.write(heatmap_csv(range(m_lo, m_hi + 1), range(s_lo, s_hi + 1)))
        # contour report goes to stderr so stdout stays clean CSV
        for threshold in (10**6, 10**9):
            crossings = contour_crossings(threshold, range(m_lo, m_hi + 1), s_hi)
            cells = " ".join(
                f"m={m}:s={s if s is not None else '-'}" for m, s in crossings
            )
            print(f"contour {threshold:.0e}: {cells}", file=sys.stderr)
    if not (args.naive or args.max or args.heatmap):
        print("nothing to do: pass --naive, --max and/or --heatmap", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchess", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="interactive hot-seat play on stdin/stdout")
    play.add_argument("--position", help="FEN, save JSON, or @file")
    play.add_argument("--seed", type=int, default=0)
    play.add_argument("--guard", help="term ceiling, e.g. 1000000 or 1000000:deny")
    play.add_argument("--free-play", action="store_true", help="disable turn alternation")
    play.set_defaults(func=cmd_play)

    replay = sub.add_parser("replay", help="forced replay of a QCAN log file")
    replay.add_argument("logfile")
    replay.add_argument("--position", help="starting position (default: standard)")
    replay.add_argument("--seed", type=int, default=0)
    replay.add_argument("--free-play", action="store_true")
    replay.set_defaults(func=cmd_replay)

    demo = sub.add_parser("demo", help="run a self-verifying physics demo")
    demo.add_argument("name", choices=DEMO_NAMES)
    demo.set_defaults(func=cmd_demo)

    bounds = sub.add_parser("bounds", help="superposition-size bound tables")
    bounds.add_argument("--naive", action="store_true")
    bounds.add_argument("--max", action="store_true")
    bounds.add_argument("--heatmap", nargs=2, metavar=("M_RANGE", "S_RANGE"))
    bounds.set_defaults(func=cmd_bounds)

    serve = sub.add_parser("serve", help="run the local game server")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _IoFailure as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
