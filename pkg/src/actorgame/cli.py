"""Command line front end.

Subcommands:

  parse   check a term file and echo the normalized form
  interp  print the strategy a term denotes
  lts     print a transition graph, interface or closed world
  fair    run one fair test or a generated suite against a subject
  eq      compare two subjects, by test suite or by weak bisimulation
  dot     render positions, moves and plays as Graphviz source

Exit codes: 0 success (pass, equivalent), 1 refuted (fail,
distinguished), 2 usage or input errors. Diagnostics go to stderr;
stdout is deterministic for fixed inputs. Suite order is the
enumeration order unless --seed shuffles it.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from dataclasses import dataclass

from .arena import to_dot
from .fairtest import Test, eq_check, gen_tests, identity_test, passes
from .lts import (
    arena_position,
    arena_trace,
    closed_graph,
    process_lts,
    root_process,
    root_strategy,
    strategy_lts,
    weak_bisim,
)
from .strategy import dump, interpret
from .term import IllTyped, ParseError, parse, typecheck, unparse


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation, fully determined."""

    command: str
    files: tuple[str, ...]
    world: str = "interface"
    side: str = "strategy"
    what: str = "position"
    test_file: str | None = None
    handle_map: str | None = None
    depth: int | None = None
    width: int = 2
    limit: int | None = None
    seed: int | None = None
    bot: str = "weak"
    bisim: bool = False
    enable_link: bool = False
    index: int = 0
    trace: str | None = None

    def suite(self, gamma: int) -> list[Test]:
        stream = gen_tests(gamma, self.depth, self.width)
        if self.limit is not None:
            stream = itertools.islice(stream, self.limit)
        tests = list(stream)
        if self.seed is not None:
            random.Random(self.seed).shuffle(tests)
        return tests


def _read_term(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    proc, gamma = parse(text)
    typecheck(proc, gamma)
    return proc, gamma


def _render_test(test: Test) -> str:
    h = ",".join(str(c) for c in test.h)
    return f"h=({h}) {unparse(test.proc, test.ctx)}"


def cmd_parse(cfg: RunConfig) -> int:
    proc, gamma = _read_term(cfg.files[0])
    print(unparse(proc, gamma))
    return 0


def cmd_interp(cfg: RunConfig) -> int:
    proc, gamma = _read_term(cfg.files[0])
    sys.stdout.write(dump(interpret(proc, gamma)))
    return 0


def cmd_lts(cfg: RunConfig) -> int:
    proc, gamma = _read_term(cfg.files[0])
    if cfg.world == "closed":
        root = (
            root_strategy(proc, gamma)
            if cfg.side == "strategy"
            else root_process(proc, gamma)
        )
        graph = closed_graph(root)
    else:
        build = strategy_lts if cfg.side == "strategy" else process_lts
        graph = build(proc, gamma, enable_link=cfg.enable_link)
    sys.stdout.write(graph.dump())
    return 0


def _parse_map(text: str, gamma: int) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        h = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"bad handle map {text!r}: expected comma separated integers")
    if len(h) != gamma:
        raise ValueError(f"handle map has {len(h)} entries, subject needs {gamma}")
    return h


def cmd_fair(cfg: RunConfig) -> int:
    subject, gamma = _read_term(cfg.files[0])
    if (cfg.test_file is None) == (cfg.depth is None):
        raise ValueError("fair needs exactly one of --test FILE or --gen DEPTH")
    if cfg.test_file is not None:
        tproc, tctx = _read_term(cfg.test_file)
        if cfg.handle_map is not None:
            test = Test(_parse_map(cfg.handle_map, gamma), tctx, tproc)
        else:
            if tctx != gamma:
                raise ValueError(
                    f"test context {tctx} differs from subject context {gamma}; "
                    "give an explicit --map"
                )
            test = identity_test(gamma, tproc)
        verdict = passes(subject, gamma, test, cfg.side, cfg.bot)
        print(f"RESULT {verdict.render()}")
        return 0 if verdict.passed else 1
    failures = 0
    total = 0
    for k, test in enumerate(cfg.suite(gamma)):
        verdict = passes(subject, gamma, test, cfg.side, cfg.bot)
        total += 1
        if not verdict.passed:
            failures += 1
        print(f"test#{k} {verdict.render()}")
    print(f"RESULT {total - failures}/{total} pass")
    return 0 if failures == 0 else 1


def cmd_eq(cfg: RunConfig) -> int:
    left, gl = _read_term(cfg.files[0])
    right, gr = _read_term(cfg.files[1])
    if gl != gr:
        raise ValueError(f"subjects have different contexts: {gl} and {gr}")
    if cfg.bisim:
        build = strategy_lts if cfg.side == "game" else process_lts
        res = weak_bisim(build(left, gl), build(right, gr))
        if res.equivalent:
            print("RESULT equivalent")
            return 0
        if res.witness:
            print("witness: " + ";".join(res.witness))
        print("RESULT distinguished")
        return 1
    res = eq_check(left, right, gl, cfg.suite(gl), cfg.side, cfg.bot)
    if res.equivalent:
        print(f"checked {res.checked} tests")
        print("RESULT equivalent-on-suite")
        return 0
    print(
        f"test#{res.index} {_render_test(res.test)} "
        f"left={res.verdict_left.render()} right={res.verdict_right.render()}"
    )
    print(f"RESULT distinguished test#{res.index}")
    return 1


def cmd_dot(cfg: RunConfig) -> int:
    proc, gamma = _read_term(cfg.files[0])
    root = root_strategy(proc, gamma)
    if cfg.what == "position":
        sys.stdout.write(to_dot(arena_position(root)))
        return 0
    indices = [int(x) for x in cfg.trace.split(",")] if cfg.trace else []
    if cfg.what == "move":
        play = arena_trace(root, indices or [cfg.index])
        if not play.moves:
            raise ValueError("no move selected")
        sys.stdout.write(to_dot(play.moves[-1]))
        return 0
    sys.stdout.write(to_dot(arena_trace(root, indices)))
    return 0


_COMMANDS = {
    "parse": cmd_parse,
    "interp": cmd_interp,
    "lts": cmd_lts,
    "fair": cmd_fair,
    "eq": cmd_eq,
    "dot": cmd_dot,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    files = tuple(
        getattr(args, name)
        for name in ("file", "left", "right")
        if getattr(args, name, None) is not None
    )
    return RunConfig(
        command=args.cmd,
        files=files,
        world=getattr(args, "world", "interface"),
        side=getattr(args, "side", "strategy"),
        what=getattr(args, "what", "position"),
        test_file=getattr(args, "test", None),
        handle_map=getattr(args, "map", None),
        depth=getattr(args, "gen", None),
        width=getattr(args, "width", 2),
        limit=getattr(args, "limit", None),
        seed=getattr(args, "seed", None),
        bot=getattr(args, "bot", "weak"),
        bisim=getattr(args, "bisim", False),
        enable_link=getattr(args, "enable_link", False),
        index=getattr(args, "index", 0),
        trace=getattr(args, "trace", None),
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="actorgame",
        description="Terms, strategies, transition systems and fair testing "
        "for a small actor calculus.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("parse", help="check a term file, echo normal form")
    p.add_argument("file", help="term file, or - for stdin")

    p = sub.add_parser("interp", help="print the strategy of a term")
    p.add_argument("file")

    p = sub.add_parser("lts", help="print a transition graph")
    p.add_argument("file")
    p.add_argument("--world", choices=["interface", "closed"], default="interface")
    p.add_argument("--side", choices=["strategy", "process"], default="strategy")
    p.add_argument("--enable-link", action="store_true", help="enable the link rule")

    p = sub.add_parser("fair", help="fair-test a subject")
    p.add_argument("file")
    p.add_argument("--test", help="test term file")
    p.add_argument("--map", help="handle map, comma separated test channels")
    p.add_argument("--gen", type=int, help="generate a suite up to this depth")
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int, help="shuffle the generated suite")
    p.add_argument("--side", choices=["game", "process"], default="game")
    p.add_argument("--bot", choices=["weak", "strict"], default="weak")

    p = sub.add_parser("eq", help="compare two subjects")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--gen", type=int, default=2, help="suite depth")
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--limit", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--side", choices=["game", "process"], default="game")
    p.add_argument("--bot", choices=["weak", "strict"], default="weak")
    p.add_argument(
        "--bisim",
        action="store_true",
        help="decide weak bisimilarity of interface graphs instead of testing",
    )

    p = sub.add_parser("dot", help="render arena objects as Graphviz")
    p.add_argument("file")
    p.add_argument("--what", choices=["position", "move", "play"], default="position")
    p.add_argument("--index", type=int, default=0, help="move: raw step index")
    p.add_argument("--trace", help="play: comma separated raw step indices")
    return ap


def main(argv=None) -> int:
    cfg = config_from_args(build_parser().parse_args(argv))
    try:
        return _COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IllTyped as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
