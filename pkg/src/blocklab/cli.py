"""Batch command-line front end.

Every subcommand prints one RunReport JSON object (to --report, stdout by
default) and a one-line human summary on stderr.  Exit codes: 0 all-pass,
1 failure or absence where a witness was expected, 2 usage error, 3 budget
exhaustion.  Structured inputs use the @file.json convention; "-" means
stdin.  Reports carry the command payload under "result" and are
byte-reproducible for fixed argv and inputs, apart from wall_time_ms.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any

from .algebra import gf
from .blockseq import basis_block, tail_beyond
from .errors import BlocklabError, BudgetError, ExhaustionError, IllegalMoveError
from .fin import builtin_coloring, hindman_search, milliken_search, table_coloring
from .filters import (
    FilterBase,
    check_spread_witness,
    coarsen_intervals,
    density_probe,
    qpoint_check,
    spread_from_tail_diag,
)
from .games import (
    GameKind,
    Move,
    canonical_least_II,
    const_I,
    play,
    random_I,
    random_II,
    replay_validate,
    scripted,
    tail_I,
)
from .oscillation import meets_every_block_subspace, osc_range, predicate_by_name
from .serialize import (
    decode_blockseq,
    decode_field,
    decode_filterbase,
    decode_intervalseq,
    decode_move,
    decode_partition,
    decode_transcript,
    encode_blockseq,
    encode_finblockseq,
    encode_intervalseq,
    encode_transcript,
)
from .verify import run_suite

__all__ = ["main", "dispatch"]


class UsageError(Exception):
    pass


def _load_structured(arg: str) -> Any:
    """Resolve the @file / '-' convention to parsed JSON."""
    if arg == "-":
        return json.load(sys.stdin)
    if arg.startswith("@"):
        with open(arg[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    raise UsageError(f"expected @file.json or '-', got {arg!r}")


def _emit(report: dict, destination: str) -> None:
    body = json.dumps(report, indent=2, sort_keys=True)
    if destination == "-":
        print(body)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")


def _report(
    command: str,
    parameters: dict,
    cases_run: int,
    failed: int,
    counterexamples: list,
    result: Any = None,
) -> dict:
    report = {
        "command": command,
        "parameters": parameters,
        "cases_run": cases_run,
        "passed": cases_run - failed,
        "failed": failed,
        "counterexamples": counterexamples,
        "wall_time_ms": 0,
    }
    if result is not None:
        report["result"] = result
    return report


def _strategy(spec: str, side: str, seed: int, field) -> Any:
    if spec.startswith("const:"):
        return const_I(int(spec.split(":", 1)[1]))
    if spec == "canonical":
        return canonical_least_II()
    if spec == "tail":
        return tail_I()
    if spec == "random":
        return random_I(seed) if side == "I" else random_II(seed)
    if spec.startswith("script:"):
        moves = [decode_move(m, field) for m in _load_structured(spec.split(":", 1)[1])]
        return scripted(side, moves)
    raise UsageError(f"unknown strategy spec {spec!r}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", default="gf2", help="gf<p> or q<height>")
    p.add_argument("--trunc", type=int, default=6, help="support truncation")
    p.add_argument("--budget", type=int, default=None, help="state-count cap")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized parts")
    p.add_argument("--report", default="-", help="report destination ('-' = stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blocklab",
        description="block-sequence calculus, FIN searches, and vector-space games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a module invariant suite")
    p.add_argument("--suite", required=True)
    _add_common(p)

    p = sub.add_parser("hindman", help="monochromatic finite-unions search")
    p.add_argument("--coloring", required=True, help="built-in name or @file.json")
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--colors", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("milliken", help="monochromatic block-tuple search")
    p.add_argument("--coloring", required=True)
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--colors", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("osc-range", help="oscillation range of a span")
    p.add_argument("--x", default=None, help="@file.json block sequence")
    _add_common(p)

    p = sub.add_parser("asymptotic-probe", help="does a set meet every block span")
    p.add_argument("--pred", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, required=True)
    _add_common(p)

    game = sub.add_parser("game", help="play or replay games")
    gsub = game.add_subparsers(dest="game_command", required=True)
    p = gsub.add_parser("play")
    p.add_argument("--kind", required=True, choices=[k.value for k in GameKind])
    p.add_argument("--ambient", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--s1", required=True)
    p.add_argument("--s2", required=True)
    p.add_argument("--base", default=None)
    _add_common(p)
    p = gsub.add_parser("replay")
    p.add_argument("transcript", help="@file.json or '-'")
    _add_common(p)

    p = sub.add_parser("spread", help="spread witness via tail diagonalization")
    p.add_argument("--x", required=True)
    p.add_argument("--intervals", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--base", default=None)
    _add_common(p)

    p = sub.add_parser("qpoint", help="one-point-per-cell selector check")
    p.add_argument("--x", required=True, help="comma-separated naturals")
    p.add_argument("--partition", required=True)
    p.add_argument("--coarsen", action="store_true")
    _add_common(p)

    p = sub.add_parser("density", help="per-generator dense block witnesses")
    p.add_argument("--pred", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--depth", type=int, required=True)
    _add_common(p)

    return parser


def _coloring_from_arg(arg: str, universe: int, colors: int, arity: int = 1):
    if arg.startswith("@") or arg == "-":
        table = _load_structured(arg)
        return table_coloring(table, universe, colors, arity)
    return builtin_coloring(arg, universe, colors)


def _default_base(X) -> FilterBase:
    return FilterBase(X.field, X.max_support + 1, (X,), 1)


def _run(args: argparse.Namespace) -> tuple[int, dict]:
    cmd = args.command if args.command != "game" else f"game {args.game_command}"
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "game_command", "report") and v is not None
    }

    if cmd == "verify":
        f = decode_field(args.field)
        cases, failures = run_suite(args.suite, f, args.trunc, args.seed, args.budget or 10**7)
        report = _report(cmd, params, cases, len(failures), failures[:20])
        return (0 if not failures else 1), report

    if cmd == "hindman":
        coloring = _coloring_from_arg(args.coloring, args.universe, args.colors)
        found = hindman_search(coloring, args.length, args.budget)
        if found is None:
            report = _report(cmd, params, 1, 1, [{"absent": True, "universe": args.universe}])
            return 1, report
        A, color = found
        result = {"witness": encode_finblockseq(A), "color": color}
        return 0, _report(cmd, params, 1, 0, [], result)

    if cmd == "milliken":
        coloring = _coloring_from_arg(args.coloring, args.universe, args.colors, args.k)
        found = milliken_search(coloring, args.k, args.length, args.budget)
        if found is None:
            report = _report(cmd, params, 1, 1, [{"absent": True, "universe": args.universe}])
            return 1, report
        A, color = found
        result = {"witness": encode_finblockseq(A), "color": color}
        return 0, _report(cmd, params, 1, 0, [], result)

    if cmd == "osc-range":
        if args.x:
            X = decode_blockseq(_load_structured(args.x))
        else:
            X = basis_block(decode_field(args.field), 0, args.trunc)
        ranges = sorted(osc_range(X, args.budget))
        return 0, _report(cmd, params, 1, 0, [], {"range": ranges})

    if cmd == "asymptotic-probe":
        X = decode_blockseq(_load_structured(args.x))
        P = predicate_by_name(args.pred)
        counterexample = meets_every_block_subspace(P, X, args.depth, args.budget)
        if counterexample is None:
            return 0, _report(cmd, params, 1, 0, [], {"asymptotic": True})
        return 1, _report(
            cmd, params, 1, 1, [encode_blockseq(counterexample)], {"asymptotic": False}
        )

    if cmd == "game play":
        ambient = decode_blockseq(_load_structured(args.ambient))
        base = decode_filterbase(_load_structured(args.base)) if args.base else None
        kind = GameKind(args.kind)
        if kind is GameKind.RESTRICTED and base is None:
            base = _default_base(ambient)
        s1 = _strategy(args.s1, "I", args.seed, ambient.field)
        s2 = _strategy(args.s2, "II", args.seed + 1, ambient.field)
        t = play(kind, ambient, s1, s2, args.rounds, base=base)
        return 0, _report(cmd, params, 1, 0, [], encode_transcript(t))

    if cmd == "game replay":
        t = decode_transcript(_extract_transcript(_load_structured(args.transcript)))
        verdict = replay_validate(t)
        if verdict is None:
            return 0, _report(cmd, params, len(t.moves), 0, [], {"legal": True})
        index, reason = verdict
        return 1, _report(
            cmd,
            params,
            len(t.moves),
            1,
            [{"move": index, "inning": index // 2, "reason": reason}],
            {"legal": False},
        )

    if cmd == "spread":
        X = decode_blockseq(_load_structured(args.x))
        I = decode_intervalseq(_load_structured(args.intervals))
        base = decode_filterbase(_load_structured(args.base)) if args.base else _default_base(X)
        try:
            Y = spread_from_tail_diag(base, X, I, args.rounds, args.budget)
        except ExhaustionError as e:
            return 1, _report(cmd, params, 1, 1, [{"exhausted": str(e)}])
        failing = check_spread_witness(Y, I)
        ok = failing is None
        return (0 if ok else 1), _report(
            cmd,
            params,
            1,
            0 if ok else 1,
            [] if ok else [{"failing_index": failing}],
            encode_blockseq(Y),
        )

    if cmd == "qpoint":
        x = [int(tok) for tok in args.x.split(",") if tok != ""]
        P = decode_partition(_load_structured(args.partition))
        result: dict[str, Any] = {}
        if args.coarsen:
            result["coarsened"] = encode_intervalseq(coarsen_intervals(P))
        violating = qpoint_check(x, P)
        if violating is None:
            return 0, _report(cmd, params, 1, 0, [], result or {"selective": True})
        return 1, _report(cmd, params, 1, 1, [{"cell": violating}], result or None)

    if cmd == "density":
        base = decode_filterbase(_load_structured(args.base))
        P = predicate_by_name(args.pred)
        witnesses = density_probe(P, base, args.depth, args.budget)
        encoded = [encode_blockseq(w) if w is not None else None for w in witnesses]
        missing = [i for i, w in enumerate(witnesses) if w is None]
        if missing:
            return 1, _report(
                cmd,
                params,
                len(witnesses),
                len(missing),
                [{"generator": i, "absent": True} for i in missing],
                {"witnesses": encoded},
            )
        return 0, _report(cmd, params, len(witnesses), 0, [], {"witnesses": encoded})

    raise UsageError(f"unknown command {cmd!r}")


def _extract_transcript(obj: dict) -> dict:
    if "moves" in obj:
        return obj
    if "result" in obj and isinstance(obj["result"], dict) and "moves" in obj["result"]:
        return obj["result"]
    raise UsageError("no transcript found in input")


def dispatch(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    start = time.monotonic()
    try:
        code, report = _run(args)
    except BudgetError as e:
        _emit(_report("error", {}, 0, 0, [], {"budget_error": str(e)}), "-")
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, FileNotFoundError, json.JSONDecodeError, KeyError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (ExhaustionError, IllegalMoveError) as e:
        _emit(_report("error", {}, 1, 1, [{"error": str(e)}]), "-")
        print(f"failed: {e}", file=sys.stderr)
        return 1
    report["wall_time_ms"] = int((time.monotonic() - start) * 1000)
    _emit(report, args.report)
    print(
        f"{report['command']}: {report['cases_run']} cases, "
        f"{report['failed']} failed ({report['wall_time_ms']} ms)",
        file=sys.stderr,
    )
    return code


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
