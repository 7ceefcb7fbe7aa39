"""Command-line front end: classify, solve, demo, stream.

Exit codes: 0 success, 2 parse error, 3 solver-reported impossibility or
unsupported input, 4 internal assertion failure.  JSON output is canonical
(sorted keys, fixed separators) so identical runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import counterexamples
from .abelian import AbelianGroupDescriptor
from .errors import (
    CentralityAssertionFailed,
    GroupEqError,
    ParseError,
)
from .intmath import INFINITE
from .nilpotent import (
    TableGroup,
    brute_force_group_solve,
    group_from_json,
    solve_nilpotent_bounded,
    solve_nilpotent_divisible,
    word_system_from_json,
)
from .randgen import random_unimodular_stream
from .solve_abelian import EchelonState, solve_auto
from .systems import (
    abelian_system_from_json,
    classify_matrix,
    parse_matrix_text,
    verify_solution,
)

SOLVER_ERRORS = (
    "UnsupportedGroup",
    "MissingPrimeNonsingularity",
    "Singular",
    "PSingular",
    "NotUnimodular",
    "NotPiNonsingular",
    "NotDivisible",
    "DependentRow",
    "SearchSpaceTooLarge",
)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def cmd_classify(args) -> int:
    if args.matrix:
        with open(args.matrix) as fh:
            matrix = parse_matrix_text(fh.read())
    elif args.system:
        system = abelian_system_from_json(_load_json_file(args.system))
        matrix = system.matrix()
    else:
        print("classify needs --matrix or --system", file=sys.stderr)
        return 2
    primes = _parse_int_list(args.primes) if args.primes else []
    report = classify_matrix(matrix, primes)
    if args.format == "json":
        print(_dump(report.to_json()))
    else:
        print(f"nonsingular: {report.nonsingular}")
        if report.witness is not None:
            print(f"  witness: {report.witness}")
        for p in primes:
            line = f"{p}-nonsingular: {report.p_nonsingular[p]}"
            if p in report.p_witnesses:
                line += f"  witness: {report.p_witnesses[p]}"
            print(line)
        print(f"unimodular: {report.unimodular}")
        print(f"elementary divisors: {report.divisors}")
    return 0


def _solve_dispatch(group_obj: dict, system_obj: dict):
    kind = group_obj.get("kind", None)
    if kind is None or "summands" in group_obj:
        group = AbelianGroupDescriptor.from_json(group_obj)
        system = abelian_system_from_json({"group": group_obj, **system_obj})
        return system, solve_auto(system)
    group = group_from_json(group_obj)
    system = word_system_from_json(system_obj, group)
    if isinstance(group, TableGroup):
        solution = brute_force_group_solve(system)
        if solution is None:
            raise GroupEqError("table group search exhausted: no solution")
        return system, solution
    if group.period_bound is not INFINITE:
        return system, solve_nilpotent_bounded(system)
    return system, solve_nilpotent_divisible(system)


def cmd_solve(args) -> int:
    group_obj = _load_json_file(args.group)
    system_obj = _load_json_file(args.system)
    system, solution = _solve_dispatch(group_obj, system_obj)
    assert verify_solution(system, solution.assignment), "refusing to print unverified output"
    print(_dump({"solution": solution.to_json()}))
    return 0


def cmd_demo(args) -> int:
    depth = args.depth
    reports = []
    if args.name == "pbad":
        p = args.p or 2
        reports = [counterexamples.pbad_growth(p, j) for j in range(2, depth + 1)]
    elif args.name == "bad":
        primes = _parse_int_list(args.primes) if args.primes else [2, 3, 5, 7, 11, 13]
        reports = [counterexamples.bad_support_check(primes, n) for n in range(1, depth + 1)]
    elif args.name == "zbad":
        reports = [
            counterexamples.zbad_bound_check(m, brute_limit=args.scan)
            for m in range(1, depth + 1)
        ]
    if args.format == "json":
        print(_dump([r.to_json() for r in reports]))
    else:
        print(f"{'depth':>6}  {'metric':<14}  {'bound':>24}  {'observed':>24}")
        for r in reports:
            print(f"{r.depth:>6}  {r.metric:<14}  {r.bound:>24}  {r.observed:>24}")
    return 0


def cmd_stream(args) -> int:
    group = AbelianGroupDescriptor.from_json(_load_json_file(args.group))
    depths = sorted(set(_parse_int_list(args.depths))) if args.depths else [10, 50]
    stream = random_unimodular_stream(group, args.seed)
    state = EchelonState(group)
    results = []
    next_eq = 0
    for depth in depths:
        while next_eq < depth:
            state.ingest(stream.gen(next_eq))
            next_eq += 1
        ok = verify_solution(stream.truncation(depth), state.solution().assignment)
        results.append({"depth": depth, "verified": ok})
    if args.format == "json":
        print(_dump({"seed": args.seed, "results": results}))
    else:
        for r in results:
            print(f"depth {r['depth']}: {'PASS' if r['verified'] else 'FAIL'}")
    return 0 if all(r["verified"] for r in results) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupeq",
        description="Exact classification and solving of equation systems over groups",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="singularity classification of a matrix/system")
    p_classify.add_argument("--matrix", help="text matrix file: one row per line")
    p_classify.add_argument("--system", help="JSON system file")
    p_classify.add_argument("--primes", help="comma-separated primes to test")
    p_classify.set_defaults(func=cmd_classify)

    p_solve = sub.add_parser("solve", help="solve a system over a group")
    p_solve.add_argument("--group", required=True, help="JSON group file")
    p_solve.add_argument("--system", required=True, help="JSON system file")
    p_solve.set_defaults(func=cmd_solve)

    p_demo = sub.add_parser("demo", help="counterexample growth tables")
    p_demo.add_argument("name", choices=("pbad", "bad", "zbad"))
    p_demo.add_argument("--depth", type=int, default=5)
    p_demo.add_argument("--p", type=int, help="prime for the pbad family")
    p_demo.add_argument("--primes", help="comma-separated primes for the bad family")
    p_demo.add_argument("--scan", type=int, default=10**6, help="zbad brute-force scan limit")
    p_demo.set_defaults(func=cmd_demo)

    p_stream = sub.add_parser("stream", help="seeded unimodular stream ingestion check")
    p_stream.add_argument("--group", required=True, help="JSON group file")
    p_stream.add_argument("--seed", type=int, default=0)
    p_stream.add_argument("--depths", help="comma-separated truncation depths")
    p_stream.set_defaults(func=cmd_stream)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 2
    except CentralityAssertionFailed as exc:
        print(f"CentralityAssertionFailed: {exc}", file=sys.stderr)
        return 4
    except AssertionError as exc:
        print(f"InternalAssertion: {exc}", file=sys.stderr)
        return 4
    except GroupEqError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (KeyError, ValueError) as exc:
        print(f"ParseError: malformed input ({exc})", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
