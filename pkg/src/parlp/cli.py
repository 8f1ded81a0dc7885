"""Command-line front end: ``parlp {solve,sensitivity,classify,probe,example1}``.

JSON (or CSV for ``probe --csv``) goes to stdout, diagnostics to stderr.
Exit codes: 0 success/optimal, 1 usage or input error, 2 infeasible,
3 unbounded, 4 a required optimum does not exist.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from parlp.classify import classify
from parlp.errors import NotOptimal, ParlpError
from parlp.linalg import to_rational
from parlp.model import PerturbationRay, parse_family, parse_problem, parse_vector
from parlp.probe import probe, run_example1
from parlp.sensitivity import default_grid, interval_for, verify_interval
from parlp.solver import Status, solve

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_UNBOUNDED, EXIT_NOT_OPTIMAL = 0, 1, 2, 3, 4

_STATUS_EXIT = {
    Status.OPTIMAL: EXIT_OK,
    Status.INFEASIBLE: EXIT_INFEASIBLE,
    Status.UNBOUNDED: EXIT_UNBOUNDED,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means "infeasible"
    def error(self, message):
        raise UsageError(message)


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _int_list(text: str) -> list[int]:
    try:
        values = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--N expects comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise UsageError("every N must be a positive integer")
    return values


def _rational_list(text: str):
    try:
        return [to_rational(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--theta-grid: {exc}") from None


def cmd_solve(args) -> int:
    outcome = solve(parse_problem(_read(args.file)))
    _emit(outcome.to_dict())
    return _STATUS_EXIT[outcome.status]


def cmd_sensitivity(args) -> int:
    problem = parse_problem(_read(args.file))
    if args.rhs:
        ray = PerturbationRay(delta_b=parse_vector(_read(args.rhs)))
    else:
        ray = PerturbationRay(delta_p=parse_vector(_read(args.obj)))
    outcome = solve(problem)
    if outcome.status is not Status.OPTIMAL:
        print(f"problem is {outcome.status.value}; ranging needs an optimum", file=sys.stderr)
        return EXIT_NOT_OPTIMAL
    iv = interval_for(problem, ray, outcome.representative)
    grid = _rational_list(args.theta_grid) if args.theta_grid else default_grid(iv)
    rows = verify_interval(problem, ray, iv, grid)
    _emit(
        {
            "kind": ray.kind,
            "interval": iv.to_dict(),
            "basic_point": iv.basic_point.to_dict(),
            "verification": [r.to_dict() for r in rows],
        }
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    result = classify(parse_problem(_read(args.file)))
    _emit(result.to_dict())
    return _STATUS_EXIT[result.status]


def cmd_probe(args) -> int:
    family = parse_family(_read(args.file))
    report = probe(family, _int_list(args.N))
    if args.csv:
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_dict())
    return EXIT_OK


def cmd_example1(args) -> int:
    _emit(run_example1(_int_list(args.N)).to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parlp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sensitivity", help="range a right-hand-side or objective ray")
    p.add_argument("file")
    ray = p.add_mutually_exclusive_group(required=True)
    ray.add_argument("--rhs", metavar="FILE", help="JSON array with the delta_b direction")
    ray.add_argument("--obj", metavar="FILE", help="JSON array with the delta_p direction")
    p.add_argument("--theta-grid", metavar="LIST", help="comma-separated rationals to re-solve at")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("classify", help="regularity and boundedness predicates")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("probe", help="continuity probes along a family")
    p.add_argument("file")
    p.add_argument("--N", default="1,16,256", help="comma-separated positive integers")
    p.add_argument("--csv", action="store_true", help="one CSV row per N instead of JSON")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("example1", help="reproduce the value-discontinuity example")
    p.add_argument("--N", default="1,10,100")
    p.set_defaults(func=cmd_example1)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"parlp: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except NotOptimal as exc:
        print(f"parlp: {exc}", file=sys.stderr)
        return EXIT_NOT_OPTIMAL
    except (ParlpError, ValueError) as exc:
        print(f"parlp: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
