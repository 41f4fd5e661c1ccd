"""Command-line entry point: ``scnewton {bound,table,curves,tune,solve}``.

Exit codes: 0 success, 2 usage error, 3 numerical failure. Failures print a
one-line JSON object with ``error`` and ``message`` keys to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .errors import (
    DegeneratePointError,
    DivergenceError,
    DomainError,
    FocalPointNotFound,
    IntegrationError,
    ShootingError,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

NUMERIC_ERRORS = (ShootingError, IntegrationError, FocalPointNotFound, DivergenceError,
                  DegeneratePointError)


class UsageError(Exception):
    pass


def _grid(text):
    if text.strip() == "":
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def cmd_bound(args):
    from .hamiltonian import StepQuery, solve_bvp
    from .reporting import to_json

    res = solve_bvp(StepQuery(args.a, args.gamma), tol=args.tol)
    return to_json(res.to_dict()) + "\n"


def cmd_table(args):
    from .reporting import DEFAULT_TABLE_GRID, bound_table, table_csv

    grid = DEFAULT_TABLE_GRID if args.grid is None else args.grid
    return table_csv(bound_table(grid, tol=args.tol))


def cmd_curves(args):
    from .reporting import CURVES, rows_to_csv

    kw = {}
    if args.which == "sigma":
        kw["a"] = args.a
    if args.n is not None and args.which != "bounds":
        kw["n"] = args.n
    if args.which == "bounds" and args.grid is not None:
        kw["grid"] = args.grid
    header, rows = CURVES[args.which](**kw)
    return rows_to_csv(header, rows)


def cmd_tune(args):
    from .path_following.tuning import tune
    from .reporting import to_json

    return to_json(tune(args.policy).to_dict()) + "\n"


def cmd_solve(args):
    from .path_following import make_problem, run, setup_config

    size = {}
    if args.kind == "sdp":
        if args.order is not None:
            size["order"] = args.order
        if args.constraints is not None:
            size["constraints"] = args.constraints
    else:
        if args.n is not None:
            size["n"] = args.n
        if args.m is not None:
            size["m"] = args.m
    problem = make_problem(args.kind, args.seed, size)
    config = setup_config(args.setup, tau0=problem.tau0, tau_max=problem.tau0 * args.tau_ratio)
    log = run(problem.F, problem.c, problem.x0, config)
    return log.to_json() + "\n" if args.format == "json" else log.to_csv()


def build_parser():
    from .path_following.method import SETUPS
    from .path_following.tuning import TunePolicy
    from .reporting import CURVES

    p = argparse.ArgumentParser(prog="scnewton", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_out(sp):
        sp.add_argument("--out", help="write to this path instead of stdout")
        return sp

    b = with_out(sub.add_parser("bound", help="worst-case decrement after one damped step (JSON)"))
    b.add_argument("--a", type=float, required=True, help="decrement before the step, in (0, 1)")
    b.add_argument("--gamma", type=float, default=1.0, help="damping in (0, 1]")
    b.add_argument("--tol", type=float, default=1e-10)
    b.set_defaults(func=cmd_bound)

    t = with_out(sub.add_parser("table", help="full-step and optimal-step bounds on a grid (CSV)"))
    t.add_argument("--grid", type=_grid, default=None, help="comma-separated decrements; empty for none")
    t.add_argument("--tol", type=float, default=1e-11)
    t.set_defaults(func=cmd_table)

    c = with_out(sub.add_parser("curves", help="sampled curves for plotting (CSV)"))
    c.add_argument("which", choices=sorted(CURVES))
    c.add_argument("--a", type=float, default=0.4, help="starting decrement for 'sigma'")
    c.add_argument("--n", type=int, default=None, help="number of samples")
    c.add_argument("--grid", type=_grid, default=None, help="decrements for 'bounds'")
    c.set_defaults(func=cmd_curves)

    u = with_out(sub.add_parser("tune", help="best neighbourhood size for a step policy (JSON)"))
    u.add_argument("--policy", required=True, choices=[m.value for m in TunePolicy])
    u.set_defaults(func=cmd_tune)

    s = with_out(sub.add_parser("solve", help="run short-step path-following on a random problem"))
    s.add_argument("--kind", choices=["lp", "sdp"], default="sdp")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--setup", required=True, choices=sorted(SETUPS))
    s.add_argument("--order", type=int, default=None, help="SDP matrix order")
    s.add_argument("--constraints", type=int, default=None, help="SDP equality constraints")
    s.add_argument("--n", type=int, default=None, help="LP variables")
    s.add_argument("--m", type=int, default=None, help="LP inequalities")
    s.add_argument("--tau-ratio", type=float, default=1e4, help="stop once tau/tau0 reaches this")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_solve)
    return p


def _fail(kind, exc, code):
    from .reporting import to_json

    sys.stderr.write(to_json({"error": kind, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except (DomainError, UsageError, KeyError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_USAGE)
    except NUMERIC_ERRORS as exc:
        return _fail(type(exc).__name__, exc, EXIT_NUMERIC)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
