"""Command-line front end.

Exit codes: 0 success or certified, 2 well-formed negative result
(not certified, infeasible, oracle gap exceeded, gain violated), 1 usage or
internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .certify import (
    QUADFUNS_HEADER,
    SWEEP_HEADER,
    NotFound,
    BoundViolation,
    certify,
    default_quadfuns,
    gamma_star,
    sweep,
)
from .core import Model
from .riccati import solve_riccati
from .verify.oracles import lemma_report
from .verify.simulation import TRACE_HEADER, DisturbancePlan, simulate_closed_loop, trace_rows

OK, NEGATIVE, ERROR = 0, 2, 1
ALPHA_TOL = 1e-9
GAP_TOL = 1e-8


def fmt(value) -> str:
    """17 significant digits for floats, lowercase booleans, empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value) + 0.0  # folds -0.0 into 0.0
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def to_json(obj) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_riccati(args) -> int:
    res = solve_riccati(Model(args.a, args.b, args.c), args.gamma)
    if not res.feasible:
        payload = {"P": None, "X": None, "a_hat": None, "g_hat": None, "feasible_gain": False,
                   "reason": res.reason}
        _emit(to_json(payload) + "\n", args.out)
        return NEGATIVE
    payload = {"P": res.P, "X": res.X, "a_hat": res.a_hat, "g_hat": res.g_hat, "feasible_gain": res.feasible_gain}
    _emit(to_json(payload) + "\n", args.out)
    return OK


def cmd_certify(args) -> int:
    rep = certify(args.a, args.gamma)
    _emit(to_json(rep.as_dict()) + "\n", args.out)
    return OK if rep.certified else NEGATIVE


def cmd_gamma_star(args) -> int:
    try:
        g = gamma_star(args.a, args.tol)
    except (NotFound, BoundViolation) as exc:
        _emit(to_json({"a": args.a, "gamma_star": None, "error": str(exc)}) + "\n", args.out)
        return NEGATIVE
    _emit(to_json({"a": args.a, "gamma_star": g, "tol": args.tol}) + "\n", args.out)
    return OK


def _sweep_csv(rows) -> str:
    return csv_text(SWEEP_HEADER, [
        (r.a, r.gamma_star, r.lower_bound, r.upper_bound, r.P, r.p_feasible, r.curvature_ok, r.negativity_ok)
        for r in rows
    ])


def cmd_sweep(args) -> int:
    rows = sweep(args.a_min, args.a_max, args.steps, args.tol)
    _emit(_sweep_csv(rows), args.out)
    return NEGATIVE if any(r.error for r in rows) else OK


def _plan(kind, seed, amplitude, horizon):
    return DisturbancePlan(kind, seed, amplitude, horizon)


def cmd_simulate(args) -> int:
    T = args.horizon
    w_amp = args.amplitude
    # impulse and sine act through w only; white and adversarial use both channels
    v_kind = args.disturbance if args.disturbance in ("white", "adversarial") else "zero"
    trace = simulate_closed_loop(args.a, args.b_true, args.gamma, args.x0,
                                 _plan(args.disturbance, args.seed, w_amp, T),
                                 _plan(v_kind, args.seed + 1, w_amp, T), T)
    _emit(csv_text(TRACE_HEADER, trace_rows(trace)), args.out)
    return OK if trace.alpha.max() <= ALPHA_TOL else NEGATIVE


def cmd_verify_lemma(args) -> int:
    rep = lemma_report(args.trials, args.horizon, args.seed, args.gamma)
    _emit(to_json(rep.as_dict()) + "\n", args.out)
    return OK if rep.max_gap < GAP_TOL else NEGATIVE


def cmd_figure(args) -> int:
    if args.which == "quadfuns":
        grid = np.linspace(args.y_min, args.y_max, args.points)
        rows = default_quadfuns(args.a, args.gamma, args.x_hat, grid)
        _emit(csv_text(QUADFUNS_HEADER, [(r.y, r.l1_next, r.lm1_next, r.threshold) for r in rows]), args.out)
        return OK
    rows = sweep(-6.0, 6.0, args.points, args.tol)
    _emit(_sweep_csv(rows), args.out)
    return NEGATIVE if any(r.error for r in rows) else OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lerc", description="Certify and verify dead-beat minimax adaptive control.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("riccati", help="solve the stationary Riccati equation")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--b", type=float, default=1.0)
    s.add_argument("--c", type=float, default=1.0)
    s.set_defaults(func=cmd_riccati)

    s = sub.add_parser("certify", help="check the curvature and strong negativity conditions")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("gamma-star", help="least certified gain bound")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_gamma_star)

    s = sub.add_parser("sweep", help="gamma_star over a grid of poles (CSV)")
    s.add_argument("--a-min", type=float, required=True)
    s.add_argument("--a-max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("simulate", help="closed-loop trace (CSV)")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--b-true", type=int, choices=(1, -1), required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--horizon", type=int, required=True)
    s.add_argument("--disturbance", choices=("zero", "impulse", "white", "sine", "adversarial"), default="white")
    s.add_argument("--amplitude", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--x0", type=float, default=0.0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify-lemma", help="observer recursion vs brute-force oracle (JSON)")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--horizon", type=int, default=6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=float, default=4.0)
    s.set_defaults(func=cmd_verify_lemma)

    s = sub.add_parser("figure", help="plot-ready data (CSV)")
    s.add_argument("--which", choices=("quadfuns", "gammascaling"), required=True)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=4.0)
    s.add_argument("--x-hat", type=float, default=1.0)
    s.add_argument("--y-min", type=float, default=0.3)
    s.add_argument("--y-max", type=float, default=0.9)
    s.add_argument("--points", type=int, default=None)
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_figure)

    for sp in sub.choices.values():
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    if getattr(args, "which", None) and args.points is None:
        args.points = 121
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"lerc: error: {exc}", file=sys.stderr)
        return ERROR


def main():
    sys.exit(run())
