"""Command-line interface.

    quadcert integrate --f "x^4" --a 0 --b 1 --tol 1e-6 --lambda 0.3333333333
    quadcert verify --suite identity
    quadcert sweep --builtin "power(4)" --a 0 --b 1 --lambda-grid 13 --csv sweep.csv
    quadcert means --a 1 --b 2 --n 4 --prop all

Every command prints one JSON report and exits 0 (ok), 1 (violated or
unconverged) or 2 (error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import means, oracle
from .composite import ConvexityError, integrate_certified
from .functions import ExprSyntaxError, JetDomainError, builtin, from_expression
from .rule import DomainError, Interval, LambdaRule, bound_first_order, bound_power_mean

EXIT_CODES = {"ok": 0, "violated": 1, "unconverged": 1, "error": 2}

SWEEP_COLUMNS = ("lambda", "gap", "bound_first_order", "bound_power_mean", "tightness")

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "results", "status"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["integrate", "verify", "sweep", "means"]},
        "inputs": {"type": "object"},
        "results": {"type": ["object", "null"]},
        "status": {"enum": ["ok", "violated", "unconverged", "error"]},
        "message": {"type": "string"},
    },
}


class CommandError(Exception):
    pass


def _clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False)


def _function(args):
    if (args.f is None) == (args.builtin is None):
        raise CommandError("give exactly one of --f and --builtin")
    if args.f is not None:
        return from_expression(args.f, True if args.assume_convex else None)
    return builtin(args.builtin)


def _lambda(text: str):
    if text == "auto":
        return "auto"
    try:
        return LambdaRule(float(text))
    except ValueError as exc:
        raise CommandError(f"--lambda: {exc}") from None


# -- commands ------------------------------------------------------------------

def cmd_integrate(args) -> dict:
    fn = _function(args)
    iv = Interval(args.a, args.b)
    lam = _lambda(args.__dict__["lambda"])
    cert = integrate_certified(
        fn, iv, args.tol, lam=lam, q=args.q, max_cells=args.max_cells,
        assume_convex=True if args.assume_convex else None,
    )
    results = {
        "function": fn.label,
        "value": cert.value,
        "total_bound": cert.total_bound,
        "n_cells": cert.n_cells,
        "evaluations": cert.evaluations,
        "policy": cert.policy.value,
        "lambda": None if lam == "auto" else lam.lam,
        "q": cert.q,
        "converged": cert.converged,
    }
    if args.cells:
        results["cells"] = [
            {"a": c.iv.a, "b": c.iv.b, "lambda": c.lam, "value": c.q_value, "bound": c.bound}
            for c in cert.cells
        ]
    return {"results": results, "status": "ok" if cert.converged else "unconverged"}


def cmd_verify(args) -> dict:
    suite = args.suite
    results = {}
    ok = True
    if suite in ("identity", "all"):
        cases = oracle.identity_sweep(args.tol)
        results["identity"] = {
            "limit": 1e-10,
            "max_abs_residual": max(abs(c.values["residual"]) for c in cases),
            "cases": [{"function": c.label, "lambda": c.lam, **c.values, "ok": c.ok} for c in cases],
        }
        ok = ok and all(c.ok for c in cases)
    if suite in ("bounds", "all"):
        cases = oracle.bounds_sweep(args.tol)
        results["bounds"] = {
            "cases": [{"function": c.label, "lambda": c.lam, **c.values, "ok": c.ok} for c in cases],
        }
        ok = ok and all(c.ok for c in cases)
    if suite in ("coefficients", "all"):
        reports = oracle.coefficient_sweep(args.tol)
        results["coefficients"] = {
            "max_deviation": max(r.max_deviation for r in reports),
            "cases": [
                {
                    "lambda": r.lam,
                    "q": r.q,
                    "passed": r.passed,
                    "checks": [
                        {"name": c.name, "closed_form": c.closed_form, "numeric": c.numeric,
                         "deviation": c.deviation}
                        for c in r.checks
                    ],
                }
                for r in reports
            ],
        }
        ok = ok and all(r.passed for r in reports)
    return {"results": results, "status": "ok" if ok else "violated"}


def sweep_rows(fn, iv: Interval, n: int, q: float, tol: float = oracle.DEFAULT_TOL) -> list[dict]:
    """One row per lambda on ``n`` equispaced points of [0, 1].

    ``holds`` compares ``|gap|`` with the first-order bound, allowing the
    oracle tolerance as slack.  It is reported in JSON but not in the CSV.
    """
    if n < 2:
        raise CommandError("--lambda-grid needs at least 2 points")
    spec = fn.integrand
    d2 = np.abs(np.asarray([spec.d2(np.float64(iv.a)), spec.d2(np.float64(iv.b))], dtype=float))
    curv = (float(d2[0]), float(d2[1]))
    rows = []
    for lam in np.linspace(0.0, 1.0, n):
        rule = LambdaRule(float(lam))
        gap = oracle.rule_gap(spec, iv, rule, tol)
        first = bound_first_order(iv.width, curv, rule).value
        pm = bound_power_mean(iv.width, curv, q, rule).value
        tight = abs(gap) / first if first > 0 else None  # 0/0 for affine f
        rows.append({"lambda": rule.lam, "gap": gap, "bound_first_order": first,
                     "bound_power_mean": pm, "tightness": tight,
                     "holds": abs(gap) <= first + 10 * tol * max(1.0, first)})
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(["" if row[c] is None else repr(float(row[c])) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> dict:
    fn = _function(args)
    iv = Interval(args.a, args.b)
    rows = sweep_rows(fn, iv, args.lambda_grid, args.q)
    text = rows_to_csv(rows)
    if args.csv and args.csv != "-":
        with open(args.csv, "w", newline="", encoding="ascii") as fh:
            fh.write(text)
    results = {"function": fn.label, "columns": list(SWEEP_COLUMNS), "rows": rows}
    if args.csv == "-":
        results["csv"] = text
    elif args.csv:
        results["csv_path"] = args.csv
    # judged on |gap| vs bound rather than tightness: a zero bound with a
    # nonzero gap (nonconvex |f''|) has no finite tightness but is a violation
    violated = not all(r["holds"] for r in rows)
    return {"results": results, "status": "violated" if violated else "ok"}


def cmd_means(args) -> dict:
    a, b = args.a, args.b
    results = {
        "means": {
            "A": means.arithmetic(a, b),
            "G": means.geometric(a, b),
            "H": means.harmonic(a, b),
            "L": means.logarithmic(a, b),
            "I": means.identric(a, b),
            "L_n": means.p_logarithmic(a, b, args.n),
        }
    }
    holds = True
    props = ("1", "2", "3") if args.prop == "all" else (args.prop,)
    if "1" in props:
        p1 = means.prop1_gap(args.n, a, b)
        alt = means.prop1_bound_168(args.n, a, b)
        results["prop1"] = {
            "gap": p1.gap,
            "bound": p1.bound,
            "holds": p1.holds,
            "bound_168": alt,
            "holds_168": abs(p1.gap) <= alt,
        }
        holds = holds and p1.holds
    if "2" in props:
        p2 = means.prop2_gaps(a, b, args.q)
        results["prop2"] = {
            "mid_gap": p2.mid_gap,
            "mid_bound": p2.mid_bound,
            "mid_holds": abs(p2.mid_gap) <= p2.mid_bound,
            "trap_gap": p2.trap_gap,
            "trap_bound": p2.trap_bound,
            "trap_holds": abs(p2.trap_gap) <= p2.trap_bound,
            "holds": p2.holds,
        }
        holds = holds and p2.holds
    if "3" in props:
        p3 = means.prop3_gap(a, b, args.q)
        results["prop3"] = {"gap": p3.gap, "bound": p3.bound, "holds": p3.holds}
        holds = holds and p3.holds
    return {"results": results, "status": "ok" if holds else "violated"}


# -- argument parsing ------------------------------------------------------------

def _add_function_args(p):
    p.add_argument("--f", help="integrand expression in x, e.g. 'x^4' or 'exp(x) - 3*x'")
    p.add_argument("--builtin", help="catalog integrand: power(n), reciprocal, exp, ln, monomial-sum(c0,c1,...)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, default=1.0, help="power-mean exponent, >= 1 (default 1)")
    p.add_argument("--assume-convex", action="store_true",
                   help="skip the convexity probe of |f''|")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadcert", description="Certified three-point quadrature.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="adaptive integration with an error certificate")
    _add_function_args(p)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--lambda", default=repr(1.0 / 3.0), help="rule parameter in [0, 1] or 'auto'")
    p.add_argument("--max-cells", type=int, default=2**16)
    p.add_argument("--cells", action="store_true", help="include every cell in the report")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("verify", help="oracle sweeps over the test corpus")
    p.add_argument("--suite", choices=("identity", "bounds", "coefficients", "all"), default="all")
    p.add_argument("--tol", type=float, default=oracle.DEFAULT_TOL)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("sweep", help="gap and bounds over a uniform lambda grid")
    _add_function_args(p)
    p.add_argument("--lambda-grid", type=int, default=11, help="number of grid points on [0, 1]")
    p.add_argument("--csv", help="write the rows as CSV to this path ('-' embeds it in the report)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("means", help="special-mean inequalities")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--prop", choices=("1", "2", "3", "all"), default="all")
    p.set_defaults(handler=cmd_means)
    return parser


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("handler", "command")}


def run(argv: Optional[Sequence[str]] = None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "inputs": _inputs(args), "results": None, "status": "error"}
    try:
        out = args.handler(args)
    except ConvexityError as exc:
        report["message"] = str(exc)
    except (CommandError, DomainError, ExprSyntaxError, JetDomainError, ValueError,
            oracle.BudgetExhausted, ZeroDivisionError, OverflowError) as exc:
        report["message"] = str(exc)
    else:
        report.update(out)
    return report, EXIT_CODES[report["status"]]


def main(argv: Optional[Sequence[str]] = None) -> int:
    report, code = run(argv)
    sys.stdout.write(dumps(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
