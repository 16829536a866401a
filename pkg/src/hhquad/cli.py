"""Command-line front end.

Exit codes: 0 success, 1 verification failures, 2 invalid arguments,
3 numerical failure.  ``--json`` switches any subcommand to structured
output with floats rounded to 10 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from . import bounds, means
from .errors import InvalidInputError, NumericError
from .funcmodel import Interval, check_abs_f2_convexity, get_function
from .kernel import MIDPOINT, TRAPEZOID, KernelParams, verify_identity
from .paramopt import optimize_params
from .quadrature import adaptive_certified, certified_midpoint, certified_trapezoid_corrected, mean_value
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILURES, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _round(v):
    if isinstance(v, float):
        return float(f"{v:.10g}") if math.isfinite(v) else None
    if isinstance(v, dict):
        return {k: _round(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_round(x) for x in v]
    return v


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if v is None:
        return "-"
    return str(v)


def _emit(args, payload: dict, table: Optional[tuple] = None) -> None:
    """Print ``payload`` as key/value lines (or JSON); ``table`` = (key, columns)."""
    if args.json:
        print(json.dumps(_round(payload)))
        return
    for k, v in payload.items():
        if table and k == table[0]:
            continue
        if isinstance(v, dict):
            v = ", ".join(f"{kk}={_fmt(vv)}" for kk, vv in v.items())
        print(f"{k}: {_fmt(v)}")
    if table:
        key, cols = table
        rows = [[_fmt(r.get(c)) for c in cols] for r in payload[key]]
        widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c)
                  for i, c in enumerate(cols)]
        print("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            print("  ".join(x.ljust(w) for x, w in zip(r, widths)))


def _interval(args) -> Interval:
    return Interval(args.a, args.b)


def _params(args, default: KernelParams = MIDPOINT) -> KernelParams:
    c = default.c if args.c is None else args.c
    y = default.y if args.y is None else args.y
    d = default.d if args.d is None else args.d
    return KernelParams(c, y, d)


def _params_dict(p: Optional[KernelParams]):
    return None if p is None else {"c": p.c, "y": p.y, "d": p.d}


# --------------------------------------------------------------------------
# Subcommands

def cmd_integrate(args) -> int:
    f, iv = get_function(args.fn), _interval(args)
    f.require_domain(iv)
    rule = "midpoint" if args.rule == "midpoint" else "trapezoid_corrected"
    if args.target is not None:
        if not args.target > 0:
            raise InvalidInputError("--target must be positive")
        cert = adaptive_certified(f, iv, args.target, rule)
    elif rule == "midpoint":
        cert = certified_midpoint(f, iv, args.n)
    else:
        cert = certified_trapezoid_corrected(f, iv, args.n)
    _emit(args, {"function": f.name, "rule": cert.rule, "estimate": cert.estimate,
                 "error_bound": cert.error_bound, "n": cert.n_subintervals,
                 "hypothesis_verified": cert.hypothesis_verified})
    return EXIT_OK


def cmd_bound(args) -> int:
    f, iv = get_function(args.fn), _interval(args)
    f.require_domain(iv)
    fa, fb = bounds.endpoint_curvature(f, iv)
    method = args.method
    if method.startswith("cor"):
        family = int(method[-1])
        q = args.q if family > 1 else None
        if family == 3 and q is None:
            q = 1.0
        res = bounds.corollary_bounds(iv, args.kind, family, q, fa, fb)
    else:
        default = TRAPEZOID if args.kind == "trapezoid" else MIDPOINT
        p = _params(args, default)
        if method == "thm1":
            res = bounds.thm1_bound(iv, p, fa, fb)
        elif method == "thm2":
            if args.q is None:
                raise InvalidInputError("thm2 needs --q > 1")
            res = bounds.thm2_bound(iv, p, args.q, fa, fb)
        else:
            res = bounds.thm3_bound(iv, p, 1.0 if args.q is None else args.q, fa, fb)
    kind = bounds.deviation_kind(res.method, res.params)
    deviation = bounds.true_deviation(f, iv, kind)
    hyp = check_abs_f2_convexity(f, iv, 1.0 if res.q is None else res.q)
    _emit(args, {"function": f.name, "method": res.method, "bound": res.value,
                 "deviation": deviation, "params": _params_dict(res.params), "q": res.q,
                 "hypothesis_verified": hyp.is_satisfied})
    return EXIT_OK


def cmd_identity(args) -> int:
    f, iv = get_function(args.fn), _interval(args)
    f.require_domain(iv)
    p = _params(args)
    r = verify_identity(f, iv, p)
    _emit(args, {"function": f.name, "params": _params_dict(p), "lhs": r.lhs, "rhs": r.rhs,
                 "residual": r.residual, "relative_residual": r.relative_residual})
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.trials, workers=args.workers)
    text = report.to_jsonl()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit(args, report.summary())
    else:
        sys.stdout.write(text)
    return EXIT_FAILURES if report.failures else EXIT_OK


def cmd_optimize(args) -> int:
    iv = _interval(args)
    r = optimize_params(iv, args.method, args.f2a, args.f2b, args.q)
    _emit(args, {"objective": r.objective, "q": r.q, "best_params": _params_dict(r.best_params),
                 "best_value": r.best_value, "baseline_midpoint": r.baseline_midpoint,
                 "baseline_trapezoid": r.baseline_trapezoid, "evaluations": r.evaluations})
    return EXIT_OK


def cmd_means(args) -> int:
    a, b = args.a, args.b
    if not (a > 0 and b > 0):
        raise InvalidInputError("means need a, b > 0")
    n = 3 if args.n is None else args.n
    if n <= 2:
        raise InvalidInputError("--n must be an integer > 2")
    q = args.q
    if q is not None and not q >= 1:
        raise InvalidInputError("--q must be >= 1")
    table = {"A": means.arithmetic(a, b), "H": means.harmonic(a, b),
             "L": means.logarithmic(a, b), "I": means.identric(a, b),
             f"L_{args.p:g}": means.p_logarithmic(args.p, a, b)}
    props = []
    if a != b:
        lo, hi = min(a, b), max(a, b)
        for which in means.PROPOSITIONS:
            if which.startswith("P2") and (q is None or not q > 1):
                continue
            qq = q if which.startswith("P2") else (1.0 if q is None else q)
            gap = means.proposition_gap(which, lo, hi, n=n, q=qq)
            fixed = means.proposition_gap(which, lo, hi, n=n, q=qq, corrected=True)
            props.append({"proposition": which, "lhs": gap.lhs, "rhs": gap.rhs,
                          "holds": gap.lhs <= gap.rhs + 1e-12, "rhs_corrected": fixed.rhs})
    _emit(args, {"a": a, "b": b, "means": table, "chain_H_L_A": means.check_mean_chain(a, b),
                 "propositions": props},
          table=("propositions", ("proposition", "lhs", "rhs", "holds", "rhs_corrected")))
    return EXIT_OK


def cmd_compare(args) -> int:
    f, iv = get_function(args.fn), _interval(args)
    f.require_domain(iv)
    q = args.q
    if q is not None and not q >= 1:
        raise InvalidInputError("--q must be >= 1")
    fa, fb = bounds.endpoint_curvature(f, iv)
    mean = mean_value(f, iv)
    results = []
    for kind in ("midpoint", "trapezoid"):
        results.append(bounds.corollary_bounds(iv, kind, 1, None, fa, fb))
        if q is not None and q > 1:
            results.append(bounds.corollary_bounds(iv, kind, 2, q, fa, fb))
        results.append(bounds.corollary_bounds(iv, kind, 3, 1.0 if q is None else q, fa, fb))
    results.extend(bounds.comparison_bounds(iv, f, q))
    rows = []
    for r in results:
        kind = bounds.deviation_kind(r.method, r.params)
        label = "corrected_trapezoid" if kind == TRAPEZOID else kind
        rows.append({"method": r.method, "bound": r.value, "q": r.q, "controls": label,
                     "deviation": bounds.true_deviation(f, iv, kind, mean)})
    _emit(args, {"function": f.name, "a": iv.a, "b": iv.b, "bounds": rows},
          table=("bounds", ("method", "bound", "q", "controls", "deviation")))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")

    parser = argparse.ArgumentParser(prog="hhquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def interval_args(p, fn=True):
        if fn:
            p.add_argument("--fn", required=True,
                           help="recip, exp, neglog, xlogx, pow:N or poly:c0,c1,...")
        p.add_argument("--a", type=_finite, required=True)
        p.add_argument("--b", type=_finite, required=True)

    def param_args(p):
        for name in ("c", "y", "d"):
            p.add_argument(f"--{name}", type=_finite)

    p = sub.add_parser("integrate", parents=[common], help="certified composite quadrature")
    interval_args(p)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=_positive_int)
    grp.add_argument("--target", type=_finite)
    p.add_argument("--rule", choices=("midpoint", "trapezoid"), default="midpoint")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("bound", parents=[common], help="one error bound and the true deviation")
    interval_args(p)
    p.add_argument("--method", required=True,
                   choices=("thm1", "thm2", "thm3", "cor1", "cor2", "cor3"))
    p.add_argument("--kind", choices=("midpoint", "trapezoid"), default="midpoint")
    param_args(p)
    p.add_argument("--q", type=_finite)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("identity", parents=[common], help="check the integral identity")
    interval_args(p)
    param_args(p)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", parents=[common], help="minimize a bound over (c, y, d)")
    p.add_argument("--method", required=True, choices=("thm1", "thm2", "thm3"))
    p.add_argument("--q", type=_finite)
    p.add_argument("--f2a", type=_finite, required=True, help="|f''(a)|")
    p.add_argument("--f2b", type=_finite, required=True, help="|f''(b)|")
    interval_args(p, fn=False)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("means", parents=[common], help="special means and proposition gaps")
    p.add_argument("--a", type=_finite, required=True)
    p.add_argument("--b", type=_finite, required=True)
    p.add_argument("--p", type=_finite, default=2.0, help="order of the p-logarithmic mean")
    p.add_argument("--n", type=_positive_int, help="exponent n > 2 for the x^n propositions")
    p.add_argument("--q", type=_finite)
    p.set_defaults(func=cmd_means)

    p = sub.add_parser("compare", parents=[common], help="all bounds side by side")
    interval_args(p)
    p.add_argument("--q", type=_finite)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc} (best estimate {exc.estimate:.10g}, "
              f"achieved {exc.achieved:.3g})", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
