"""Randomized verification suites for the identity and the bounds.

Trials are quartics with f''(x) = alpha + beta (x - x0)^2, alpha, beta >= 0,
so |f''| is convex by construction.  Every trial is generated from its own
random stream keyed by (seed, index), which makes reports independent of
worker count and evaluation order.

Report format (JSON lines).  One row per (trial, check) with the keys, in
order: suite, seed, index, check, function_descriptor, a, b, c, y, d, q,
bound, deviation, slack, residual, status.  ``status`` is one of pass,
fail, skip (dominance / identity / sharpness suites) or ours_tighter,
theirs_tighter, equal (comparison suite).  Identity rows store the kernel
integral in ``bound`` and the quadrature side in ``deviation``; comparison
rows store the competing bound in ``residual`` and its excess over ours in
``slack``.  The last line is a summary with
keys summary, suite, seed, trials, rows, failures, skipped, worst_index,
worst_check, worst_slack.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import (comparison_bounds, corollary_bounds, endpoint_curvature,
                     thm1_bound, thm2_bound, thm3_bound)
from .errors import InvalidInputError
from .funcmodel import FunctionModel, Interval, PolynomialFunction, check_abs_f2_convexity
from .kernel import MIDPOINT, TRAPEZOID, KernelParams, identity_lhs, verify_identity
from .quadrature import mean_value

SUITES = ("identity", "thm1", "thm2", "thm3", "corollaries", "sharpness", "comparison")

IDENTITY_RTOL = 1e-9
DOMINANCE_SLACK = -1e-12
SHARPNESS_TOL = 1e-9

ROW_FIELDS = ("suite", "seed", "index", "check", "function_descriptor", "a", "b",
              "c", "y", "d", "q", "bound", "deviation", "slack", "residual", "status")


@dataclass(frozen=True)
class TrialSpec:
    seed: int
    trial_index: int
    function: FunctionModel = field(compare=False)
    interval: Interval
    params: KernelParams
    q: float
    alpha: float
    beta: float
    x0: float
    linear: tuple

    @property
    def descriptor(self) -> str:
        return self.function.name


def convex_quartic(alpha: float, beta: float, x0: float,
                   e0: float = 0.0, e1: float = 0.0) -> PolynomialFunction:
    """e0 + e1 s + alpha s^2/2 + beta s^4/12 with s = x - x0."""
    if alpha < 0 or beta < 0:
        raise InvalidInputError("alpha and beta must be nonnegative")
    return PolynomialFunction((e0, e1, alpha / 2.0, 0.0, beta / 12.0), center=x0)


def affine_curvature_cubic(alpha: float, slope: float, a: float,
                           e0: float = 0.0, e1: float = 0.0) -> PolynomialFunction:
    """Cubic with f''(x) = alpha + slope (x - a)."""
    return PolynomialFunction((e0, e1, alpha / 2.0, slope / 6.0), center=a)


def generate_convex_trial(seed: int, index: int) -> TrialSpec:
    if seed < 0 or index < 0:
        raise InvalidInputError("seed and index must be nonnegative")
    rng = np.random.default_rng([seed, index])
    a = float(rng.uniform(-2.0, 2.0))
    width = float(rng.uniform(0.1, 4.0))
    b = a + width
    alpha, beta = (float(v) for v in rng.uniform(0.0, 10.0, size=2))
    x0 = float(rng.uniform(a, b))
    e0, e1 = (float(v) for v in rng.uniform(-1.0, 1.0, size=2))
    y = float(0.01 + 0.98 * rng.random())
    c = float(y * rng.random())
    d = float(y + (1.0 - y) * rng.random())
    q = float(rng.uniform(1.0, 4.0))
    poly = convex_quartic(alpha, beta, x0, e0, e1)
    return TrialSpec(seed, index, poly.model(), Interval(a, b), KernelParams(c, y, d),
                     q, alpha, beta, x0, (e0, e1))


def sharpness_variant(trial: TrialSpec) -> FunctionModel:
    """Same draw with the curvature made affine and nonnegative on the interval."""
    iv = trial.interval
    poly = affine_curvature_cubic(trial.alpha, trial.beta / iv.width, iv.a, *trial.linear)
    return poly.model()


# --------------------------------------------------------------------------
# Rows

def _row(trial: TrialSpec, suite: str, check: str, *, function: Optional[FunctionModel] = None,
         params: Optional[KernelParams] = None, q: Optional[float] = None,
         bound=None, deviation=None, slack=None, residual=None, status="pass") -> dict:
    iv = trial.interval
    p = params
    values = (suite, trial.seed, trial.trial_index, check,
              (function or trial.function).name, iv.a, iv.b,
              None if p is None else p.c, None if p is None else p.y,
              None if p is None else p.d, q, bound, deviation, slack, residual, status)
    return dict(zip(ROW_FIELDS, values))


def _dominance(trial, suite, check, bound, deviation, params, q):
    slack = bound - deviation
    status = "pass" if slack >= DOMINANCE_SLACK else "fail"
    return _row(trial, suite, check, params=params, q=q, bound=bound,
                deviation=deviation, slack=slack, status=status)


def _convex_at(trial: TrialSpec, q: float) -> bool:
    return check_abs_f2_convexity(trial.function, trial.interval, q, grid_n=33).is_satisfied


def _identity_rows(trial):
    res = verify_identity(trial.function, trial.interval, trial.params)
    ok = res.relative_residual <= IDENTITY_RTOL
    return [_row(trial, "identity", "identity", params=trial.params,
                 deviation=res.lhs, bound=res.rhs,
                 slack=IDENTITY_RTOL - res.relative_residual,
                 residual=res.relative_residual, status="pass" if ok else "fail")]


def _theorem_rows(trial, suite):
    f, iv, p, q = trial.function, trial.interval, trial.params, trial.q
    fa, fb = endpoint_curvature(f, iv)
    dev = abs(identity_lhs(f, iv, p, mean_value(f, iv)))
    if suite == "thm1":
        return [_dominance(trial, suite, "thm1", thm1_bound(iv, p, fa, fb).value, dev, p, None)]
    if (suite == "thm2" and not q > 1) or not _convex_at(trial, q):
        return [_row(trial, suite, suite, params=p, q=q, status="skip")]
    b = thm2_bound(iv, p, q, fa, fb) if suite == "thm2" else thm3_bound(iv, p, q, fa, fb)
    return [_dominance(trial, suite, suite, b.value, dev, p, q)]


def _corollary_rows(trial):
    f, iv, q = trial.function, trial.interval, trial.q
    fa, fb = endpoint_curvature(f, iv)
    mean = mean_value(f, iv)
    devs = {"midpoint": abs(identity_lhs(f, iv, MIDPOINT, mean)),
            "trapezoid": abs(identity_lhs(f, iv, TRAPEZOID, mean))}
    convex_q = _convex_at(trial, q)
    rows = []
    for kind, params in (("midpoint", MIDPOINT), ("trapezoid", TRAPEZOID)):
        for family in (1, 2, 3):
            check = f"cor_{kind[:4] if kind == 'trapezoid' else kind[:3]}_{family}"
            qf = None if family == 1 else q
            if family > 1 and (not convex_q or (family == 2 and not q > 1)):
                rows.append(_row(trial, "corollaries", check, params=params, q=qf, status="skip"))
                continue
            b = corollary_bounds(iv, kind, family, qf, fa, fb)
            rows.append(_dominance(trial, "corollaries", check, b.value, devs[kind], params, qf))
    return rows


def _sharpness_rows(trial):
    g = sharpness_variant(trial)
    iv = trial.interval
    fa, fb = endpoint_curvature(g, iv)
    mean = mean_value(g, iv)
    rows = []
    for check, params in (("cor_mid_1", MIDPOINT), ("cor_trap_1", TRAPEZOID)):
        bound = thm1_bound(iv, params, fa, fb).value
        dev = abs(identity_lhs(g, iv, params, mean))
        slack = bound - dev
        rows.append(_row(trial, "sharpness", check, function=g, params=params, bound=bound,
                         deviation=dev, slack=slack,
                         status="pass" if abs(slack) <= SHARPNESS_TOL else "fail"))
    return rows


_COMPARISONS = (
    # (ours, theirs, needs q > 1)
    ("cor_mid_1", "cmp_4H", False),
    ("cor_trap_1", "cmp_1H", False),
    ("cor_mid_2", "cmp_H7", True),
    ("cor_trap_2", "cmp_H6", True),
    ("cor_mid_3", "cmp_H1", False),
    ("cor_trap_3", "cmp_H4", False),
)


def _comparison_rows(trial):
    f, iv, q = trial.function, trial.interval, trial.q
    fa, fb = endpoint_curvature(f, iv)
    mean = mean_value(f, iv)
    theirs = {b.method: b.value for b in comparison_bounds(iv, f, q)}
    rows = []
    for ours_name, their_name, needs_q in _COMPARISONS:
        kind = "midpoint" if "_mid_" in ours_name else "trapezoid"
        params = MIDPOINT if kind == "midpoint" else TRAPEZOID
        family = int(ours_name[-1])
        check = f"{ours_name}_vs_{their_name}"
        if needs_q and not q > 1:
            rows.append(_row(trial, "comparison", check, params=params, q=q, status="skip"))
            continue
        ours = corollary_bounds(iv, kind, family, None if family == 1 else q, fa, fb).value
        other = theirs[their_name]
        dev = abs(identity_lhs(f, iv, params, mean))
        diff = other - ours
        status = "ours_tighter" if diff > 0 else ("theirs_tighter" if diff < 0 else "equal")
        rows.append(_row(trial, "comparison", check, params=params, q=q, bound=ours,
                         deviation=dev, slack=diff, residual=other, status=status))
    return rows


def trial_rows(suite: str, seed: int, index: int) -> list[dict]:
    trial = generate_convex_trial(seed, index)
    if suite == "identity":
        return _identity_rows(trial)
    if suite in ("thm1", "thm2", "thm3"):
        return _theorem_rows(trial, suite)
    if suite == "corollaries":
        return _corollary_rows(trial)
    if suite == "sharpness":
        return _sharpness_rows(trial)
    if suite == "comparison":
        return _comparison_rows(trial)
    raise InvalidInputError(f"unknown suite {suite!r}; expected one of {SUITES}")


def _trial_rows_packed(args):
    return trial_rows(*args)


# --------------------------------------------------------------------------
# Reports

@dataclass(frozen=True)
class VerificationReport:
    suite: str
    seed: int
    trials: int
    failures: int
    skipped: int
    worst_case: Optional[dict]
    records: list

    def summary(self) -> dict:
        w = self.worst_case or {}
        return {"summary": True, "suite": self.suite, "seed": self.seed,
                "trials": self.trials, "rows": len(self.records),
                "failures": self.failures, "skipped": self.skipped,
                "worst_index": w.get("index"), "worst_check": w.get("check"),
                "worst_slack": w.get("slack")}

    def to_jsonl(self) -> str:
        lines = [json.dumps(r) for r in self.records]
        lines.append(json.dumps(self.summary()))
        return "\n".join(lines) + "\n"

    def worst_trial(self) -> Optional[TrialSpec]:
        if self.worst_case is None:
            return None
        return generate_convex_trial(self.seed, self.worst_case["index"])


def run_suite(suite: str, seed: int, trials: int, workers: int = 1) -> VerificationReport:
    if suite not in SUITES:
        raise InvalidInputError(f"unknown suite {suite!r}; expected one of {SUITES}")
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    jobs = [(suite, seed, i) for i in range(trials)]
    if workers == 1:
        per_trial = [trial_rows(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(_trial_rows_packed, jobs,
                                      chunksize=max(1, trials // (4 * workers))))
    records = [row for rows in per_trial for row in rows]

    failures = sum(r["status"] == "fail" for r in records)
    skipped = sum(r["status"] == "skip" for r in records)
    worst = None
    for r in records:
        if r["slack"] is None:
            continue
        if worst is None or r["slack"] < worst["slack"]:
            worst = {"index": r["index"], "check": r["check"], "slack": r["slack"]}
    return VerificationReport(suite, seed, trials, failures, skipped, worst, records)
