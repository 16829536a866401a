"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from hhquad.bounds import (corollary_bounds, endpoint_curvature, thm1_bound, thm1_coeffs,
                           thm3_bound, thm3_coeffs, true_deviation)
from hhquad.funcmodel import Interval, builtin_catalog, get_function
from hhquad.kernel import MIDPOINT, TRAPEZOID, KernelParams
from hhquad.means import (check_mean_chain, harmonic, logarithmic, p_logarithmic,
                          proposition_gap)
from hhquad.paramopt import optimize_params
from hhquad.quadrature import adaptive_certified, certified_midpoint, certified_trapezoid_corrected
from hhquad.verify import run_suite


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_constants(report):
    k1 = thm1_coeffs(MIDPOINT)
    k3m = thm3_coeffs(MIDPOINT)
    k3t = thm3_coeffs(TRAPEZOID)
    errs = [abs(k1.A - 0.5), abs(k1.B - 0.5),
            *(abs(u - v) for u, v in zip((k3m.M, k3m.N, k3m.P, k3m.Q), (3 / 16, 5 / 16, 5 / 16, 3 / 16))),
            *(abs(u - v) for u, v in zip((k3t.M, k3t.N, k3t.P, k3t.Q), (1 / 16, 7 / 16, 7 / 16, 1 / 16)))]
    worst = max(errs)
    report(1, worst <= 1e-14, f"thm1 (0.5, 0.5), thm3 3/5 and 1/7 weights; max error {worst:.2e} <= 1e-14")


def test_criterion_2_identity_suite(report):
    t0 = time.perf_counter()
    rep = run_suite("identity", 0, 200)
    dt = time.perf_counter() - t0
    worst = max(r["residual"] for r in rep.records)
    ok = rep.failures == 0 and worst <= 1e-9 and dt < 10
    report(2, ok, f"identity suite 200 trials: {rep.failures} failures, worst relative residual "
                  f"{worst:.2e}, {dt:.2f} s")


def test_criterion_3_dominance_suites(report):
    t0 = time.perf_counter()
    parts = []
    failures = 0
    worst = math.inf
    for suite in ("thm1", "thm2", "thm3", "corollaries"):
        rep = run_suite(suite, 0, 500)
        failures += rep.failures
        slacks = [r["slack"] for r in rep.records if r["slack"] is not None]
        worst = min(worst, min(slacks))
        parts.append(f"{suite}={rep.failures}")
    dt = time.perf_counter() - t0
    ok = failures == 0 and worst >= -1e-12 and dt < 60
    report(3, ok, f"dominance suites 500 trials each ({', '.join(parts)} failures), "
                  f"min slack {worst:.2e}, {dt:.2f} s")


def test_criterion_4_sharpness(report):
    f2, iv = get_function("pow:2"), Interval(0, 1)
    cor = corollary_bounds(iv, "midpoint", 1, None, *endpoint_curvature(f2, iv)).value
    dev = true_deviation(f2, iv, "midpoint")
    cert = certified_trapezoid_corrected(get_function("pow:3"), iv, 1)
    true_err = abs(cert.estimate - 0.25)
    p1 = proposition_gap("P1a", 1, 2, n=3)
    errs = [abs(cor - 1 / 12), abs(dev - 1 / 12), abs(cert.error_bound - 0.125),
            abs(true_err - 0.125), abs(p1.lhs - 0.375), abs(p1.rhs - 0.375)]
    ok = max(errs) <= 1e-12
    report(4, ok, f"x^2 midpoint bound {cor:.12g} = deviation {dev:.12g}; x^3 corrected "
                  f"trapezoid bound {cert.error_bound:.12g} = error {true_err:.12g}; "
                  f"P1 n=3 lhs {p1.lhs:.12g} rhs {p1.rhs:.12g}")


def test_criterion_5_reduction(report):
    ticks = [(i + 0.5) / 20 for i in range(20)]
    grid = [(c, y, d) for y in ticks for c in ticks if c <= y for d in ticks if d >= y]
    pairs = np.random.default_rng(5).uniform(0, 10, size=(10, 2))
    iv = Interval(0.0, 1.0)
    worst = 0.0
    for c, y, d in grid:
        p = KernelParams(c, y, d)
        for fa, fb in pairs:
            worst = max(worst, abs(thm3_bound(iv, p, 1, fa, fb).value - thm1_bound(iv, p, fa, fb).value))
    report(5, worst <= 1e-12, f"thm3(q=1) vs thm1 over {len(grid)} params x 10 pairs: "
                              f"max difference {worst:.2e}")


def test_criterion_6_certified_integration(report):
    cert = adaptive_certified(get_function("exp"), Interval(0, 1), 1e-6)
    err = abs(cert.estimate - (math.e - 1))
    ok = err <= 1e-6 and cert.error_bound <= 1e-6
    iv = Interval(1.0, 2.0)
    ratios = {}
    for f in builtin_catalog():
        rs = [certified_midpoint(f, iv, n).error_bound / certified_midpoint(f, iv, 2 * n).error_bound
              for n in (2, 4, 8, 16, 32)]
        ratios[f.name] = (min(rs), max(rs))
        ok &= all(3.0 <= r <= 5.0 for r in rs)
    for name in ("pow:2", "pow:3"):
        rs = [certified_midpoint(get_function(name), iv, n).error_bound
              / certified_midpoint(get_function(name), iv, 2 * n).error_bound for n in (1, 2, 4, 8, 16, 32)]
        ok &= all(abs(r - 4.0) <= 1e-12 for r in rs)
    lo = min(v[0] for v in ratios.values())
    hi = max(v[1] for v in ratios.values())
    report(6, ok, f"exp target 1e-6: error {err:.2e}, bound {cert.error_bound:.2e}, n={cert.n_subintervals}; "
                  f"doubling ratios on [1,2], n=2..64, in [{lo:.4f}, {hi:.4f}]; constant f'' exactly 4")


def test_criterion_7_means(report):
    h, l, l2 = harmonic(2, 8), logarithmic(2, 8), p_logarithmic(2, 2, 8)
    ok = abs(h - 3.2) <= 1e-10 and abs(l - 6 / math.log(4)) <= 1e-10 and abs(l2 - math.sqrt(28)) <= 1e-10
    rng = np.random.default_rng(7)
    pairs = rng.uniform(1e-3, 1e3, size=(1000, 2))
    chain = all(check_mean_chain(float(a), float(b)) for a, b in pairs)
    grid = (-3, -1, 0, 1, 2, 3)
    mono = all(
        all(u <= v * (1 + 1e-12) for u, v in zip(vals, vals[1:]))
        for vals in ([p_logarithmic(p, float(a), float(b)) for p in grid] for a, b in pairs[:200]))
    report(7, ok and chain and mono,
           f"H={h:.12g}, L={l:.12g}, L2={l2:.12g}; chain on 1000 pairs {chain}; L_p monotone {mono}")


def test_criterion_8_optimizer(report):
    rng = np.random.default_rng(8)
    ok = True
    for _ in range(100):
        a = float(rng.uniform(-2, 2))
        iv = Interval(a, a + float(rng.uniform(0.1, 3)))
        fa, fb = (float(v) for v in rng.uniform(0, 10, size=2))
        res = optimize_params(iv, "thm1", fa, fb)
        ok &= res.best_value <= min(res.baseline_midpoint, res.baseline_trapezoid) + 1e-15
    eq = optimize_params(Interval(0, 1), "thm1", 2, 2)
    quarter = thm1_bound(Interval(0, 1), KernelParams(0.25, 0.5, 0.75), 2, 2).value
    ok_eq = eq.best_value <= quarter + 1e-15 and abs(quarter - eq.baseline_midpoint / 4) <= 1e-15
    report(8, ok and ok_eq, f"100 random inputs beat both baselines: {ok}; equal magnitudes "
                            f"best {eq.best_value:.12g} <= {quarter:.12g} = midpoint/4")


def test_criterion_9_determinism(report):
    ok = True
    for suite in ("identity", "corollaries", "comparison"):
        first = run_suite(suite, 9, 100).to_jsonl()
        ok &= first == run_suite(suite, 9, 100).to_jsonl()
        ok &= first == run_suite(suite, 9, 100, workers=8).to_jsonl()
    report(9, ok, "reports byte-identical across repeated runs and workers 1 vs 8")
