import json

import pytest

from hhquad.errors import InvalidInputError
from hhquad.funcmodel import check_abs_f2_convexity
from hhquad.verify import (ROW_FIELDS, SUITES, affine_curvature_cubic, convex_quartic,
                           generate_convex_trial, run_suite, sharpness_variant, trial_rows)


def test_trial_generation_is_keyed_by_seed_and_index():
    t1 = generate_convex_trial(7, 3)
    t2 = generate_convex_trial(7, 3)
    assert t1 == t2
    assert t1.descriptor == t2.descriptor
    assert generate_convex_trial(7, 4) != t1
    assert generate_convex_trial(8, 3) != t1


def test_trial_ranges():
    for i in range(200):
        t = generate_convex_trial(0, i)
        iv, p = t.interval, t.params
        assert -2 <= iv.a <= 2 and 0.1 <= iv.width <= 4
        assert t.alpha >= 0 and t.beta >= 0
        assert iv.a <= t.x0 <= iv.b
        assert 1 <= t.q <= 4
        assert 0 <= p.c <= p.y <= p.d <= 1


def test_generated_curvature_is_convex():
    for i in range(20):
        t = generate_convex_trial(5, i)
        assert check_abs_f2_convexity(t.function, t.interval, t.q).is_satisfied


def test_builders():
    f = convex_quartic(2.0, 12.0, 1.0)
    # f'' = 2 + 12 (x - 1)^2
    assert f.derivative().derivative()(3.0) == pytest.approx(50.0)
    g = affine_curvature_cubic(1.0, 3.0, 0.5)
    assert g.derivative().derivative()(1.5) == pytest.approx(4.0)
    with pytest.raises(InvalidInputError):
        convex_quartic(-1.0, 0.0, 0.0)


def test_sharpness_variant_has_affine_nonnegative_curvature():
    t = generate_convex_trial(2, 9)
    g = sharpness_variant(t)
    iv = t.interval
    assert g.eval2(iv.a) == pytest.approx(t.alpha)
    assert g.eval2(iv.b) == pytest.approx(t.alpha + t.beta)


@pytest.mark.parametrize("suite", SUITES)
def test_rows_have_fixed_schema(suite):
    rows = trial_rows(suite, 1, 0)
    assert rows
    for r in rows:
        assert tuple(r) == ROW_FIELDS
        assert r["suite"] == suite and r["seed"] == 1 and r["index"] == 0


@pytest.mark.parametrize("suite", SUITES)
def test_small_runs_have_no_failures(suite):
    rep = run_suite(suite, 3, 40)
    assert rep.failures == 0
    assert rep.trials == 40
    if suite != "comparison":
        assert all(r["status"] in ("pass", "skip") for r in rep.records)
    else:
        assert {r["status"] for r in rep.records} <= {"ours_tighter", "theirs_tighter", "equal", "skip"}


def test_thm2_trial_with_q_near_one():
    # q = 1.0015 makes the conjugate exponent about 665
    row = trial_rows("thm2", 0, 442)[0]
    assert row["q"] < 1.002
    assert row["status"] == "pass" and row["bound"] > row["deviation"]


def test_report_summary_and_jsonl():
    rep = run_suite("corollaries", 11, 10)
    lines = rep.to_jsonl().splitlines()
    assert len(lines) == len(rep.records) + 1
    summary = json.loads(lines[-1])
    assert summary == rep.summary()
    assert summary["rows"] == 60
    assert summary["worst_slack"] == min(r["slack"] for r in rep.records if r["slack"] is not None)
    assert rep.worst_trial() == generate_convex_trial(11, summary["worst_index"])


def test_identity_rows_report_both_sides():
    row = trial_rows("identity", 4, 2)[0]
    assert row["bound"] == pytest.approx(row["deviation"], rel=1e-9, abs=1e-12)
    assert row["residual"] <= 1e-9


def test_reports_are_deterministic_across_runs_and_workers():
    a = run_suite("thm3", 21, 60).to_jsonl()
    b = run_suite("thm3", 21, 60).to_jsonl()
    c = run_suite("thm3", 21, 60, workers=8).to_jsonl()
    assert a == b == c


def test_run_suite_validation():
    with pytest.raises(InvalidInputError):
        run_suite("nope", 0, 1)
    with pytest.raises(InvalidInputError):
        run_suite("thm1", 0, 0)
    with pytest.raises(InvalidInputError):
        run_suite("thm1", 0, 1, workers=0)
    with pytest.raises(InvalidInputError):
        generate_convex_trial(-1, 0)
