"""Search over (c, y, d) for the generalized rule with the smallest a-priori bound.

Coarse grid on 0 <= c <= y <= d <= 1 (step 1/64, y kept in [1/64, 63/64]),
then three rounds of coordinate moves with the step halved each round.
Candidates are ranked by (value, c, y, d), so ties resolve to the
lexicographically smallest parameters and the result is order independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import HolderExponent, PowerMeanExponent, _magnitudes, _thm1_value, _thm2_value, _thm3_value
from .errors import InvalidInputError
from .funcmodel import Interval
from .kernel import MIDPOINT, TRAPEZOID, KernelParams

GRID = 64
REFINE_ROUNDS = 3
OBJECTIVES = ("thm1", "thm2", "thm3")


@dataclass(frozen=True)
class OptimizationResult:
    best_params: KernelParams
    best_value: float
    baseline_midpoint: float
    baseline_trapezoid: float
    evaluations: int
    objective: str = "thm1"
    q: Optional[float] = None


def _objective(iv: Interval, objective: str, q: Optional[float], fa: float, fb: float):
    w2 = iv.width ** 2
    if objective == "thm1":
        return lambda c, y, d: _thm1_value(w2, c, y, d, fa, fb)
    if objective == "thm2":
        if q is None:
            raise InvalidInputError("thm2 objective needs q > 1")
        hp = HolderExponent(q)
        return lambda c, y, d: _thm2_value(w2, c, y, d, fa, fb, hp.q, hp.p)
    if objective == "thm3":
        qq = PowerMeanExponent(1.0 if q is None else q).q
        return lambda c, y, d: _thm3_value(w2, c, y, d, fa, fb, qq)
    raise InvalidInputError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def _simplex_grid():
    idx = np.arange(GRID + 1)
    ic, iy, id_ = np.meshgrid(idx, idx, idx, indexing="ij")
    keep = (ic <= iy) & (iy <= id_) & (iy >= 1) & (iy <= GRID - 1)
    return ic[keep] / GRID, iy[keep] / GRID, id_[keep] / GRID


def optimize_params(iv: Interval, objective: str, abs_f2a: float, abs_f2b: float,
                    q: Optional[float] = None) -> OptimizationResult:
    _magnitudes(abs_f2a, abs_f2b)
    fn = _objective(iv, objective, q, abs_f2a, abs_f2b)
    qv = None if objective == "thm1" else (1.0 if q is None else float(q))

    def value(p: KernelParams) -> float:
        return float(fn(p.c, p.y, p.d))

    base_mid, base_trap = value(MIDPOINT), value(TRAPEZOID)
    if abs_f2a == 0 and abs_f2b == 0:
        return OptimizationResult(MIDPOINT, 0.0, base_mid, base_trap, 2, objective, qv)

    c, y, d = _simplex_grid()
    vals = np.asarray(fn(c, y, d), dtype=float)
    evaluations = vals.size + 2
    k = np.lexsort((d, y, c, vals))[0]
    best = (float(vals[k]), float(c[k]), float(y[k]), float(d[k]))

    y_lo, y_hi = 1.0 / GRID, 1.0 - 1.0 / GRID
    step = 1.0 / GRID
    for _ in range(REFINE_ROUNDS):
        step /= 2.0
        moved = True
        while moved:
            moved = False
            for axis in range(3):
                for delta in (-step, step):
                    cand = list(best[1:])
                    cand[axis] += delta
                    cc, yy, dd = cand
                    if not (0.0 <= cc <= yy <= dd <= 1.0 and y_lo <= yy <= y_hi):
                        continue
                    v = float(fn(cc, yy, dd))
                    evaluations += 1
                    if (v, cc, yy, dd) < best:
                        best = (v, cc, yy, dd)
                        moved = True

    return OptimizationResult(KernelParams(*best[1:]), best[0], base_mid, base_trap,
                              evaluations, objective, qv)
