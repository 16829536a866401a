"""Reference integration and certified composite midpoint / corrected trapezoid rules.

Each composite rule attaches to every subinterval [u, v] of width h the
a-priori bound (h**3 / 48) * (|f''(u)| + |f''(v)|), valid whenever |f''| is
convex on [u, v].  Convexity on the whole interval is checked once; if the
check fails the certificate is still produced but flagged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInputError, NumericError
from .funcmodel import FunctionModel, Interval, check_abs_f2_convexity

log = logging.getLogger(__name__)

# 3-point Gauss-Legendre on [-1, 1]; exact through degree 5.
_GL_NODES = np.array([-np.sqrt(0.6), 0.0, np.sqrt(0.6)])
_GL_WEIGHTS = np.array([5.0, 8.0, 5.0]) / 9.0

MAX_SUBINTERVALS = 2 ** 20

RULES = ("midpoint", "trapezoid_corrected")


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    max_depth: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise InvalidInputError("abs_tol must be positive")
        if self.max_depth < 1:
            raise InvalidInputError("max_depth must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


def _gauss3(fn, a: float, b: float, halves: bool = False):
    half = 0.5 * (b - a)
    if not halves:
        x = 0.5 * (a + b) + half * _GL_NODES
        return half * float(np.dot(_GL_WEIGHTS, np.asarray(fn(x), dtype=float)))
    m = 0.5 * (a + b)
    # widths taken from the rounded midpoint so both halves agree with a
    # direct evaluation on [a, m] and [m, b]
    ql, qr = 0.5 * (m - a), 0.5 * (b - m)
    x = np.concatenate(((a + m) * 0.5 + ql * _GL_NODES, (m + b) * 0.5 + qr * _GL_NODES))
    y = np.asarray(fn(x), dtype=float)
    return ql * float(np.dot(_GL_WEIGHTS, y[:3])), qr * float(np.dot(_GL_WEIGHTS, y[3:]))


def integrate_callable(fn: Callable, a: float, b: float,
                       cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Adaptive bisection with the 3-point Gauss rule.

    A panel is accepted when its value and the sum over its two halves agree
    within its width-proportional share of ``cfg.abs_tol``; the finer value
    is kept.  ``fn`` must accept numpy arrays.  Panels are summed in
    left-to-right order so the result does not depend on traversal details.
    """
    if a == b:
        return 0.0
    total_width = b - a
    accepted: list[tuple[float, float, float]] = []
    achieved = 0.0
    failed = False
    # stack of (left, right, coarse value, depth); pop order is irrelevant
    # because accepted panels are sorted before summation
    stack = [(a, b, _gauss3(fn, a, b), 0)]
    while stack:
        lo, hi, coarse, depth = stack.pop()
        left, right = _gauss3(fn, lo, hi, halves=True)
        fine = left + right
        diff = abs(fine - coarse)
        share = cfg.abs_tol * (hi - lo) / total_width
        floor = 1e-15 * (abs(left) + abs(right))
        if diff <= max(share, floor):
            accepted.append((lo, fine, diff))
            achieved += diff
        elif depth + 1 >= cfg.max_depth:
            accepted.append((lo, fine, diff))
            achieved += diff
            failed = True
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    accepted.sort(key=lambda p: p[0])
    estimate = 0.0
    for _, value, _ in accepted:
        estimate += value
    if failed:
        raise NumericError(
            f"integrator hit max_depth={cfg.max_depth} on [{a}, {b}]",
            estimate=estimate, achieved=achieved)
    return estimate


def reference_integrate(f: FunctionModel, iv: Interval,
                        cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    f.require_domain(iv)
    return integrate_callable(f.eval0, iv.a, iv.b, cfg)


def mean_value(f: FunctionModel, iv: Interval,
               cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """(1/(b-a)) * integral of f, from the closed-form primitive when known."""
    exact = f.exact_integral(iv)
    total = exact if exact is not None else reference_integrate(f, iv, cfg)
    return total / iv.width


@dataclass(frozen=True)
class Certificate:
    """Composite estimate of an integral with a guaranteed error bound.

    The guarantee |estimate - integral| <= error_bound holds when
    ``hypothesis_verified`` is true.
    """

    estimate: float
    error_bound: float
    n_subintervals: int
    rule: str
    nodes: np.ndarray
    local_estimates: np.ndarray
    local_bounds: np.ndarray
    hypothesis_verified: bool

    @property
    def per_interval(self) -> list[tuple[float, float, float, float]]:
        return list(zip(self.nodes[:-1].tolist(), self.nodes[1:].tolist(),
                        self.local_estimates.tolist(), self.local_bounds.tolist()))


def _ordered_sum(values: np.ndarray) -> float:
    total = 0.0
    for v in values.tolist():
        total += v
    return total


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _hypothesis(f: FunctionModel, iv: Interval) -> bool:
    report = check_abs_f2_convexity(f, iv, q=1.0)
    if not report.is_satisfied:
        log.warning("|f''| of %s not convex on [%g, %g] (slack %.3g at %s); "
                    "certificate is unverified", f.name, iv.a, iv.b,
                    report.max_violation, report.witness)
    return report.is_satisfied


def _certify(f: FunctionModel, iv: Interval, n: int, rule: str,
             verified: Optional[bool] = None) -> Certificate:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidInputError(f"number of subintervals must be an integer >= 1, got {n}")
    if rule not in RULES:
        raise InvalidInputError(f"unknown rule {rule!r}; expected one of {RULES}")
    n = int(n)
    f.require_domain(iv)
    if verified is None:
        verified = _hypothesis(f, iv)

    x = iv.split(n)
    u, v = x[:-1], x[1:]
    h = v - u
    g = np.abs(np.asarray(f.eval2(x), dtype=float))
    local_bounds = (h ** 3 / 48.0) * (g[:-1] + g[1:])
    if rule == "midpoint":
        local = h * np.asarray(f.eval0(0.5 * (u + v)), dtype=float)
    else:
        fx = np.asarray(f.eval0(x), dtype=float)
        dfx = np.asarray(f.eval1(x), dtype=float)
        local = h * (0.5 * (fx[:-1] + fx[1:]) - h * (dfx[1:] - dfx[:-1]) / 8.0)

    return Certificate(
        estimate=_ordered_sum(local),
        error_bound=_ordered_sum(local_bounds),
        n_subintervals=n,
        rule=rule,
        nodes=_frozen(x),
        local_estimates=_frozen(local),
        local_bounds=_frozen(local_bounds),
        hypothesis_verified=bool(verified),
    )


def certified_midpoint(f: FunctionModel, iv: Interval, n: int) -> Certificate:
    return _certify(f, iv, n, "midpoint")


def certified_trapezoid_corrected(f: FunctionModel, iv: Interval, n: int) -> Certificate:
    """Trapezoid rule with the endpoint-derivative term -h**2 (f'(v) - f'(u)) / 8.

    The derivative term keeps the per-panel bound valid without requiring
    f'(u) = f'(v).
    """
    return _certify(f, iv, n, "trapezoid_corrected")


def adaptive_certified(f: FunctionModel, iv: Interval, target: float,
                       rule: str = "midpoint") -> Certificate:
    """Double n from 1 until the certified bound drops to ``target``."""
    if not target > 0:
        raise InvalidInputError("target must be positive")
    if rule == "trapezoid":
        rule = "trapezoid_corrected"
    if rule not in RULES:
        raise InvalidInputError(f"unknown rule {rule!r}; expected one of {RULES}")
    f.require_domain(iv)
    verified = _hypothesis(f, iv)
    n = 1
    cert = None
    while n <= MAX_SUBINTERVALS:
        cert = _certify(f, iv, n, rule, verified)
        if cert.error_bound <= target:
            return cert
        n *= 2
    raise NumericError(
        f"target {target:g} not reached with {MAX_SUBINTERVALS} subintervals",
        estimate=cert.estimate, achieved=cert.error_bound, payload=cert)
