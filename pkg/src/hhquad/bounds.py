"""Error bounds for the generalized rule and the classical comparison bounds.

Every bound takes |f''(a)| and |f''(b)| as plain numbers so callers may pass
sampled values or worst-case estimates.  Bounds valid under a convex |f''|
(or |f''|^q) hypothesis bound |identity_lhs|, i.e. the deviation of the
generalized rule selected by the kernel parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import InvalidInputError
from .funcmodel import FunctionModel, Interval
from .kernel import MIDPOINT, TRAPEZOID, KernelParams, identity_lhs
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, mean_value

METHODS = (
    "thm1", "thm2", "thm3",
    "cor_mid_1", "cor_mid_2", "cor_mid_3",
    "cor_trap_1", "cor_trap_2", "cor_trap_3",
    "cmp_1H", "cmp_4H", "cmp_H1", "cmp_H2", "cmp_H4", "cmp_H6", "cmp_H7",
)


@dataclass(frozen=True)
class HolderExponent:
    """Conjugate pair 1/p + 1/q = 1 with p, q > 1, built from q."""

    q: float
    p: float = field(init=False)

    def __post_init__(self):
        q = float(self.q)
        if not (q > 1 and math.isfinite(q)):
            raise InvalidInputError(f"Hoelder exponent q must be finite and > 1, got {q}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", q / (q - 1.0))


@dataclass(frozen=True)
class PowerMeanExponent:
    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (q >= 1 and math.isfinite(q)):
            raise InvalidInputError(f"power-mean exponent q must be finite and >= 1, got {q}")
        object.__setattr__(self, "q", q)

    @property
    def inv_p(self) -> float:
        """1/p = 1 - 1/q; exactly 0 at q = 1."""
        return 1.0 - 1.0 / self.q


@dataclass(frozen=True)
class Thm1Coeffs:
    A: float
    B: float


@dataclass(frozen=True)
class Thm3Coeffs:
    M: float
    N: float
    P: float
    Q: float


@dataclass(frozen=True)
class BoundResult:
    value: float
    method: str
    params: Optional[KernelParams] = None
    q: Optional[float] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown bound method {self.method!r}")
        if not self.value >= 0:
            raise InvalidInputError(f"bound value must be >= 0, got {self.value}")


def _magnitudes(*values: float) -> None:
    for v in values:
        if not (v >= 0 and math.isfinite(v)):
            raise InvalidInputError(f"|f''| values must be finite and >= 0, got {v}")


def endpoint_curvature(f: FunctionModel, iv: Interval) -> tuple[float, float]:
    """(|f''(a)|, |f''(b)|)."""
    f.require_domain(iv)
    return abs(float(f.eval2(iv.a))), abs(float(f.eval2(iv.b)))


def _as_holder(q) -> HolderExponent:
    return q if isinstance(q, HolderExponent) else HolderExponent(q)


def _as_power_mean(q) -> PowerMeanExponent:
    if isinstance(q, PowerMeanExponent):
        return q
    if isinstance(q, HolderExponent):
        return PowerMeanExponent(q.q)
    return PowerMeanExponent(q)


# --------------------------------------------------------------------------
# Generalized-rule bounds

def _thm1_ab(c, y, d):
    A = 6 * d * d - 8 * d + 3 + (6 * c * c - 6 * d * d) * y ** 2 + (8 * d - 8 * c) * y ** 3
    B = (6 * d * d - 4 * d + 1 + (12 * c * c - 12 * d * d) * y
         + (12 * d + 6 * d * d - 12 * c - 6 * c * c) * y ** 2 + (8 * c - 8 * d) * y ** 3)
    return A, B


def _thm1_value(w2, c, y, d, fa, fb):
    A, B = _thm1_ab(c, y, d)
    return np.maximum(w2 / 24.0 * (A * fa + B * fb), 0.0)


def _root_pow_sum(u, v, e, s):
    """(u**e + v**e) ** (1/s) for u, v >= 0 without underflow at large e."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    hi, lo = np.maximum(u, v), np.minimum(u, v)
    r = np.divide(lo, hi, out=np.zeros_like(hi), where=hi > 0)
    return hi ** (e / s) * (1.0 + r ** e) ** (1.0 / s)


def _thm2_value(w2, c, y, d, fa, fb, q, s):
    # s is the conjugate exponent of q; near q = 1 it is huge
    e = 2.0 * s + 1.0
    ga, gb = fa ** q, fb ** q
    left = _root_pow_sum(c, y - c, e, s) * ((y * y * ga + (2 * y - y * y) * gb) / 2.0) ** (1.0 / q)
    right = _root_pow_sum(d - y, 1 - d, e, s) * (((1 - y * y) * ga + (1 - y) ** 2 * gb) / 2.0) ** (1.0 / q)
    return w2 / 2.0 * (1.0 / e) ** (1.0 / s) * (left + right)


def _thm3_mnpq(c, y, d):
    M = c ** 4 - (c - y) ** 3 * (c + 3 * y)
    N = 4 * c ** 3 - c ** 4 + (c - y) ** 3 * (c + 3 * y - 4)
    P = (d - y) ** 3 * (d + 3 * y) - (d - 1) ** 3 * (d + 3)
    Q = (d - y) ** 3 * (4 - d - 3 * y) + (d - 1) ** 4
    return M, N, P, Q


def _thm3_value(w2, c, y, d, fa, fb, q):
    inv_p = 1.0 - 1.0 / q
    M, N, P, Q = _thm3_mnpq(c, y, d)
    ga, gb = fa ** q, fb ** q
    # clamp tiny negative rounding in the coefficient polynomials
    wl = np.maximum(0.0, (M * ga + N * gb) / 4.0)
    wr = np.maximum(0.0, (P * ga + Q * gb) / 4.0)
    ml = np.maximum(0.0, c ** 3 - (c - y) ** 3)
    mr = np.maximum(0.0, (d - y) ** 3 - (d - 1) ** 3)
    return w2 / 6.0 * (ml ** inv_p * wl ** (1.0 / q) + mr ** inv_p * wr ** (1.0 / q))


def thm1_coeffs(p: KernelParams) -> Thm1Coeffs:
    return Thm1Coeffs(*_thm1_ab(p.c, p.y, p.d))


def thm1_bound(iv: Interval, p: KernelParams, abs_f2a: float, abs_f2b: float) -> BoundResult:
    _magnitudes(abs_f2a, abs_f2b)
    value = _thm1_value(iv.width ** 2, p.c, p.y, p.d, abs_f2a, abs_f2b)
    return BoundResult(float(value), "thm1", p)


def thm2_bound(iv: Interval, p: KernelParams, hp, abs_f2a: float,
               abs_f2b: float) -> BoundResult:
    """Hoelder form; ``hp`` is a HolderExponent or the exponent q > 1."""
    _magnitudes(abs_f2a, abs_f2b)
    hp = _as_holder(hp)
    value = _thm2_value(iv.width ** 2, p.c, p.y, p.d, abs_f2a, abs_f2b, hp.q, hp.p)
    return BoundResult(float(value), "thm2", p, hp.q)


def thm3_coeffs(p: KernelParams) -> Thm3Coeffs:
    return Thm3Coeffs(*_thm3_mnpq(p.c, p.y, p.d))


def thm3_bound(iv: Interval, p: KernelParams, q, abs_f2a: float,
               abs_f2b: float) -> BoundResult:
    """Power-mean form, q >= 1; at q = 1 the kernel-moment factors are 1."""
    _magnitudes(abs_f2a, abs_f2b)
    pm = _as_power_mean(q)
    value = _thm3_value(iv.width ** 2, p.c, p.y, p.d, abs_f2a, abs_f2b, pm.q)
    return BoundResult(float(value), "thm3", p, pm.q)


# --------------------------------------------------------------------------
# Corollaries (closed forms at the midpoint and trapezoid parameters)

def _kind_name(kind: str) -> str:
    kind = kind.lower()
    if kind in ("midpoint", "mid"):
        return "mid"
    if kind in ("trapezoid", "trap"):
        return "trap"
    raise InvalidInputError(f"kind must be 'midpoint' or 'trapezoid', got {kind!r}")


def corollary_bounds(iv: Interval, kind: str, family: int, q: Optional[float],
                     abs_f2a: float, abs_f2b: float) -> BoundResult:
    """Closed-form corollary of the family-``family`` theorem.

    For ``kind='trapezoid'`` the bound controls the corrected trapezoid rule
    (the generalized rule at c = y = d = 1/2); it bounds the plain trapezoid
    deviation only when f'(a) = f'(b).
    """
    _magnitudes(abs_f2a, abs_f2b)
    k = _kind_name(kind)
    w2 = iv.width ** 2
    if family == 1:
        value, qv = w2 / 48.0 * (abs_f2a + abs_f2b), None
    elif family == 2:
        if q is None:
            raise InvalidInputError("family 2 needs q > 1")
        hp = _as_holder(q)
        qq, s = hp.q, hp.p
        ga, gb = abs_f2a ** qq, abs_f2b ** qq
        value = w2 / (16.0 * (2 * s + 1) ** (1.0 / s)) * (
            ((ga + 3 * gb) / 4.0) ** (1.0 / qq) + ((3 * ga + gb) / 4.0) ** (1.0 / qq))
        qv = qq
    elif family == 3:
        if q is None:
            raise InvalidInputError("family 3 needs q >= 1")
        qq = _as_power_mean(q).q
        ga, gb = abs_f2a ** qq, abs_f2b ** qq
        lo, hi = (3.0, 5.0) if k == "mid" else (1.0, 7.0)
        value = w2 / 48.0 * (((lo * ga + hi * gb) / 8.0) ** (1.0 / qq)
                             + ((hi * ga + lo * gb) / 8.0) ** (1.0 / qq))
        qv = qq
    else:
        raise InvalidInputError(f"family must be 1, 2 or 3, got {family!r}")
    params = MIDPOINT if k == "mid" else TRAPEZOID
    return BoundResult(value, f"cor_{k}_{family}", params, qv)


# --------------------------------------------------------------------------
# Comparison bounds from earlier work

def comparison_bounds(iv: Interval, f: FunctionModel, q: Optional[float] = None) -> list[BoundResult]:
    """Right-hand sides of the classical midpoint/trapezoid estimates.

    cmp_1H and cmp_4H use |f'|; cmp_H1, cmp_H2, cmp_H4 use |f''|; cmp_H6 and
    cmp_H7 use |f'| (the hypothesis of the result they come from).  The
    q-dependent entries cmp_H2, cmp_H6 and cmp_H7 are only produced for
    q > 1; cmp_H4 uses q = 1 when q is not given.
    """
    f.require_domain(iv)
    w = iv.width
    d1a, d1b = abs(float(f.eval1(iv.a))), abs(float(f.eval1(iv.b)))
    d2a, d2b = endpoint_curvature(f, iv)

    out = [
        BoundResult(w * (d1a + d1b) / 8.0, "cmp_1H"),
        BoundResult(w / 8.0 * (d1a + d1b), "cmp_4H"),
        BoundResult(w * w / 24.0 * (d2a + d2b) / 2.0, "cmp_H1"),
    ]
    q4 = 1.0 if q is None else _as_power_mean(q).q
    if q is not None and q > 1:
        hp = _as_holder(q)
        qq, s = hp.q, hp.p
        out.append(BoundResult(
            w * w / (8.0 * (2 * s + 1) ** (1.0 / s)) * ((d2a ** qq + d2b ** qq) / 2.0) ** (1.0 / qq),
            "cmp_H2", q=qq))
    out.append(BoundResult(w * w / 12.0 * ((d2a ** q4 + d2b ** q4) / 2.0) ** (1.0 / q4),
                           "cmp_H4", q=q4))
    if q is not None and q > 1:
        ga, gb = d1a ** qq, d1b ** qq
        v = w / (4.0 * (s + 1) ** (1.0 / s)) * (
            ((ga + 3 * gb) / 4.0) ** (1.0 / qq) + ((3 * ga + gb) / 4.0) ** (1.0 / qq))
        out.append(BoundResult(v, "cmp_H6", TRAPEZOID, qq))
        out.append(BoundResult(v, "cmp_H7", MIDPOINT, qq))
    return out


# --------------------------------------------------------------------------
# The quantities being bounded

Kind = Union[str, KernelParams]


def true_deviation(f: FunctionModel, iv: Interval, kind: Kind,
                   mean_integral: Optional[float] = None,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Midpoint, plain trapezoid or generalized-rule deviation from the mean of f.

    ``kind`` is 'midpoint', 'trapezoid', or a KernelParams for the
    generalized rule (|identity_lhs|).
    """
    f.require_domain(iv)
    if mean_integral is None:
        mean_integral = mean_value(f, iv, cfg)
    if isinstance(kind, KernelParams):
        return abs(identity_lhs(f, iv, kind, mean_integral))
    k = _kind_name(kind)
    if k == "mid":
        return abs(mean_integral - float(f.eval0(iv.midpoint)))
    return abs(mean_integral - 0.5 * (float(f.eval0(iv.a)) + float(f.eval0(iv.b))))


def deviation_kind(method: str, params: Optional[KernelParams] = None) -> Kind:
    """The deviation a bound method controls (used for dominance checks).

    Trapezoid corollaries control the corrected trapezoid rule, i.e. the
    generalized rule at c = y = d = 1/2.
    """
    if method in ("thm1", "thm2", "thm3"):
        if params is None:
            raise InvalidInputError(f"{method} needs kernel parameters")
        return params
    if method.startswith("cor_mid") or method in ("cmp_4H", "cmp_H1", "cmp_H2", "cmp_H7"):
        return "midpoint"
    if method.startswith("cor_trap"):
        return TRAPEZOID
    if method in ("cmp_1H", "cmp_H4", "cmp_H6"):
        return "trapezoid"
    raise InvalidInputError(f"unknown bound method {method!r}")
