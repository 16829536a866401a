"""Two-argument special means and the inequalities they inherit from the bounds.

The logarithmic, identric and p-logarithmic means are evaluated through
log1p/expm1 in the ratio (b - a)/a, which keeps them accurate when a and b
nearly coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .bounds import corollary_bounds
from .errors import InvalidInputError
from .funcmodel import Interval

KINDS = ("arithmetic", "harmonic", "logarithmic", "identric", "p_logarithmic")
PROPOSITIONS = ("P1a", "P1b", "P2a", "P2b", "P3a", "P3b")

# relative gap below which two arguments are treated as equal
_EQUAL_RTOL = 1e-12


@dataclass(frozen=True)
class MeanKind:
    tag: str
    p: Optional[float] = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise InvalidInputError(f"unknown mean {self.tag!r}; expected one of {KINDS}")
        if self.tag == "p_logarithmic":
            if self.p is None or not math.isfinite(self.p):
                raise InvalidInputError("p_logarithmic needs a finite p")
            # L_{-1} is the logarithmic and L_0 the identric mean
            if self.p == -1:
                object.__setattr__(self, "tag", "logarithmic")
                object.__setattr__(self, "p", None)
            elif self.p == 0:
                object.__setattr__(self, "tag", "identric")
                object.__setattr__(self, "p", None)


def _positive(a: float, b: float) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise InvalidInputError(f"arguments must be finite and positive, got ({a}, {b})")
    return (a, b) if a <= b else (b, a)


def _close(a: float, b: float) -> bool:
    return b - a <= _EQUAL_RTOL * a


def arithmetic(a: float, b: float) -> float:
    a, b = float(a), float(b)
    if a < 0 or b < 0:
        raise InvalidInputError(f"arithmetic mean needs a, b >= 0, got ({a}, {b})")
    return 0.5 * (a + b)


def harmonic(a: float, b: float) -> float:
    a, b = _positive(a, b)
    return 2.0 * a * b / (a + b)


def logarithmic(a: float, b: float) -> float:
    a, b = _positive(a, b)
    if _close(a, b):
        return a
    return (b - a) / math.log1p((b - a) / a)


def identric(a: float, b: float) -> float:
    a, b = _positive(a, b)
    if _close(a, b):
        return a
    # (b ln b - a ln a)/(b - a) = ln b + a ln(b/a)/(b - a)
    return math.exp(math.log(b) + a * math.log1p((b - a) / a) / (b - a) - 1.0)


def p_logarithmic(p: float, a: float, b: float) -> float:
    if p == -1:
        return logarithmic(a, b)
    if p == 0:
        return identric(a, b)
    a, b = _positive(a, b)
    if _close(a, b):
        return a
    delta = (b - a) / a
    ratio = math.expm1((p + 1.0) * math.log1p(delta)) / ((p + 1.0) * delta)
    return a * ratio ** (1.0 / p)


def mean(kind: MeanKind, a: float, b: float) -> float:
    if isinstance(kind, str):
        kind = MeanKind(kind)
    if kind.tag == "arithmetic":
        return arithmetic(a, b)
    if kind.tag == "harmonic":
        return harmonic(a, b)
    if kind.tag == "logarithmic":
        return logarithmic(a, b)
    if kind.tag == "identric":
        return identric(a, b)
    return p_logarithmic(kind.p, a, b)


def check_mean_chain(a: float, b: float, slack: float = 1e-12) -> bool:
    """H <= L <= A up to a relative slack."""
    h, l, m = harmonic(a, b), logarithmic(a, b), arithmetic(a, b)
    tol = slack * max(1.0, m)
    return h <= l + tol and l <= m + tol


# --------------------------------------------------------------------------
# Propositions: the corollaries applied to x^n and 1/x

class PropositionGap(NamedTuple):
    lhs: float
    rhs: float


def _power_mean_of(n: int, a: float, b: float) -> float:
    """L_n^n(a, b), the mean value of x^n over [a, b]."""
    return (b ** (n + 1) - a ** (n + 1)) / ((n + 1) * (b - a))


def proposition_gap(which: str, a: float, b: float, n: Optional[int] = None,
                    q: Optional[float] = None, corrected: bool = False) -> PropositionGap:
    """Deviation (lhs) and corollary bound (rhs) for one proposition variant.

    P1 uses the family-1 corollaries and P2 the family-2 ones on f(x) = x^n,
    n > 2.  P3 applies the family-3 corollaries to f(x) = 1/x with
    |f''(x)| = 2/x^3 (q >= 1, default 1).  The 'a' variants are midpoint
    deviations; the 'b' variants are plain trapezoid deviations.

    The trapezoid corollaries need f'(a) = f'(b), which never holds here.
    With ``corrected=True`` the 'b' bounds gain the endpoint-derivative term
    (b - a) |f'(b) - f'(a)| / 8, which makes them valid; without it they can
    be violated (e.g. P1b with n = 3 on [1, 2]).
    """
    if which not in PROPOSITIONS:
        raise InvalidInputError(f"unknown proposition {which!r}; expected one of {PROPOSITIONS}")
    a, b = float(a), float(b)
    if not 0 < a < b:
        raise InvalidInputError(f"propositions need 0 < a < b, got ({a}, {b})")
    iv = Interval(a, b)
    family = int(which[1])
    kind = "midpoint" if which.endswith("a") else "trapezoid"

    if family in (1, 2):
        if n is None or isinstance(n, bool) or int(n) != n or n <= 2:
            raise InvalidInputError(f"{which} needs an integer n > 2, got {n}")
        n = int(n)
        if family == 2 and (q is None or not q > 1):
            raise InvalidInputError(f"{which} needs q > 1, got {q}")
        mean_f = _power_mean_of(n, a, b)
        f2a, f2b = n * (n - 1) * a ** (n - 2), n * (n - 1) * b ** (n - 2)
        d1a, d1b = n * a ** (n - 1), n * b ** (n - 1)
        if kind == "midpoint":
            lhs = abs(mean_f - arithmetic(a, b) ** n)
        else:
            lhs = abs(mean_f - arithmetic(a ** n, b ** n))
        rhs = corollary_bounds(iv, kind, family, q if family == 2 else None, f2a, f2b).value
    else:
        q = 1.0 if q is None else q
        if not q >= 1:
            raise InvalidInputError(f"{which} needs q >= 1, got {q}")
        inv_l = 1.0 / logarithmic(a, b)
        f2a, f2b = 2.0 / a ** 3, 2.0 / b ** 3
        d1a, d1b = -1.0 / (a * a), -1.0 / (b * b)
        if kind == "midpoint":
            lhs = abs(inv_l - 1.0 / arithmetic(a, b))
        else:
            lhs = abs(inv_l - 1.0 / harmonic(a, b))
        rhs = corollary_bounds(iv, kind, 3, q, f2a, f2b).value

    if corrected and kind == "trapezoid":
        rhs += (b - a) * abs(d1b - d1a) / 8.0
    return PropositionGap(lhs, rhs)
