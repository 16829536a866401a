"""The piecewise quadratic kernel k(t) and the three-parameter integral identity.

For 0 <= c <= y <= d <= 1 with 0 < y < 1 and m = y*a + (1-y)*b,

    ((c-y)^2 - (d-y)^2)/2 (a-b) f'(m) + ((d-1)^2 f'(a) - c^2 f'(b))/2 (a-b)
      + (c-d) f(m) + (d-1) f(a) - c f(b) + (1/(b-a)) int_a^b f
    = (b-a)^2 int_0^1 k(t) f''(t a + (1-t) b) dt

with k(t) = (c-t)^2/2 on [0, y) and (d-t)^2/2 on [y, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInputError
from .funcmodel import FunctionModel, Interval
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_callable, mean_value


@dataclass(frozen=True, order=True)
class KernelParams:
    c: float
    y: float
    d: float

    def __post_init__(self):
        c, y, d = float(self.c), float(self.y), float(self.d)
        if not all(math.isfinite(v) for v in (c, y, d)):
            raise InvalidInputError("kernel parameters must be finite")
        if not (0.0 <= c <= y <= d <= 1.0):
            raise InvalidInputError(f"need 0 <= c <= y <= d <= 1, got ({c}, {y}, {d})")
        if not 0.0 < y < 1.0:
            raise InvalidInputError(f"y must lie strictly inside (0, 1), got {y}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "d", d)

    def node(self, iv: Interval) -> float:
        """The interior evaluation point y*a + (1-y)*b."""
        return self.y * iv.a + (1.0 - self.y) * iv.b

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.c, self.y, self.d)


MIDPOINT = KernelParams(0.0, 0.5, 1.0)
TRAPEZOID = KernelParams(0.5, 0.5, 0.5)


@dataclass(frozen=True)
class IdentityResidual:
    lhs: float
    rhs: float
    residual: float
    relative_residual: float

    @classmethod
    def between(cls, lhs: float, rhs: float) -> "IdentityResidual":
        r = abs(lhs - rhs)
        return cls(lhs, rhs, r, r / (1.0 + max(abs(lhs), abs(rhs))))


def kernel_eval(p: KernelParams, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise InvalidInputError(f"t must lie in [0, 1], got {t}")
    if t < p.y:
        return 0.5 * (p.c - t) ** 2
    return 0.5 * (p.d - t) ** 2


def kernel_moment_0(p: KernelParams) -> float:
    """Closed form of the integral of k over [0, 1]."""
    c, y, d = p.c, p.y, p.d
    return (c ** 3 - (c - y) ** 3) / 6.0 + ((d - y) ** 3 - (d - 1.0) ** 3) / 6.0


def kernel_power_moments(p: KernelParams, hp) -> tuple[float, float]:
    """Integrals of |c-t|^(2s) over [0, y] and |d-t|^(2s) over [y, 1].

    ``hp`` is a HolderExponent or the bare exponent s > 1.
    """
    s = float(getattr(hp, "p", hp))
    if not s > 1 or not math.isfinite(s):
        raise InvalidInputError(f"Hoelder exponent must be finite and > 1, got {s}")
    e = 2.0 * s + 1.0
    c, y, d = p.c, p.y, p.d
    left = (c ** e + (y - c) ** e) / e
    right = ((d - y) ** e + (1.0 - d) ** e) / e
    return left, right


def identity_lhs(f: FunctionModel, iv: Interval, p: KernelParams,
                 mean_integral: float) -> float:
    """Quadrature-formula side of the identity; ``mean_integral`` is (1/(b-a)) int f."""
    a, b = iv.a, iv.b
    c, y, d = p.c, p.y, p.d
    m = p.node(iv)
    fm, f1m = float(f.eval0(m)), float(f.eval1(m))
    fa, fb = float(f.eval0(a)), float(f.eval0(b))
    f1a, f1b = float(f.eval1(a)), float(f.eval1(b))
    return (0.5 * ((c - y) ** 2 - (d - y) ** 2) * (a - b) * f1m
            + 0.5 * ((d - 1.0) ** 2 * f1a - c * c * f1b) * (a - b)
            + (c - d) * fm
            + ((d - 1.0) * fa - c * fb)
            + mean_integral)


def identity_rhs(f: FunctionModel, iv: Interval, p: KernelParams,
                 cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """(b-a)^2 times the kernel-weighted integral of f'', split at the kink t = y."""
    f.require_domain(iv)
    a, b = iv.a, iv.b
    c, d = p.c, p.d

    def left(t):
        return 0.5 * (c - t) ** 2 * f.eval2(t * a + (1.0 - t) * b)

    def right(t):
        return 0.5 * (d - t) ** 2 * f.eval2(t * a + (1.0 - t) * b)

    total = integrate_callable(left, 0.0, p.y, cfg) + integrate_callable(right, p.y, 1.0, cfg)
    return iv.width ** 2 * total


def verify_identity(f: FunctionModel, iv: Interval, p: KernelParams,
                    mean_integral: float | None = None,
                    cfg: QuadratureConfig = DEFAULT_CONFIG) -> IdentityResidual:
    if mean_integral is None:
        mean_integral = mean_value(f, iv, cfg)
    return IdentityResidual.between(identity_lhs(f, iv, p, mean_integral),
                                    identity_rhs(f, iv, p, cfg))
