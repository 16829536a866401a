"""Integrand models with exact derivatives and the convex-|f''| hypothesis check.

All callables accept floats or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidInputError

RealFn = Callable[[object], object]


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidInputError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise InvalidInputError(f"interval needs a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def split(self, n: int) -> np.ndarray:
        """Return the n + 1 nodes of a uniform partition."""
        nodes = self.a + self.width * (np.arange(n + 1) / n)
        nodes[-1] = self.b
        return nodes


@dataclass(frozen=True)
class FunctionModel:
    """A twice differentiable scalar function with closed-form derivatives.

    ``domain_min`` is an exclusive lower bound on admissible arguments
    (``None`` for functions defined on the whole line).  ``primitive`` is an
    optional closed-form antiderivative used as an independent integral oracle.
    """

    name: str
    eval0: RealFn
    eval1: RealFn
    eval2: RealFn
    domain_min: Optional[float] = None
    primitive: Optional[RealFn] = field(default=None, compare=False)

    def admits(self, iv: Interval) -> bool:
        return self.domain_min is None or iv.a > self.domain_min

    def require_domain(self, iv: Interval) -> None:
        if not self.admits(iv):
            raise InvalidInputError(
                f"{self.name} is only defined for x > {self.domain_min}; "
                f"got [{iv.a}, {iv.b}]")

    def exact_integral(self, iv: Interval) -> Optional[float]:
        if self.primitive is None:
            return None
        self.require_domain(iv)
        return float(self.primitive(iv.b) - self.primitive(iv.a))


@dataclass(frozen=True)
class PolynomialFunction:
    """Polynomial sum_k coefficients[k] * (x - center)**k.

    Derivatives and antiderivatives act on the coefficient list, so they
    are exact up to the rounding of one multiplication per coefficient.
    """

    coefficients: tuple
    center: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "center", float(self.center))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        s = np.asarray(x, dtype=float) - self.center
        acc = np.zeros_like(s)
        for c in reversed(self.coefficients):
            acc = acc * s + c
        return acc if acc.ndim else float(acc)

    def derivative(self) -> "PolynomialFunction":
        cs = self.coefficients
        return PolynomialFunction(tuple(k * cs[k] for k in range(1, len(cs))) or (0.0,),
                                  self.center)

    def antiderivative(self) -> "PolynomialFunction":
        cs = self.coefficients
        return PolynomialFunction((0.0,) + tuple(c / (k + 1) for k, c in enumerate(cs)),
                                  self.center)

    def _aligned(self, other: "PolynomialFunction"):
        if self.center != other.center:
            raise InvalidInputError("polynomials with different centers cannot be combined")

    def __add__(self, other: "PolynomialFunction") -> "PolynomialFunction":
        self._aligned(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0.0,) * (n - len(self.coefficients))
        b = other.coefficients + (0.0,) * (n - len(other.coefficients))
        return PolynomialFunction(tuple(x + y for x, y in zip(a, b)), self.center)

    def __mul__(self, other: "PolynomialFunction") -> "PolynomialFunction":
        self._aligned(other)
        out = [0.0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            for j, y in enumerate(other.coefficients):
                out[i + j] += x * y
        return PolynomialFunction(tuple(out), self.center)

    def descriptor(self) -> str:
        body = ",".join(repr(c) for c in self.coefficients)
        if self.center == 0.0:
            return f"poly:{body}"
        return f"poly@{self.center!r}:{body}"

    def model(self, name: Optional[str] = None) -> FunctionModel:
        d1 = self.derivative()
        d2 = d1.derivative()
        return FunctionModel(name or self.descriptor(), self, d1, d2,
                             primitive=self.antiderivative())


# --------------------------------------------------------------------------
# Catalog

def _power(n: int) -> FunctionModel:
    coeffs = [0.0] * n + [1.0]
    return PolynomialFunction(tuple(coeffs)).model(f"pow:{n}")


def _xlogx(x):
    return x * np.log(x)


def _xlogx_primitive(x):
    return 0.5 * x * x * np.log(x) - 0.25 * x * x


RECIPROCAL = FunctionModel(
    "recip",
    lambda x: 1.0 / x,
    lambda x: -1.0 / (x * x),
    lambda x: 2.0 / (x * x * x),
    domain_min=0.0,
    primitive=np.log,
)

EXP = FunctionModel("exp", np.exp, np.exp, np.exp, primitive=np.exp)

NEGLOG = FunctionModel(
    "neglog",
    lambda x: -np.log(x),
    lambda x: -1.0 / x,
    lambda x: 1.0 / (x * x),
    domain_min=0.0,
    primitive=lambda x: x - x * np.log(x),
)

XLOGX = FunctionModel(
    "xlogx",
    _xlogx,
    lambda x: np.log(x) + 1.0,
    lambda x: 1.0 / x,
    domain_min=0.0,
    primitive=_xlogx_primitive,
)


def builtin_catalog() -> list[FunctionModel]:
    return [_power(n) for n in range(2, 7)] + [RECIPROCAL, EXP, NEGLOG, XLOGX]


def get_function(name: str) -> FunctionModel:
    """Resolve a catalog name, ``pow:N`` or ``poly:c0,c1,...``."""
    name = name.strip()
    named = {f.name: f for f in (RECIPROCAL, EXP, NEGLOG, XLOGX)}
    if name in named:
        return named[name]
    if name.startswith("pow:"):
        try:
            n = int(name[4:])
        except ValueError:
            raise InvalidInputError(f"bad exponent in {name!r}") from None
        if n < 0:
            raise InvalidInputError("pow:N needs N >= 0")
        return _power(n)
    if name.startswith("poly:"):
        try:
            coeffs = tuple(float(c) for c in name[5:].split(",") if c.strip())
        except ValueError:
            raise InvalidInputError(f"bad coefficient list in {name!r}") from None
        if not coeffs:
            raise InvalidInputError("poly: needs at least one coefficient")
        return PolynomialFunction(coeffs).model(name)
    raise InvalidInputError(
        f"unknown function {name!r}; expected one of {sorted(named)}, pow:N or poly:c0,c1,...")


# --------------------------------------------------------------------------
# Convexity of |f''|^q

@dataclass(frozen=True)
class ConvexityReport:
    exponent_q: float
    grid_size: int
    max_violation: float
    is_satisfied: bool
    tolerance: float
    witness: Optional[tuple] = None


def check_abs_f2_convexity(f: FunctionModel, iv: Interval, q: float = 1.0,
                           grid_n: int = 65, tol: float = 1e-12) -> ConvexityReport:
    """Midpoint-convexity test of |f''|^q over all grid pairs on ``iv``.

    The slack of a pair (u, v) is (g(u) + g(v))/2 - g((u+v)/2) with
    g = |f''|^q; ``max_violation`` is the smallest slack seen.  The absolute
    tolerance is scaled by max(1, max g) so large-magnitude integrands are not
    rejected on rounding noise.
    """
    if grid_n < 3:
        raise InvalidInputError("grid_n must be at least 3")
    if not q >= 1:
        raise InvalidInputError(f"exponent q must be >= 1, got {q}")
    f.require_domain(iv)

    x = np.linspace(iv.a, iv.b, grid_n)
    i, j = np.triu_indices(grid_n, k=1)
    gx = np.abs(np.asarray(f.eval2(x), dtype=float)) ** q
    gm = np.abs(np.asarray(f.eval2(0.5 * (x[i] + x[j])), dtype=float)) ** q
    slack = 0.5 * (gx[i] + gx[j]) - gm

    k = int(np.argmin(slack))
    worst = float(slack[k])
    scale = max(1.0, float(np.max(gx)), float(np.max(gm)))
    tolerance = tol * scale
    ok = worst >= -tolerance
    witness = None if ok else (float(x[i[k]]), float(x[j[k]]))
    return ConvexityReport(float(q), grid_n, worst, ok, tolerance, witness)


def sample_points(f: FunctionModel, n: int, rng: np.random.Generator,
                  low: float = -3.0, high: float = 3.0) -> np.ndarray:
    """Draw n admissible points for finite-difference consistency checks."""
    if f.domain_min is not None:
        low = max(low, f.domain_min + 0.1)
    return rng.uniform(low, high, size=n)


def finite_difference_gap(fn: RealFn, dfn: RealFn, xs: Sequence[float]) -> float:
    """Largest |dfn(x) - central difference| / (1 + |dfn(x)|) over ``xs``."""
    worst = 0.0
    for x in xs:
        h = 1e-5 * (1.0 + abs(x))
        fd = (fn(x + h) - fn(x - h)) / (2.0 * h)
        exact = float(dfn(x))
        worst = max(worst, abs(exact - fd) / (1.0 + abs(exact)))
    return worst
