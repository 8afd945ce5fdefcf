"""Heights of points, divisors and cycles under one fixed L2 convention.

Point heights use the L2-Weil normalization: for a primitive integer vector
a, h([a]) = log ||a||_2. The height of P^M is taken to be

    sigma_M = sum_{k=1}^{M} sum_{m=1}^{k} 1/(2m),

and a hypersurface has h(div f) = int log|f| + D * sigma_M.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import NoExactCoords, PointOnDivisor, UnsupportedField, ZeroPolynomial
from .points import MAX_FIELD_DEGREE, EffectiveCycle, ProjectivePoint
from .polycore import HomogeneousPolynomial, log_l2_norm, mahler_integral

L2_WEIL = "l2-weil"
DIVISOR_INTEGRAL = "divisor-integral"


@dataclass(frozen=True)
class HeightValue:
    value: float
    convention: str = L2_WEIL
    error_radius: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value) or self.error_radius < 0:
            raise ValueError(f"invalid height {self.value} +- {self.error_radius}")

    def __add__(self, other: "HeightValue") -> "HeightValue":
        return HeightValue(self.value + other.value, _merge(self.convention, other.convention),
                           self.error_radius + other.error_radius)

    def scale(self, m: float) -> "HeightValue":
        return HeightValue(m * self.value, self.convention, abs(m) * self.error_radius)

    def to_json(self) -> dict:
        return {"value": self.value, "convention": self.convention, "error": self.error_radius}


def _merge(a: str, b: str) -> str:
    parts = sorted(set(a.split("+")) | set(b.split("+")))
    return "+".join(parts)


def sigma(M: int) -> float:
    """The constant sigma_M used as h(P^M)."""
    return sum(1.0 / (2 * m) for k in range(1, M + 1) for m in range(1, k + 1))


def _log_int(n: int) -> float:
    return float(mpmath.log(n)) if n > 2**1000 else math.log(n)


def primitive_integer_vector(coords) -> list[int]:
    coords = [Fraction(c) for c in coords]
    den = 1
    for c in coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coords]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def point_height(alpha: ProjectivePoint) -> HeightValue:
    """Absolute L2-Weil height (normalized by the field degree)."""
    if alpha.exact is not None:
        a = primitive_integer_vector(alpha.exact)
        return HeightValue(0.5 * _log_int(sum(v * v for v in a)), L2_WEIL)
    if alpha.minpoly is not None:
        d = alpha.field_degree
        if d > MAX_FIELD_DEGREE:
            raise UnsupportedField(f"field degree {d} exceeds {MAX_FIELD_DEGREE}")
        return HeightValue(_algebraic_cycle_height(alpha) / d, L2_WEIL)
    raise NoExactCoords("height needs exact or algebraic coordinates")


def _algebraic_cycle_height(alpha: ProjectivePoint) -> float:
    # finite places contribute log|leading coefficient| for a primitive minpoly
    lead = abs(alpha.minpoly[0])
    with mpmath.workprec(alpha.precision_bits):
        arch = sum(mpmath.log(mpmath.sqrt(1 + abs(c[1]) ** 2)) for c in alpha.conjugates())
    return _log_int(lead) + float(arch)


def point_cycle_height(alpha: ProjectivePoint) -> HeightValue:
    """Height of the closed point as a zero-cycle: degree times point_height."""
    return point_height(alpha).scale(alpha.field_degree)


def divisor_height(f: HomogeneousPolynomial, seed: int = 0, samples: int = 40000) -> HeightValue:
    if f.is_zero():
        raise ZeroPolynomial("divisor of the zero polynomial")
    m = mahler_integral(f, seed=seed, samples=samples)
    return HeightValue(m.value + f.degree * sigma(f.num_vars - 1), DIVISOR_INTEGRAL, m.error_radius)


def component_height(c, seed: int = 0) -> HeightValue:
    if isinstance(c, ProjectivePoint):
        return point_cycle_height(c)
    return divisor_height(c, seed=seed)


def cycle_height(Z: EffectiveCycle, seed: int = 0) -> HeightValue:
    total = HeightValue(0.0, L2_WEIL)
    first = True
    for m, c in Z:
        h = component_height(c, seed=seed).scale(m)
        if first:
            total = h
            first = False
        else:
            total = total + h
    return total


@dataclass(frozen=True)
class LiouvilleReport:
    lhs: float
    rhs: float
    margin: float
    holds: bool

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "holds": self.holds}


def _vanishes_exactly(f: HomogeneousPolynomial, alpha: ProjectivePoint) -> bool:
    if alpha.exact is not None:
        return f.evaluate(list(alpha.exact)) == 0
    # [1:beta]: f(1, x) is divisible by the minimal polynomial
    import sympy

    x = sympy.Symbol("x")
    fx = sympy.Poly(f.to_sympy().subs({sympy.Symbol("x0"): 1, sympy.Symbol("x1"): x}), x)
    mp = sympy.Poly(list(alpha.minpoly), x)
    return fx.is_zero or fx.rem(mp).is_zero


def liouville_check(f: HomogeneousPolynomial, alpha: ProjectivePoint, d: float) -> LiouvilleReport:
    """Compare D(div f, alpha) with -D h(alpha) - deg(alpha) log|f| - d D deg(alpha).

    D(div f, alpha) sums log(|f(a)| / (|f| ||a||^D)) over the conjugates a of
    alpha, h(alpha) is the height of the closed point as a cycle and |f| is
    the L2 norm of the primitive integral multiple of f.
    """
    if f.is_zero():
        raise ZeroPolynomial("Liouville check of the zero polynomial")
    if not alpha.is_exact:
        raise NoExactCoords("Liouville check needs an exact point")
    if alpha.field_degree > MAX_FIELD_DEGREE:
        raise UnsupportedField(f"field degree {alpha.field_degree} exceeds {MAX_FIELD_DEGREE}")
    if f.num_vars != alpha.num_vars:
        raise ValueError("polynomial and point live in different spaces")
    if _vanishes_exactly(f, alpha):
        raise PointOnDivisor("alpha lies on div f")
    D = f.degree
    deg_a = alpha.field_degree
    log_norm = log_l2_norm(f)
    with mpmath.workprec(alpha.precision_bits):
        lhs = mpmath.mpf(0)
        for conj in alpha.conjugates():
            val = f.evaluate(list(conj))
            nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in conj))
            lhs += mpmath.log(abs(val)) - D * mpmath.log(nrm)
        lhs = float(lhs) - deg_a * log_norm
    h = point_cycle_height(alpha).value
    rhs = -D * h - deg_a * log_l2_norm(f.primitive()) - d * D * deg_a
    margin = lhs - rhs
    return LiouvilleReport(lhs, rhs, margin, margin >= -1e-9)
