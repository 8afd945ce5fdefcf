"""Exact homogeneous polynomials over Q and their three norms.

Coefficients are :class:`fractions.Fraction`; numerical work goes through
mpmath at a configurable binary precision (default 256 bits) or through the
batched kernels in :mod:`diophant.kernels` for Monte Carlo and multi-start
searches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

from . import kernels
from .errors import BadInput, ZeroPolynomial

DEFAULT_PRECISION = 256

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class NormValue:
    """A norm-type value with an error radius (statistical or rounding)."""

    value: float
    error_radius: float = 0.0

    def __post_init__(self):
        if self.error_radius < 0 or not math.isfinite(self.value):
            raise ValueError(f"invalid NormValue {self.value} +- {self.error_radius}")

    def log(self) -> float:
        return math.log(self.value)

    def log_radius(self) -> float:
        """Error radius transported to log scale (first order, conservative)."""
        if self.error_radius >= self.value:
            return math.inf
        return math.log(self.value) - math.log(self.value - self.error_radius)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise BadInput("float coefficients are not exact; pass int, str or Fraction")
    return Fraction(c)


def monomials(num_vars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total ``degree`` in ``num_vars`` variables, lex sorted."""
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        e = [0] * num_vars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


class HomogeneousPolynomial:
    """Homogeneous form in ``num_vars`` variables with rational coefficients.

    Instances are immutable. The zero form keeps a declared degree so that
    degree bookkeeping (``deg fg = deg f + deg g``) stays total.
    """

    __slots__ = ("num_vars", "degree", "_terms", "__dict__")

    def __init__(self, num_vars: int, degree: int, terms: Mapping[Exponent, object] = ()):
        if num_vars < 1 or degree < 0:
            raise BadInput(f"need num_vars >= 1 and degree >= 0, got {num_vars}, {degree}")
        clean: dict[Exponent, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp) or sum(exp) != degree:
                raise BadInput(f"exponent {exp} does not fit ({num_vars} vars, degree {degree})")
            c = _as_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        if name in ("num_vars", "degree", "_terms"):
            raise AttributeError("HomogeneousPolynomial is immutable")
        object.__setattr__(self, name, value)

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, num_vars: int, degree: int = 0) -> "HomogeneousPolynomial":
        return cls(num_vars, degree, {})

    @classmethod
    def constant(cls, num_vars: int, c=1) -> "HomogeneousPolynomial":
        return cls(num_vars, 0, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, num_vars: int, i: int) -> "HomogeneousPolynomial":
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, 1, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> "HomogeneousPolynomial":
        return cls(len(exp), sum(exp), {tuple(exp): c})

    @classmethod
    def parse(cls, text: str, num_vars: int) -> "HomogeneousPolynomial":
        """Parse an expression in ``x0, x1, ...`` (``^`` or ``**`` for powers)."""
        import sympy

        syms = sympy.symbols(f"x0:{num_vars}")
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals={str(s): s for s in syms})
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise BadInput(f"cannot parse polynomial {text!r}") from exc
        return cls.from_sympy(expr, num_vars)

    @classmethod
    def from_sympy(cls, expr, num_vars: int) -> "HomogeneousPolynomial":
        import sympy

        syms = sympy.symbols(f"x0:{num_vars}")
        poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
        terms = {}
        degree = None
        for exp, c in poly.terms():
            d = sum(exp)
            if degree is None:
                degree = d
            elif d != degree:
                raise BadInput(f"{expr} is not homogeneous")
            terms[exp] = Fraction(int(c.numerator), int(c.denominator))
        return cls(num_vars, degree or 0, terms)

    def to_sympy(self):
        import sympy

        syms = sympy.symbols(f"x0:{self.num_vars}")
        expr = sympy.Integer(0)
        for exp, c in self._terms.items():
            m = sympy.Rational(c.numerator, c.denominator)
            for s, e in zip(syms, exp):
                m *= s**e
            expr += m
        return expr

    # -- basic accessors ----------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def involved_vars(self) -> set[int]:
        return {i for exp in self._terms for i, e in enumerate(exp) if e}

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        if self.num_vars != other.num_vars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, self.degree, tuple(sorted(self._terms.items()))))

    def __repr__(self):
        return f"HomogeneousPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items(), reverse=True):
            mon = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exp) if e)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "HomogeneousPolynomial"):
        if self.num_vars != other.num_vars:
            raise BadInput("polynomials live in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            if other == 0:
                return self
            other = HomogeneousPolynomial.constant(self.num_vars, other)
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise BadInput(f"cannot add forms of degree {self.degree} and {other.degree}")
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + c
        return HomogeneousPolynomial(self.num_vars, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return HomogeneousPolynomial(self.num_vars, self.degree,
                                     {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "HomogeneousPolynomial":
        c = _as_fraction(c)
        return HomogeneousPolynomial(self.num_vars, self.degree,
                                     {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return self.scale(other)
        return poly_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise BadInput("negative powers are not polynomials")
        result = HomogeneousPolynomial.constant(self.num_vars, 1)
        base = self
        while n:
            if n & 1:
                result = poly_mul(result, base)
            n >>= 1
            if n:
                base = poly_mul(base, base)
        return result

    def diff(self, i: int) -> "HomogeneousPolynomial":
        """Partial derivative with respect to ``x_i``."""
        terms = {}
        for exp, c in self._terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                terms[tuple(e)] = c * exp[i]
        return HomogeneousPolynomial(self.num_vars, max(self.degree - 1, 0), terms)

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive in Z[x]."""
        if self.is_zero():
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        """Leading term in lex order with x_M > x_{M-1} > ... > x_0."""
        exp = max(self._terms, key=lambda e: e[::-1])
        return exp, self._terms[exp]

    def primitive(self) -> "HomogeneousPolynomial":
        """Primitive integral form with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self.scale(1 / c)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def embed(self, num_vars: int, positions: Sequence[int]) -> "HomogeneousPolynomial":
        """Rename variable i to ``positions[i]`` inside ``num_vars`` variables."""
        terms = {}
        for exp, c in self._terms.items():
            e = [0] * num_vars
            for i, p in enumerate(positions):
                e[p] += exp[i]
            terms[tuple(e)] = c
        return HomogeneousPolynomial(num_vars, self.degree, terms)

    def substitute(self, forms: Sequence["HomogeneousPolynomial"]) -> "HomogeneousPolynomial":
        """Compose with x_i -> forms[i]; all forms must share one degree."""
        if len(forms) != self.num_vars:
            raise BadInput("need one form per variable")
        nv = forms[0].num_vars
        d = forms[0].degree
        out = HomogeneousPolynomial.zero(nv, self.degree * d)
        cache: dict[tuple[int, int], HomogeneousPolynomial] = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = forms[i] ** e
            return cache[(i, e)]

        for exp, c in self._terms.items():
            m = HomogeneousPolynomial.constant(nv, c)
            for i, e in enumerate(exp):
                if e:
                    m = poly_mul(m, power(i, e))
            out = out + m
        if out.is_zero():
            return HomogeneousPolynomial.zero(nv, self.degree * d)
        return out

    # -- evaluation ---------------------------------------------------
    def __call__(self, point: Sequence) -> object:
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        """Evaluate at ``point``; exact for Fraction/int input, mpmath otherwise."""
        if len(point) != self.num_vars:
            raise BadInput("point has the wrong number of coordinates")
        exact = all(isinstance(p, (int, Fraction)) for p in point)
        zero = Fraction(0) if exact else mpmath.mpf(0)
        pw = [[1 if exact else mpmath.mpf(1)] for _ in point]
        total = zero
        for exp, c in self._terms.items():
            m = c if exact else mpmath.mpf(c.numerator) / c.denominator
            for i, e in enumerate(exp):
                if e:
                    while len(pw[i]) <= e:
                        pw[i].append(pw[i][-1] * point[i])
                    m = m * pw[i][e]
            total = total + m
        return total

    @cached_property
    def _arrays(self):
        if not self._terms:
            return np.zeros((0, self.num_vars), dtype=np.int64), np.zeros(0, dtype=np.complex128), 0.0
        exps = np.array(list(self._terms), dtype=np.int64)
        vals = list(self._terms.values())
        # rescale so float coefficients stay O(1); log of the scale kept apart
        big = max(abs(v) for v in vals)
        log_scale = _log_fraction(big)
        coeffs = np.array([float(v / big) for v in vals], dtype=np.complex128)
        return exps, coeffs, log_scale

    def eval_batch(self, pts: np.ndarray) -> np.ndarray:
        """Float evaluation at rows of ``pts`` (complex128), via the kernels."""
        exps, coeffs, log_scale = self._arrays
        return kernels.poly_eval(exps, coeffs, np.ascontiguousarray(pts, dtype=np.complex128)) * math.exp(log_scale)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": self.num_vars,
            "degree": self.degree,
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "HomogeneousPolynomial":
        try:
            terms = {tuple(t["exp"]): Fraction(int(t["num"]), int(t.get("den", "1")))
                     for t in obj["terms"]}
            return cls(int(obj["vars"]), int(obj["degree"]), terms)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, BadInput):
                raise
            raise BadInput(f"malformed polynomial JSON: {exc}") from exc


def _log_fraction(q: Fraction) -> float:
    q = abs(q)
    return (math.log(q.numerator) if q.numerator < 2**1000 else float(mpmath.log(q.numerator))) - \
        (math.log(q.denominator) if q.denominator < 2**1000 else float(mpmath.log(q.denominator)))


def poly_mul(f: HomogeneousPolynomial, g: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Exact product; ``deg fg = deg f + deg g`` also when a factor is zero."""
    f._check(g)
    terms: dict[Exponent, Fraction] = {}
    for ea, ca in f._terms.items():
        for eb, cb in g._terms.items():
            e = tuple(a + b for a, b in zip(ea, eb))
            terms[e] = terms.get(e, Fraction(0)) + ca * cb
    return HomogeneousPolynomial(f.num_vars, f.degree + g.degree, terms)


def poly_prod(factors: Iterable[HomogeneousPolynomial], num_vars: int) -> HomogeneousPolynomial:
    out = HomogeneousPolynomial.constant(num_vars, 1)
    for f in factors:
        out = poly_mul(out, f)
    return out


# ---------------------------------------------------------------------------
# norms


def l2_norm_squared(f: HomogeneousPolynomial) -> Fraction:
    """Exact squared L2 norm over P^M with the normalized Fubini-Study measure.

    Monomials are orthogonal with |x^a|^2 = M! prod(a_i!) / (D + M)!.
    """
    if f.is_zero():
        raise ZeroPolynomial("L2 norm of the zero polynomial")
    M = f.num_vars - 1
    denom = math.factorial(f.degree + M)
    mfact = math.factorial(M)
    total = Fraction(0)
    for exp, c in f._terms.items():
        w = mfact
        for e in exp:
            w *= math.factorial(e)
        total += c * c * Fraction(w, denom)
    return total


def l2_norm(f: HomogeneousPolynomial) -> NormValue:
    sq = l2_norm_squared(f)
    return NormValue(float(mpmath.sqrt(mpmath.mpf(sq.numerator) / sq.denominator)), 0.0)


def log_l2_norm(f: HomogeneousPolynomial) -> float:
    """log of the L2 norm, computed without float overflow."""
    return 0.5 * _log_fraction(l2_norm_squared(f))


def log_binomial(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def harmonic(n: int) -> float:
    return sum(1.0 / m for m in range(1, n + 1))


def _sphere_samples(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sup_norm(f: HomogeneousPolynomial, seed: int = 0, starts: int = 48,
             steps: int = 300) -> NormValue:
    """Estimate sup |f(x)| over the unit sphere by multi-start projected ascent.

    The error radius is the gap between the best value and the mean of the
    five best end points; it is zero when the top starts agree.
    """
    if f.is_zero():
        raise ZeroPolynomial("sup norm of the zero polynomial")
    exps, coeffs, log_scale = f._arrays
    n = f.num_vars
    if f.degree == 0:
        return NormValue(abs(float(next(iter(f._terms.values())))), 0.0)
    rng = np.random.default_rng(seed)
    probe = _sphere_samples(rng, 4096, n)
    vals = np.abs(kernels.poly_eval(exps, coeffs, probe))
    top = probe[np.argsort(vals)[-starts:]]
    x = np.vstack([top, np.eye(n, dtype=np.complex128)])
    fx, grad = kernels.poly_eval_grad(exps, coeffs, x)
    cur = np.abs(fx)
    step = np.full(x.shape[0], 0.5)
    for _ in range(steps):
        # steepest ascent of |f|^2 in C^n is f * conj(grad f)
        g = fx[:, None] * grad.conj()
        g = g - x * np.einsum("ij,ij->i", x.conj(), g)[:, None]
        gn = np.linalg.norm(g, axis=1)
        active = gn > 1e-15 * np.maximum(cur, 1e-300) ** 2
        if not active.any():
            break
        d = np.where(active[:, None], g / np.where(gn > 0, gn, 1.0)[:, None], 0)
        trial = x + step[:, None] * d
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        ft, gt = kernels.poly_eval_grad(exps, coeffs, trial)
        better = (np.abs(ft) > cur) & active
        x = np.where(better[:, None], trial, x)
        fx = np.where(better, ft, fx)
        grad = np.where(better[:, None], gt, grad)
        cur = np.where(better, np.abs(ft), cur)
        step = np.where(better, np.minimum(step * 1.5, 1.0), step * 0.5)
        if step.max() < 1e-12:
            break
    order = np.sort(cur)[::-1]
    best = float(order[0])
    radius = float(best - order[:5].mean())
    scale = math.exp(log_scale)
    return NormValue(best * scale, max(radius, 0.0) * scale)


def mahler_integral(f: HomogeneousPolynomial, seed: int = 0, samples: int = 40000,
                    block: int = 4096) -> NormValue:
    """Monte Carlo estimate of the integral of log(|f(x)|/|x|^D) over P^M.

    Points are drawn uniformly from the unit sphere of C^{M+1}, whose image is
    the Fubini-Study probability measure. Returns the mean with a 3-sigma
    radius; the result is bitwise reproducible for fixed (seed, samples, block).
    """
    if f.is_zero():
        raise ZeroPolynomial("Mahler integral of the zero polynomial")
    exps, coeffs, log_scale = f._arrays
    if f.degree == 0:
        return NormValue(log_scale + math.log(abs(coeffs[0])), 0.0)
    rng = np.random.default_rng(seed)
    total = total2 = 0.0
    count = 0
    for lo in range(0, samples, block):
        b = min(block, samples - lo)
        pts = _sphere_samples(rng, b, f.num_vars)
        s, s2, zeros = kernels.log_abs_sums(exps, coeffs, pts)
        total += s
        total2 += s2
        count += b - zeros
    mean = total / count
    var = max(total2 / count - mean * mean, 0.0)
    return NormValue(mean + log_scale, 3.0 * math.sqrt(var / count))


def polprod_bounds(f: HomogeneousPolynomial, g: HomogeneousPolynomial, c1: float, c2: float) -> dict:
    """Both sides of the product estimate for log l2(fg) with constants c1, c2.

    lower: log|f| + log|g| - c2 log(2 D D')
    upper: log|f| + log|g| + c1 (D + D') + log C(D + D' + t, t)
    with D, D' read as at least 1 inside the logarithm.
    """
    if f.num_vars != g.num_vars:
        raise BadInput("factors live in different spaces")
    t = f.num_vars - 1
    D, E = f.degree, g.degree
    base = log_l2_norm(f) + log_l2_norm(g)
    mid = log_l2_norm(poly_mul(f, g))
    lower = base - c2 * math.log(2 * max(D, 1) * max(E, 1))
    upper = base + c1 * (D + E) + log_binomial(D + E + t, t)
    return {"lower": lower, "value": mid, "upper": upper,
            "lower_ok": lower <= mid + 1e-12, "upper_ok": mid <= upper + 1e-12,
            "needed_c2": (base - mid) / math.log(2 * max(D, 1) * max(E, 1)),
            "needed_c1": (mid - base - log_binomial(D + E + t, t)) / max(D + E, 1)}


def normrel_sandwich(f: HomogeneousPolynomial, seed: int = 0, samples: int = 40000) -> dict:
    """log|f|_sup - (D/2) H_M <= int log|f| <= log|f|_L2 <= log|f|_sup, radii allowed.

    H_M is the harmonic number sum_{m <= M} 1/m. The sup-norm spread enters
    on the log scale; the integral carries its 3-sigma radius.
    """
    if f.is_zero():
        raise ZeroPolynomial("norms of the zero polynomial")
    M = f.num_vars - 1
    sup = sup_norm(f, seed=seed)
    mah = mahler_integral(f, seed=seed, samples=samples)
    l2 = log_l2_norm(f)
    ls, rs = sup.log(), sup.log_radius()
    lower = ls - 0.5 * f.degree * harmonic(M)
    checks = {
        "lower": lower - rs <= mah.value + mah.error_radius,
        "middle": mah.value - mah.error_radius <= l2,
        "upper": l2 <= ls + rs + 1e-12,
    }
    return {"log_sup": ls, "log_sup_radius": rs, "lower": lower, "mahler": mah.value,
            "mahler_radius": mah.error_radius, "log_l2": l2, "checks": checks,
            "ok": all(checks.values())}
