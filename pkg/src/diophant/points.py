"""Projective points with exact or numerical coordinates, and effective cycles."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath

from .errors import BadInput, EmptyCycle, UnsupportedField, ZeroVector
from .polycore import DEFAULT_PRECISION, HomogeneousPolynomial

MAX_FIELD_DEGREE = 4


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise BadInput("float coordinates are not exact")
    return Fraction(x)


def _mpc(x):
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return mpmath.mpc(mpmath.mpf(x[0]), mpmath.mpf(x[1]))
    return mpmath.mpc(x)


def poly_roots(coeffs: Sequence[int], prec: int):
    """All complex roots of an integer polynomial (coefficients high to low)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) < 2:
        return []
    with mpmath.workprec(prec + 32):
        return mpmath.polyroots([mpmath.mpf(c) for c in coeffs], maxsteps=400,
                                extraprec=4 * prec)


class ProjectivePoint:
    """A point of P^M.

    Exactly one of three flavours:

    * rational: ``exact`` holds Fraction coordinates;
    * algebraic: the point is [1 : beta] on P^1 with beta a root of the
      primitive integer polynomial ``minpoly`` (high to low), isolated near
      the numerical value;
    * numerical only: just ``coords`` (mpc).
    """

    __slots__ = ("coords", "exact", "minpoly", "precision_bits", "_key")

    def __init__(self, coords, precision_bits: int = DEFAULT_PRECISION, exact=None, minpoly=None):
        if precision_bits < 64:
            raise BadInput("precision must be at least 64 bits")
        with mpmath.workprec(precision_bits):
            cs = tuple(_mpc(c) for c in coords)
            if not cs or all(c == 0 for c in cs):
                raise ZeroVector("projective point with all coordinates zero")
        object.__setattr__(self, "coords", cs)
        object.__setattr__(self, "exact", tuple(exact) if exact is not None else None)
        object.__setattr__(self, "minpoly", tuple(minpoly) if minpoly is not None else None)
        object.__setattr__(self, "precision_bits", precision_bits)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, coords: Sequence, precision_bits: int = DEFAULT_PRECISION) -> "ProjectivePoint":
        ex = [_frac(c) for c in coords]
        if all(c == 0 for c in ex):
            raise ZeroVector("projective point with all coordinates zero")
        return cls(ex, precision_bits, exact=ex)

    @classmethod
    def numeric(cls, coords: Sequence, precision_bits: int = DEFAULT_PRECISION) -> "ProjectivePoint":
        return cls(coords, precision_bits)

    @classmethod
    def algebraic(cls, minpoly: Sequence[int], approx, precision_bits: int = DEFAULT_PRECISION) -> "ProjectivePoint":
        """The point [1 : beta] with beta the root of ``minpoly`` nearest ``approx``."""
        mp = [int(c) for c in minpoly]
        while mp and mp[0] == 0:
            mp.pop(0)
        deg = len(mp) - 1
        if deg < 1:
            raise BadInput("minimal polynomial must have degree >= 1")
        if deg > MAX_FIELD_DEGREE:
            raise UnsupportedField(f"field degree {deg} exceeds {MAX_FIELD_DEGREE}")
        if deg == 1:
            return cls.rational([1, Fraction(-mp[1], mp[0])], precision_bits)
        roots = poly_roots(mp, precision_bits)
        with mpmath.workprec(precision_bits):
            a = _mpc(approx)
            roots.sort(key=lambda r: abs(r - a))
            sep = min(abs(r - s) for i, r in enumerate(roots) for s in roots[i + 1:])
            if abs(roots[0] - a) >= sep / 2:
                raise BadInput("approximation does not isolate a single root")
        return cls([mpmath.mpc(1), roots[0]], precision_bits, minpoly=mp)

    # -- properties ---------------------------------------------------
    @property
    def num_vars(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None or self.minpoly is not None

    @property
    def field_degree(self) -> int:
        return len(self.minpoly) - 1 if self.minpoly is not None else 1

    def conjugates(self) -> list[tuple]:
        """Coordinate vectors of all Galois conjugates (just self if rational)."""
        if self.minpoly is None:
            return [self.coords]
        roots = poly_roots(self.minpoly, self.precision_bits)
        with mpmath.workprec(self.precision_bits):
            # the stored embedding first, the rest in a fixed order
            near = min(range(len(roots)), key=lambda i: abs(roots[i] - self.coords[1]))
            rest = sorted(roots[:near] + roots[near + 1:], key=lambda r: (float(r.real), float(r.imag)))
        return [(mpmath.mpc(1), r) for r in [self.coords[1]] + rest]

    def unit(self):
        """Unit-norm representative as an mpmath column matrix."""
        with mpmath.workprec(self.precision_bits):
            v = mpmath.matrix(list(self.coords))
            return v / mpmath.norm(v)

    def norm(self):
        with mpmath.workprec(self.precision_bits):
            return mpmath.sqrt(sum(abs(c) ** 2 for c in self.coords))

    def sort_key(self):
        if self.exact is not None:
            first = next(c for c in self.exact if c != 0)
            return (0, tuple(c / first for c in self.exact))
        u = self.unit()
        i = max(range(len(u)), key=lambda j: abs(u[j]))
        ph = u[i] / abs(u[i])
        return (1 if self.minpoly is None else 2,
                tuple((round(float((c / ph).real), 12), round(float((c / ph).imag), 12)) for c in u))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.sort_key() == other.sort_key() and self.minpoly == other.minpoly

    def __hash__(self):
        return hash((self.sort_key(), self.minpoly))

    def __repr__(self):
        if self.exact is not None:
            return "[" + ":".join(str(c) for c in self.exact) + "]"
        if self.minpoly is not None:
            return f"[1:root of {list(self.minpoly)} near {mpmath.nstr(self.coords[1], 12)}]"
        return "[" + ":".join(mpmath.nstr(c, 12) for c in self.coords) + "]"

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        digits = max(40, int(self.precision_bits * 0.30103) + 2)
        with mpmath.workprec(self.precision_bits):
            out = {"float": [[mpmath.nstr(c.real, digits), mpmath.nstr(c.imag, digits)] for c in self.coords],
                   "precision": self.precision_bits}
        if self.exact is not None:
            out["exact"] = [str(c) for c in self.exact]
        if self.minpoly is not None:
            out["minpolys"] = [None, list(self.minpoly)]
        return out

    @classmethod
    def from_json(cls, obj) -> "ProjectivePoint":
        try:
            prec = int(obj.get("precision", DEFAULT_PRECISION))
            if "exact" in obj:
                return cls.rational([Fraction(c) for c in obj["exact"]], prec)
            with mpmath.workprec(prec):
                coords = [mpmath.mpc(mpmath.mpf(str(re)), mpmath.mpf(str(im))) for re, im in obj["float"]]
            mps = obj.get("minpolys")
            if mps:
                alg = [i for i, m in enumerate(mps) if m]
                if len(coords) != 2 or alg != [1]:
                    raise UnsupportedField("algebraic points are supported as [1:beta] on P^1 only")
                with mpmath.workprec(prec):
                    beta = coords[1] / coords[0]
                return cls.algebraic(mps[1], beta, prec)
            return cls(coords, prec)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (BadInput, UnsupportedField, ZeroVector)):
                raise
            raise BadInput(f"malformed point JSON: {exc}") from exc


Component = Union[ProjectivePoint, HomogeneousPolynomial]


def component_key(c: Component):
    if isinstance(c, ProjectivePoint):
        return (0, c.sort_key(), c.minpoly or ())
    return (1, str(sorted((k, str(v)) for k, v in c.terms.items())))


@dataclass(frozen=True)
class EffectiveCycle:
    """Nonnegative integer combination of points and hypersurface divisors."""

    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        comps = []
        for m, c in self.components:
            if int(m) != m or m < 1:
                raise BadInput(f"multiplicity must be a positive integer, got {m}")
            if isinstance(c, HomogeneousPolynomial):
                if c.is_zero():
                    raise BadInput("divisor of the zero polynomial")
            elif not isinstance(c, ProjectivePoint):
                raise BadInput(f"unsupported component {c!r}")
            comps.append((int(m), c))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def of(cls, *items) -> "EffectiveCycle":
        """``EffectiveCycle.of(p)`` or ``EffectiveCycle.of((2, p), (1, f))``."""
        comps = [it if isinstance(it, tuple) else (1, it) for it in items]
        return cls(tuple(comps))

    def __bool__(self):
        return bool(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "EffectiveCycle") -> "EffectiveCycle":
        return EffectiveCycle(self.components + other.components)

    def __rmul__(self, m: int) -> "EffectiveCycle":
        return EffectiveCycle(tuple((m * k, c) for k, c in self.components))

    def canonical(self) -> "EffectiveCycle":
        """Merge equal components and sort them."""
        merged: dict = {}
        order = []
        for m, c in self.components:
            k = component_key(c)
            if k not in merged:
                merged[k] = [0, c]
                order.append(k)
            merged[k][0] += m
        return EffectiveCycle(tuple((merged[k][0], merged[k][1]) for k in sorted(order)))

    def points(self):
        return [(m, c) for m, c in self.components if isinstance(c, ProjectivePoint)]

    def divisors(self):
        return [(m, c) for m, c in self.components if isinstance(c, HomogeneousPolynomial)]

    def degree(self) -> int:
        """Geometric degree: field degree for points, form degree for divisors."""
        total = 0
        for m, c in self.components:
            total += m * (c.field_degree if isinstance(c, ProjectivePoint) else c.degree)
        return total

    def require_nonempty(self):
        if not self.components:
            raise EmptyCycle("empty cycle")

    def to_json(self) -> list:
        out = []
        for m, c in self.components:
            key = "point" if isinstance(c, ProjectivePoint) else "divisor"
            out.append({"mult": m, key: c.to_json()})
        return out

    @classmethod
    def from_json(cls, obj: Iterable) -> "EffectiveCycle":
        comps = []
        try:
            for item in obj:
                if "point" in item:
                    comps.append((int(item["mult"]), ProjectivePoint.from_json(item["point"])))
                else:
                    comps.append((int(item["mult"]), HomogeneousPolynomial.from_json(item["divisor"])))
        except (KeyError, TypeError) as exc:
            raise BadInput(f"malformed cycle JSON: {exc}") from exc
        return cls(tuple(comps))
