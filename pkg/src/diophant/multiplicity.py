"""Orders of vanishing and intersection multiplicities at desk scale."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import mpmath
import numpy as np

from .derivations import (VarietyPresentation, build_derivation_data, exact_affine_derivative,
                          multi_indices, sample_points, taylor_on_variety)
from .errors import (BadInput, CommonComponent, EmptyCycle, ImproperIntersection, NoExactCoords,
                     NonIsolatedPoint, RestrictionZero, SearchExhausted, SingularPoint,
                     UnverifiedVanishing, ZeroPolynomial)
from .heights import component_height
from .points import EffectiveCycle, ProjectivePoint, component_key
from .polycore import HomogeneousPolynomial

TAYLOR = "taylor"
RESULTANT = "resultant-valuation"
SUBSPACE_MIN = "generic-subspace-min"

FRAMES = 5
MAX_RETRIES = 10


@dataclass(frozen=True)
class MultiplicityReport:
    order: int
    method: str
    subspace_trials: int = 0

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("negative order")
        if self.method == SUBSPACE_MIN and self.subspace_trials < FRAMES:
            raise ValueError("generic subspace minimum needs at least 5 trials")

    def to_json(self) -> dict:
        return {"order": self.order, "method": self.method, "trials": self.subspace_trials}


def _nonzero_index(coords) -> int:
    return max(range(len(coords)), key=lambda i: abs(coords[i]))


def vanishing_order(f: HomogeneousPolynomial, y: ProjectivePoint) -> MultiplicityReport:
    """Lowest total degree of a nonzero Taylor coefficient of f at y.

    Exact for rational y (translation chart, exact partials); for numerical
    points the Taylor coefficients of the unitary chart are thresholded at
    2^(-precision/2) relative to |f|.
    """
    if f.is_zero():
        raise ZeroPolynomial("order of vanishing of zero")
    if f.num_vars != y.num_vars:
        raise BadInput("polynomial and point live in different spaces")
    if y.exact is not None:
        pt = list(y.exact)
        i = _nonzero_index(pt)
        others = [j for j in range(f.num_vars) if j != i]
        level = [f]
        for s in range(f.degree + 1):
            if any(g.evaluate(pt) != 0 for g in level):
                return MultiplicityReport(s, TAYLOR)
            nxt = {}
            for g in level:
                for j in others:
                    d = g.diff(j)
                    if not d.is_zero():
                        nxt[d] = None
            level = list(nxt)
            if not level:
                break
        raise ZeroPolynomial("f vanishes identically near y")
    from .metric import Chart, taylor_coefficients
    from .polycore import log_l2_norm

    chart = Chart.at(y)
    coeffs = taylor_coefficients(f, chart, f.degree)
    with mpmath.workprec(y.precision_bits):
        thr = mpmath.mpf(2) ** (-y.precision_bits // 2) * mpmath.e ** log_l2_norm(f)
        for s in range(f.degree + 1):
            if any(abs(c) > thr for J, c in coeffs.items() if sum(J) == s):
                return MultiplicityReport(s, TAYLOR)
    raise ZeroPolynomial("f vanishes identically near y")


# ---------------------------------------------------------------------------
# plane curves


def _sym():
    import sympy

    return sympy.symbols("x0:3")


def _transform(f: HomogeneousPolynomial, A) -> HomogeneousPolynomial:
    """f(A x) for an integer 3x3 matrix A."""
    n = f.num_vars
    forms = []
    for i in range(n):
        terms = {}
        for j in range(n):
            if A[i][j]:
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = A[i][j]
        forms.append(HomogeneousPolynomial(n, 1, terms))
    return f.substitute(forms)


def _solve3(A, y):
    import sympy

    m = sympy.Matrix(A)
    sol = m.LUsolve(sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in y]))
    return [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol]


def _resultant_valuation(f, g, y, A):
    """Valuation of Res_{x2}(f∘A, g∘A) at the image of y, or None if degenerate."""
    import sympy

    x0, x1, x2 = _sym()
    ft, gt = _transform(f, A), _transform(g, A)
    # the projection center [0:0:1] must lie on neither curve
    if ft.evaluate([0, 0, 1]) == 0 or gt.evaluate([0, 0, 1]) == 0:
        return None
    yp = _solve3(A, y)
    if yp[0] == 0:
        return None
    b = yp[1] / yp[0]
    fe = sympy.Poly(ft.to_sympy().subs(x0, 1), x1, x2)
    ge = sympy.Poly(gt.to_sympy().subs(x0, 1), x1, x2)
    r = sympy.Poly(sympy.resultant(fe.as_expr(), ge.as_expr(), x2), x1)
    if r.is_zero:
        return None
    root = sympy.Rational(b.numerator, b.denominator)
    lin = sympy.Poly(x1 - root, x1)
    v = 0
    while True:
        q, rem = r.div(lin)
        if not rem.is_zero:
            return v
        r = q
        v += 1


def _common_factor(f, g) -> bool:
    import sympy

    h = sympy.gcd(f.to_sympy(), g.to_sympy())
    return sympy.Poly(h, *_sym()).total_degree() > 0


def intersection_multiplicity_plane(f: HomogeneousPolynomial, g: HomogeneousPolynomial,
                                    y: ProjectivePoint, seed: int = 0,
                                    frames: int = FRAMES) -> MultiplicityReport:
    """Local intersection multiplicity of two plane curves at a rational point.

    In a random integer frame the resultant with respect to x2 has a root at
    the image of y whose multiplicity is the sum of the intersection
    multiplicities on the line joining y to the projection center; it equals
    the local multiplicity when that line meets the curves nowhere else. The
    minimum over several frames is returned.
    """
    if f.num_vars != 3 or g.num_vars != 3 or y.num_vars != 3:
        raise BadInput("plane curves live in P^2")
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("curve of the zero polynomial")
    if y.exact is None:
        raise NoExactCoords("intersection multiplicity needs a rational point")
    pt = list(y.exact)
    if f.evaluate(pt) != 0 or g.evaluate(pt) != 0:
        return MultiplicityReport(0, RESULTANT, frames)
    if _common_factor(f, g):
        raise CommonComponent("f and g share a component")
    rng = np.random.default_rng(seed)
    vals = []
    failures = 0
    while len(vals) < frames:
        A = [[int(v) for v in row] for row in rng.integers(-6, 7, size=(3, 3))]
        det = round(np.linalg.det(np.array(A, dtype=float)))
        if det == 0:
            continue
        v = _resultant_valuation(f, g, pt, A)
        if v is None:
            failures += 1
            if failures > MAX_RETRIES:
                raise NonIsolatedPoint("resultant degenerate in every frame")
            continue
        vals.append(v)
    return MultiplicityReport(min(vals), RESULTANT, frames)


def generic_subspace_multiplicity(f: HomogeneousPolynomial, y: ProjectivePoint, seed: int = 0,
                                  trials: int = FRAMES) -> MultiplicityReport:
    """v_y(div f) as the minimum order of f restricted to random lines through y."""
    if y.exact is None:
        raise NoExactCoords("needs a rational point")
    rng = np.random.default_rng(seed)
    pt = list(y.exact)
    best = None
    for _ in range(trials):
        d = [Fraction(int(v)) for v in rng.integers(-9, 10, size=f.num_vars)]
        # f(y + s d) as a polynomial in s; its order at s = 0
        coeffs = _line_restriction(f, pt, d)
        order = next((k for k, c in enumerate(coeffs) if c != 0), None)
        if order is None:
            continue
        best = order if best is None else min(best, order)
    if best is None:
        raise ZeroPolynomial("f vanishes on every sampled line")
    return MultiplicityReport(best, SUBSPACE_MIN, trials)


def _line_restriction(f, pt, d):
    n = f.num_vars
    out = [Fraction(0)] * (f.degree + 1)
    for e, c in f.items():
        # prod_i (p_i + s d_i)^{e_i}
        poly = [Fraction(1)]
        for i in range(n):
            for _ in range(e[i]):
                nxt = [Fraction(0)] * (len(poly) + 1)
                for k, a in enumerate(poly):
                    nxt[k] += a * pt[i]
                    nxt[k + 1] += a * d[i]
                poly = nxt
        for k, a in enumerate(poly):
            out[k] += c * a
    return out


@dataclass(frozen=True)
class BezoutReport:
    v_f: int
    v_g: int
    v_intersection: int
    holds: bool

    def to_json(self) -> dict:
        return {"v_f": self.v_f, "v_g": self.v_g, "v_intersection": self.v_intersection,
                "holds": self.holds}


def check_local_bezout(f, g, y, seed: int = 0) -> BezoutReport:
    vf = vanishing_order(f, y).order
    vg = vanishing_order(g, y).order
    vi = intersection_multiplicity_plane(f, g, y, seed=seed).order
    return BezoutReport(vf, vg, vi, vi >= vf * vg)


# ---------------------------------------------------------------------------
# vanishing certified by derivatives


@dataclass(frozen=True)
class VanishingReport:
    certified_lower_bound: int
    checked_order: int
    cross_check: int | None = None

    def to_json(self) -> dict:
        return {"certified_lower_bound": self.certified_lower_bound,
                "checked_order": self.checked_order, "cross_check": self.cross_check}


def _restriction_zero(X: VarietyPresentation, f: HomogeneousPolynomial, seed: int = 0) -> bool:
    rng = np.random.default_rng(seed + 7919)
    pts = sample_points(X, rng, 4)
    for p in pts:
        with mpmath.workprec(p.precision_bits):
            nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in p.coords))
            v = abs(f.evaluate(list(p.coords))) / nrm ** f.degree
            if v > mpmath.mpf(2) ** (-p.precision_bits // 3):
                return False
    return True


def vanishing_from_derivatives(X: VarietyPresentation, f: HomogeneousPolynomial, y: ProjectivePoint,
                               S: int, seed: int = 0) -> VanishingReport:
    """Certify v_y(X . div f) >= s + 1 from d^I f(y) = 0 for all |I| <= s <= S.

    The bound is 1 + the largest such s (0 if f(y) != 0). Exact for rational
    y; for plane curves the resultant multiplicity is reported alongside.
    """
    if f.is_zero():
        raise ZeroPolynomial("zero section")
    if S < 0:
        raise BadInput("order must be nonnegative")
    data = build_derivation_data(X)
    if X.eliminants and _restriction_zero(X, f, seed):
        raise RestrictionZero("f vanishes identically on X")
    t = X.rel_dim
    bound = 0
    if y.exact is not None:
        pt = list(y.exact)
        if not X.contains(y):
            from .errors import PointOffVariety
            raise PointOffVariety("y is not on X")
        if data.P.evaluate(pt) == 0 or pt[0] == 0:
            raise SingularPoint("y is singular for the derivation data")
        for s in range(S + 1):
            if all(exact_affine_derivative(data, f, I, pt) == 0
                   for I in multi_indices(t, s) if sum(I) == s):
                bound = s + 1
            else:
                break
    else:
        coeffs = taylor_on_variety(f, X, y, S)
        with mpmath.workprec(y.precision_bits):
            thr = mpmath.mpf(2) ** (-y.precision_bits // 3)
            for s in range(S + 1):
                if all(abs(c) <= thr for I, c in coeffs.items() if sum(I) == s):
                    bound = s + 1
                else:
                    break
    cross = None
    if X.ambient_dim == 2 and X.rel_dim == 1 and y.exact is not None:
        cross = intersection_multiplicity_plane(X.eliminants[2], f, y, seed=seed).order
    return VanishingReport(bound, S, cross)


@dataclass(frozen=True)
class ChainReport:
    product_bound: int
    verified_orders: tuple
    oracle: int | None

    def to_json(self) -> dict:
        return {"product_bound": self.product_bound, "verified_orders": list(self.verified_orders),
                "oracle": self.oracle}


def multiplicity_chain(Y0: VarietyPresentation, sections: Sequence, alpha: ProjectivePoint,
                       X: VarietyPresentation | None = None, seed: int = 0) -> ChainReport:
    """Certify v_alpha(Y0 . div f_1 ... div f_k) >= S_1 ... S_k.

    Each section must vanish to order >= S_i at alpha on Y0, which is checked
    through vanishing_from_derivatives. Where the intersection is a
    resultant computation in P^2 the actual multiplicity is reported too.
    """
    X = X or Y0
    if not X.contains(alpha):
        raise UnverifiedVanishing("alpha is not on Y0")
    if len(sections) > X.rel_dim:
        raise ImproperIntersection("more sections than the dimension allows")
    orders = []
    for f, S_i in sections:
        if S_i < 1:
            raise BadInput("section orders must be positive")
        rep = vanishing_from_derivatives(X, f, alpha, S_i - 1, seed=seed)
        if rep.certified_lower_bound < S_i:
            raise UnverifiedVanishing(f"section vanishes only to order {rep.certified_lower_bound} < {S_i}")
        orders.append(S_i)
    bound = math.prod(orders) if orders else 1
    oracle = None
    if alpha.exact is not None and X.ambient_dim == 2:
        try:
            if X.rel_dim == 1 and len(sections) == 1:
                oracle = intersection_multiplicity_plane(X.eliminants[2], sections[0][0], alpha, seed).order
            elif X.rel_dim == 2 and len(sections) == 2:
                oracle = intersection_multiplicity_plane(sections[0][0], sections[1][0], alpha, seed).order
        except CommonComponent as exc:
            raise ImproperIntersection(str(exc)) from exc
    return ChainReport(bound, tuple(orders), oracle)


# ---------------------------------------------------------------------------
# weighted vanishing


@dataclass(frozen=True)
class WeightedChoice:
    multiplicity: int
    component: object
    order: int
    size: float
    ratio: float
    cycle_ratio: float


def component_order(c, x: ProjectivePoint) -> int:
    if isinstance(c, ProjectivePoint):
        # a point contains x or not; multiplicity one in the first case
        from .metric import fs_distance

        if c.exact is not None and x.exact is not None:
            return int(c == x)
        with mpmath.workprec(x.precision_bits):
            return int(fs_distance(c, x) <= mpmath.mpf(2) ** (-x.precision_bits // 2))
    return vanishing_order(c, x).order


def weighted_vanishing_best(Z: EffectiveCycle, x: ProjectivePoint, H: float, seed: int = 0,
                            orders=None, sizes=None) -> WeightedChoice:
    """Component maximizing v_x(Y) / t_H(Y); ties to the canonical order.

    ``orders``/``sizes`` may supply precomputed values per canonical
    component (mainly for experiments with synthetic sizes).
    """
    Z.require_nonempty()
    canon = Z.canonical()
    rows = []
    for k, (m, c) in enumerate(canon):
        v = orders[k] if orders is not None else component_order(c, x)
        deg = c.field_degree if isinstance(c, ProjectivePoint) else c.degree
        t = sizes[k] if sizes is not None else H * deg + component_height(c, seed=seed).value
        if t <= 0:
            raise BadInput("component size must be positive")
        rows.append((m, c, v, t))
    total_v = sum(m * v for m, _, v, _ in rows)
    total_t = sum(m * t for m, _, _, t in rows)
    best = max(range(len(rows)), key=lambda k: (rows[k][2] / rows[k][3], -k))
    m, c, v, t = rows[best]
    return WeightedChoice(m, c, v, t, v / t, total_v / total_t)
