"""Derivations of the function field of a projected variety.

A variety X of relative dimension t in P^M is presented by eliminants
P_mu(x_0, ..., x_t, x_mu), mu = t+1..M. The derivations d_l (l = 1..t)
satisfy d_l x_i = delta_{li} on the affine base coordinates x_i / x_0 and

    d_l x_mu = -(dP_mu/dx_l) / (dP_mu/dx_mu).

For every multi-index I with |I| = S >= 1 there is a polynomial f_I with

    d^I (f / x_0^D) = f_I / (P^{2S-1} x_0^{D-S}),   P = prod_mu dP_mu/dx_mu,

built from the first-order rule f_l = P df/dx_l + sum_mu P A_{l mu} df/dx_mu
and the recursion f_{I+e_l} = P (f_I)_l - (2S-1) f_I P_l.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from . import series
from .errors import (BadInput, DegenerateEliminant, DeskScaleExceeded, NotGeneralPosition,
                     PointOffVariety, PoleAtPoint, SingularPoint)
from .polycore import DEFAULT_PRECISION, HomogeneousPolynomial, l2_norm_squared, log_l2_norm, poly_prod

MAX_AMBIENT = 4
MAX_REL_DIM = 2


def _multi_indices(t: int, S: int):
    """All multi-indices of length t and total degree <= S, graded then lex."""
    out = []

    def rec(prefix, left):
        if len(prefix) == t:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k)

    rec([], S)
    return sorted(out, key=lambda I: (sum(I), I))


multi_indices = _multi_indices


@dataclass(frozen=True)
class VarietyPresentation:
    """Eliminant presentation of a variety X in P^M of relative dimension t."""

    ambient_dim: int
    rel_dim: int
    eliminants: Mapping[int, HomogeneousPolynomial]
    degree_bound: int | None = None

    def __post_init__(self):
        M, t = self.ambient_dim, self.rel_dim
        if not (0 <= t <= M) or M < 1:
            raise BadInput(f"invalid dimensions M={M}, t={t}")
        if M > MAX_AMBIENT or t > MAX_REL_DIM:
            raise DeskScaleExceeded(f"M={M}, t={t} is beyond desk scale")
        elim = {int(mu): p for mu, p in dict(self.eliminants).items()}
        if sorted(elim) != list(range(t + 1, M + 1)):
            raise BadInput(f"need one eliminant for each mu in {t + 1}..{M}")
        allowed_base = set(range(t + 1))
        for mu, p in elim.items():
            if p.num_vars != M + 1 or p.is_zero():
                raise BadInput(f"eliminant {mu} is zero or has the wrong number of variables")
            extra = p.involved_vars() - allowed_base - {mu}
            if extra:
                raise BadInput(f"eliminant {mu} involves foreign coordinates {sorted(extra)}")
            if mu not in p.involved_vars():
                raise DegenerateEliminant(f"eliminant {mu} does not involve x{mu}")
        object.__setattr__(self, "eliminants", elim)
        if self.degree_bound is None:
            object.__setattr__(self, "degree_bound", max((p.degree for p in elim.values()), default=1))
        for mu, p in elim.items():
            if p.degree > self.degree_bound:
                raise BadInput(f"eliminant {mu} exceeds the degree bound")

    @property
    def num_vars(self) -> int:
        return self.ambient_dim + 1

    def check_irreducible(self) -> None:
        """Raise NotGeneralPosition unless every eliminant is irreducible over Q."""
        import sympy

        for mu, p in self.eliminants.items():
            _, factors = sympy.factor_list(p.to_sympy())
            if len(factors) != 1 or factors[0][1] != 1:
                raise NotGeneralPosition(f"eliminant {mu} is not irreducible: {factors}")

    @classmethod
    def full_space(cls, M: int) -> "VarietyPresentation":
        return cls(M, M, {}, 1)

    def to_json(self) -> dict:
        return {"M": self.ambient_dim, "t": self.rel_dim, "degree_bound": self.degree_bound,
                "eliminants": {str(mu): p.to_json() for mu, p in sorted(self.eliminants.items())}}

    @classmethod
    def from_json(cls, obj) -> "VarietyPresentation":
        try:
            elim = {int(mu): HomogeneousPolynomial.from_json(p) for mu, p in obj["eliminants"].items()}
            return cls(int(obj["M"]), int(obj["t"]), elim, obj.get("degree_bound"))
        except (KeyError, TypeError, AttributeError) as exc:
            raise BadInput(f"malformed variety JSON: {exc}") from exc

    def contains(self, theta, prec: int | None = None) -> bool:
        """All eliminants vanish at theta relative to 2^(-prec/2)."""
        prec = prec or theta.precision_bits
        if theta.exact is not None:
            return all(p.evaluate(list(theta.exact)) == 0 for p in self.eliminants.values())
        with mpmath.workprec(prec):
            nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in theta.coords))
            tol = mpmath.mpf(2) ** (-prec // 2)
            for p in self.eliminants.values():
                scale = mpmath.sqrt(mpmath.mpf(l2_norm_squared(p).numerator) / l2_norm_squared(p).denominator)
                if abs(p.evaluate(list(theta.coords))) > tol * scale * nrm ** p.degree * 2 ** (p.degree + 4):
                    return False
        return True


# ---------------------------------------------------------------------------
# eliminants


def eliminant(forms: Sequence[HomogeneousPolynomial], mu: int, t: int) -> HomogeneousPolynomial:
    """Defining form of the image of V(forms) in the coordinates x_0..x_t, x_mu.

    Supports one or two forms in P^M with M <= 4. With two forms the single
    extra coordinate is removed by a resultant; factors not involving x_mu are
    images of vertical components and are dropped. The result is primitive,
    square-free and has positive leading coefficient in lex order.
    """
    import sympy

    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise BadInput("empty system")
    n = forms[0].num_vars
    M = n - 1
    if M > MAX_AMBIENT or len(forms) > 2:
        raise DeskScaleExceeded("eliminants are supported for at most two forms in P^4")
    if M - len(forms) != t:
        raise NotGeneralPosition(f"{len(forms)} forms in P^{M} do not cut out a variety of dimension {t}")
    keep = set(range(t + 1)) | {mu}
    drop = [i for i in range(n) if i not in keep]
    syms = sympy.symbols(f"x0:{n}")
    if not drop:
        expr = forms[0].to_sympy()
    else:
        (nu,) = drop
        f1, f2 = (f.to_sympy() for f in forms)
        expr = sympy.resultant(f1, f2, syms[nu])
    expr = sympy.expand(expr)
    if expr == 0:
        raise NotGeneralPosition("resultant vanishes identically")
    _, factors = sympy.factor_list(expr, *syms)
    kept = [fac for fac, _ in factors if sympy.degree(fac, syms[mu]) > 0]
    if not kept:
        raise NotGeneralPosition(f"image does not involve x{mu}")
    out = HomogeneousPolynomial.from_sympy(sympy.Mul(*kept), n)
    return out.primitive()


def presentation_from_system(forms: Sequence[HomogeneousPolynomial], t: int | None = None,
                             degree_bound: int | None = None) -> VarietyPresentation:
    n = forms[0].num_vars
    M = n - 1
    t = M - len(forms) if t is None else t
    elim = {mu: eliminant(forms, mu, t) for mu in range(t + 1, M + 1)}
    if degree_bound is None:
        degree_bound = math.prod(f.degree for f in forms)
    return VarietyPresentation(M, t, elim, max(degree_bound, max(p.degree for p in elim.values())))


# ---------------------------------------------------------------------------
# derivation data


class DerivationData:
    """P = prod dP_mu/dx_mu and the products P * A_{l mu}, plus memoized f_I."""

    def __init__(self, X: VarietyPresentation):
        self.X = X
        n = X.num_vars
        t, M = X.rel_dim, X.ambient_dim
        partials = {}
        for mu, p in X.eliminants.items():
            d = p.diff(mu)
            if d.is_zero():
                raise DegenerateEliminant(f"dP_{mu}/dx_{mu} vanishes identically")
            partials[mu] = d
        self.P = poly_prod(partials.values(), n)
        self.A_products = {}
        for l in range(1, t + 1):
            for mu, p in X.eliminants.items():
                others = [partials[nu] for nu in partials if nu != mu]
                self.A_products[(l, mu)] = -poly_mul_all([p.diff(l)] + others, n,
                                                         self.P.degree)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._P_l = {l: self.first_order(self.P, l) for l in range(1, t + 1)}

    @property
    def t(self) -> int:
        return self.X.rel_dim

    def first_order(self, f: HomogeneousPolynomial, l: int) -> HomogeneousPolynomial:
        """f_l with d_l (f / x_0^D) = f_l / (P x_0^{D-1})."""
        deg = self.P.degree + max(f.degree - 1, 0)
        out = HomogeneousPolynomial.zero(f.num_vars, deg)
        if f.degree == 0:
            return out
        out = _add(out, self.P * f.diff(l))
        for mu in self.X.eliminants:
            out = _add(out, self.A_products[(l, mu)] * f.diff(mu))
        return out if not out.is_zero() else HomogeneousPolynomial.zero(f.num_vars, deg)

    def derivative_polynomial(self, f: HomogeneousPolynomial, I: Sequence[int]) -> HomogeneousPolynomial:
        I = tuple(int(i) for i in I)
        if len(I) != self.t or any(i < 0 for i in I):
            raise BadInput(f"multi-index {I} does not match t={self.t}")
        S = sum(I)
        if S == 0:
            return f
        key = (f, I)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        l = max(i for i in range(self.t) if I[i] > 0)
        prev = list(I)
        prev[l] -= 1
        prev = tuple(prev)
        if S == 1:
            out = self.first_order(f, l + 1)
        else:
            g = self.derivative_polynomial(f, prev)
            s = S - 1
            deg = f.degree + (2 * S - 1) * self.P.degree - S
            if deg < 0:
                # no forms of negative degree: the derivative vanishes
                out = HomogeneousPolynomial.zero(f.num_vars, 0)
                with self._lock:
                    self._cache.setdefault(key, out)
                return out
            out = _add(HomogeneousPolynomial.zero(f.num_vars, deg),
                       self.P * self.first_order(g, l + 1))
            out = _add(out, (g * self._P_l[l + 1]).scale(-(2 * s - 1)))
            if out.is_zero():
                out = HomogeneousPolynomial.zero(f.num_vars, deg)
        with self._lock:
            self._cache.setdefault(key, out)
        return out

    def degree_bound(self, f: HomogeneousPolynomial, S: int) -> int:
        X = self.X
        return f.degree + max(2 * S - 1, 0) * (X.ambient_dim - X.rel_dim) * X.degree_bound

    def report(self, c: float, seed: int = 0) -> dict:
        """Certify deg P <= (M-t) deg X and log|P| <= c deg X + h_X."""
        from .heights import divisor_height

        X = self.X
        k = X.ambient_dim - X.rel_dim
        h_x = eliminant_height(X, seed)
        log_p = log_l2_norm(self.P)
        return {
            "deg_P": self.P.degree,
            "deg_bound_statement": k * X.degree_bound,
            "deg_bound_tight": k * (X.degree_bound - 1),
            "deg_ok": self.P.degree <= k * X.degree_bound,
            "log_norm_P": log_p,
            "h_X": h_x,
            "norm_bound": c * X.degree_bound + h_x,
            "norm_ok": log_p <= c * X.degree_bound + h_x,
        }


def eliminant_height(X: VarietyPresentation, seed: int = 0) -> float:
    """Stand-in for h(X): divisor height of the product of the eliminants."""
    from .heights import divisor_height

    if not X.eliminants:
        return 0.0
    prod = poly_prod(X.eliminants.values(), X.num_vars)
    return divisor_height(prod, seed=seed).value


def poly_mul_all(polys, n, degree):
    out = poly_prod(polys, n)
    return out if not out.is_zero() else HomogeneousPolynomial.zero(n, degree)


def _add(a: HomogeneousPolynomial, b: HomogeneousPolynomial) -> HomogeneousPolynomial:
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    return a + b


_DATA: dict = {}


def build_derivation_data(X: VarietyPresentation) -> DerivationData:
    key = id(X)
    hit = _DATA.get(key)
    if hit is not None and hit.X is X:
        return hit
    if len(_DATA) > 64:
        _DATA.clear()
    data = _DATA[key] = DerivationData(X)
    return data


def derivative_polynomial(f: HomogeneousPolynomial, I: Sequence[int], X: VarietyPresentation) -> HomogeneousPolynomial:
    return build_derivation_data(X).derivative_polynomial(f, I)


def norm_bound(f: HomogeneousPolynomial, S: int, X: VarietyPresentation, c: float, h_x: float) -> float:
    """Right-hand side of the f_I norm bound for |I| = S."""
    k = X.ambient_dim - X.rel_dim
    dx = X.degree_bound
    return (log_l2_norm(f) + math.log(max(f.degree, 1))
            + (2 * S - 1) * k * (h_x + c * dx + math.log(max(dx, 1)))
            + math.lgamma(2 * S + 1))


# ---------------------------------------------------------------------------
# evaluation at points


def _tol(prec):
    return mpmath.mpf(2) ** (-prec // 2)


def _check_point(data: DerivationData, theta):
    X = data.X
    if theta.num_vars != X.num_vars:
        raise BadInput("point and variety live in different spaces")
    if not X.contains(theta):
        raise PointOffVariety("theta is not on X at working precision")
    with mpmath.workprec(theta.precision_bits):
        nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in theta.coords))
        if abs(theta.coords[0]) <= _tol(theta.precision_bits) * nrm:
            raise PoleAtPoint("x0 vanishes at theta")
        pv = data.P.evaluate(list(theta.coords))
        scale = mpmath.sqrt(mpmath.mpf(l2_norm_squared(data.P).numerator) / l2_norm_squared(data.P).denominator)
        if abs(pv) <= _tol(theta.precision_bits) * scale * nrm ** data.P.degree:
            raise SingularPoint("P vanishes at theta")


def affine_derivative(data: DerivationData, f: HomogeneousPolynomial, I, theta):
    """d^I (f / x_0^D)(theta) as an mpc."""
    S = sum(I)
    with mpmath.workprec(theta.precision_bits + 32):
        c = list(theta.coords)
        if S == 0:
            return f.evaluate(c) / c[0] ** f.degree
        fi = data.derivative_polynomial(f, I)
        return fi.evaluate(c) / (data.P.evaluate(c) ** (2 * S - 1) * c[0] ** (f.degree - S))


def exact_affine_derivative(data: DerivationData, f: HomogeneousPolynomial, I, coords: Sequence[Fraction]) -> Fraction:
    """Exact d^I (f / x_0^D) at a rational point of X."""
    S = sum(I)
    if S == 0:
        return f.evaluate(coords) / coords[0] ** f.degree
    pv = data.P.evaluate(coords)
    if pv == 0:
        raise SingularPoint("P vanishes at the point")
    return data.derivative_polynomial(f, I).evaluate(coords) / (pv ** (2 * S - 1) * coords[0] ** (f.degree - S))


def taylor_on_variety(f: HomogeneousPolynomial, X: VarietyPresentation, theta, S: int,
                      g: HomogeneousPolynomial | None = None) -> dict:
    """Taylor coefficients of f / g^D at theta in the derivation coordinates.

    Returns {I: d^I(f/g^D)(theta) / I!} for |I| <= S; g defaults to x_0.
    """
    data = build_derivation_data(X)
    _check_point(data, theta)
    t = X.rel_dim
    idx = _multi_indices(t, S)
    prec = theta.precision_bits + 32
    with mpmath.workprec(prec):
        def fact(I):
            return math.prod(math.factorial(i) for i in I)

        F = {I: affine_derivative(data, f, I, theta) / fact(I) for I in idx}
        if g is None:
            return F
        if g.degree != 1 or g.num_vars != X.num_vars:
            raise BadInput("g must be a linear form on the same space")
        nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in theta.coords))
        gv = g.evaluate(list(theta.coords))
        if abs(gv) <= _tol(theta.precision_bits) * nrm:
            raise PoleAtPoint("g vanishes at theta")
        # (g/x0)^(-D) as a series, then Leibniz through the series product
        h = {I: affine_derivative(data, g, I, theta) / fact(I) for I in idx}
        G = series.power(h, -f.degree, t, S) if t else {(): h[()] ** (-f.degree)}
        prod = series.mul(F, G, S) if t else {(): F[()] * G[()]}
        return {I: prod.get(I, mpmath.mpc(0)) for I in idx}


def derivative_at(f: HomogeneousPolynomial, I: Sequence[int], X: VarietyPresentation, theta,
                  g: HomogeneousPolynomial | None = None):
    """d^I (f / g^D)(theta); g defaults to x_0."""
    I = tuple(I)
    S = sum(I)
    coeffs = taylor_on_variety(f, X, theta, S, g)
    with mpmath.workprec(theta.precision_bits):
        return coeffs[I] * math.prod(math.factorial(i) for i in I)


def sup_log_derivative(f: HomogeneousPolynomial, X: VarietyPresentation, theta, S: int,
                       g: HomogeneousPolynomial | None = None) -> float:
    """sup_{|I| <= S} log |d^I (f / g^D)(theta)| (-inf if all vanish)."""
    coeffs = taylor_on_variety(f, X, theta, S, g)
    with mpmath.workprec(theta.precision_bits):
        best = max(abs(c) * math.prod(math.factorial(i) for i in I) for I, c in coeffs.items())
        return float(mpmath.log(best)) if best > 0 else -math.inf


def sample_points(X: VarietyPresentation, rng, n: int, precision_bits: int = DEFAULT_PRECISION,
                  scale: float = 1.0):
    """Random smooth points of X: random affine base point, a random root per fiber."""
    from .points import ProjectivePoint

    data = build_derivation_data(X)
    out = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > 50 * n + 50:
            raise RuntimeError("could not sample smooth points")
        with mpmath.workprec(precision_bits + 32):
            base = [mpmath.mpc(1)] + [mpmath.mpc(rng.normal() * scale, rng.normal() * scale)
                                      for _ in range(X.rel_dim)]
            coords = base + [mpmath.mpc(0)] * (X.ambient_dim - X.rel_dim)
            ok = True
            for mu, p in sorted(X.eliminants.items()):
                coeffs = _fiber_coefficients(p, mu, base)
                roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=precision_bits)
                if not roots:
                    ok = False
                    break
                coords[mu] = roots[int(rng.integers(len(roots)))]
        if not ok:
            continue
        pt = ProjectivePoint(coords, precision_bits)
        try:
            _check_point(data, pt)
        except (SingularPoint, PointOffVariety, PoleAtPoint):
            continue
        out.append(pt)
    return out


def _fiber_coefficients(p: HomogeneousPolynomial, mu: int, base):
    """Coefficients (high to low) of p(base, x_mu) as a polynomial in x_mu."""
    deg = max(e[mu] for e in p.terms)
    coeffs = [mpmath.mpc(0)] * (deg + 1)
    for e, c in p.items():
        m = mpmath.mpf(c.numerator) / c.denominator
        for i, k in enumerate(e):
            if i != mu and k:
                m *= base[i] ** k
        coeffs[deg - e[mu]] += m
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    return coeffs
