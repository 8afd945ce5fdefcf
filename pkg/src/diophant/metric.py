"""Fubini-Study distances and (derivated, weighted) algebraic distances.

All logarithms are natural. For a divisor div f the derivated distance uses
holomorphic derivatives of the chart pullback F(z) = f(U^H (1, z)); for a
zero-cycle it uses the real-analytic function

    E(z) = prod_i |y_i, phi(z)|^{n_i}

and mixed Wirtinger multi-indices in (z, conj z), so 2M indices in total.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath

from . import series
from .errors import (BadInput, DegenerateBasis, EmptyCycle, NonPositive, PointInSupport,
                     PointOnDivisor, ZeroPolynomial, ZeroVector)
from .heights import component_height, cycle_height
from .points import EffectiveCycle, ProjectivePoint
from .polycore import HomogeneousPolynomial, log_l2_norm


@dataclass(frozen=True)
class DistanceValue:
    value: float
    error_radius: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value) or self.error_radius < 0:
            raise ValueError(f"invalid distance {self.value} +- {self.error_radius}")

    def __add__(self, other: "DistanceValue") -> "DistanceValue":
        return DistanceValue(self.value + other.value, self.error_radius + other.error_radius)

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error_radius}


def _vec(x, prec):
    if isinstance(x, ProjectivePoint):
        return list(x.coords)
    with mpmath.workprec(prec):
        return [mpmath.mpc(c) if not hasattr(c, "denominator") else
                mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator) for c in x]


def _prec(*objs) -> int:
    ps = [o.precision_bits for o in objs if isinstance(o, ProjectivePoint)]
    return max(ps) if ps else 256


def fs_distance(x, y):
    """Sine of the angle between the lines x and y: ||x ^ y|| / (||x|| ||y||).

    Computed from the 2x2 minors, which avoids the cancellation of
    1 - |<x,y>|^2 for nearby points. Returns an mpf in [0, 1].
    """
    prec = _prec(x, y)
    u, v = _vec(x, prec), _vec(y, prec)
    if len(u) != len(v):
        raise BadInput("points live in different spaces")
    with mpmath.workprec(prec):
        nu = sum(abs(c) ** 2 for c in u)
        nv = sum(abs(c) ** 2 for c in v)
        if nu == 0 or nv == 0:
            raise ZeroVector("zero representative")
        w = mpmath.mpf(0)
        n = len(u)
        for i in range(n):
            for j in range(i + 1, n):
                w += abs(u[i] * v[j] - u[j] * v[i]) ** 2
        return min(mpmath.mpf(1), mpmath.sqrt(w / (nu * nv)))


def orthonormal_basis(vectors, prec: int = 256, tol_bits: int | None = None):
    """Modified Gram-Schmidt; raises DegenerateBasis on dependent input."""
    tol = mpmath.mpf(2) ** (-(tol_bits or prec // 2))
    out = []
    with mpmath.workprec(prec):
        for v in vectors:
            w = [mpmath.mpc(c) if not hasattr(c, "denominator") else
                 mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator) for c in v]
            n0 = mpmath.sqrt(sum(abs(c) ** 2 for c in w))
            if n0 == 0:
                raise DegenerateBasis("zero basis vector")
            for _ in range(2):
                for q in out:
                    ip = sum(mpmath.conj(a) * b for a, b in zip(q, w))
                    w = [b - ip * a for a, b in zip(q, w)]
            n = mpmath.sqrt(sum(abs(c) ** 2 for c in w))
            if n <= tol * n0:
                raise DegenerateBasis("basis vectors are linearly dependent")
            out.append([c / n for c in w])
    return out


def point_subspace_distance(x, W) -> mpmath.mpf:
    """Sine distance from x to the projective subspace P(W); W is a basis list."""
    basis = getattr(W, "basis", W)
    prec = _prec(x)
    q = orthonormal_basis(basis, prec)
    u = _vec(x, prec)
    if len(q[0]) != len(u):
        raise BadInput("point and subspace live in different spaces")
    with mpmath.workprec(prec):
        nu = mpmath.sqrt(sum(abs(c) ** 2 for c in u))
        if nu == 0:
            raise ZeroVector("zero representative")
        u = [c / nu for c in u]
        proj2 = sum(abs(sum(mpmath.conj(a) * b for a, b in zip(qa, u))) ** 2 for qa in q)
        return mpmath.sqrt(max(mpmath.mpf(0), 1 - proj2))


# ---------------------------------------------------------------------------
# charts


class Chart:
    """Unitary frame U with U * center proportional to e_0.

    The chart map is phi(z) = U^H (1, z_1, ..., z_M).
    """

    def __init__(self, center: ProjectivePoint, frame, check: bool = True):
        self.center = center
        self.prec = center.precision_bits
        self.frame = frame
        n = center.num_vars
        if check:
            with mpmath.workprec(self.prec):
                tol = mpmath.mpf(2) ** (-self.prec // 2)
                gram = frame * frame.H
                err = max(abs(gram[i, j] - (1 if i == j else 0)) for i in range(n) for j in range(n))
                if err > tol:
                    raise BadInput("chart frame is not unitary")
                img = frame * center.unit()
                if max(abs(img[i]) for i in range(1, n)) > tol:
                    raise BadInput("chart frame does not send the center to e0")
        with mpmath.workprec(self.prec):
            self.inverse = frame.H

    @property
    def dim(self) -> int:
        return self.center.num_vars - 1

    @classmethod
    def at(cls, theta: ProjectivePoint) -> "Chart":
        key = (theta.coords, theta.precision_bits)
        chart = _CHARTS.get(key)
        if chart is None:
            if len(_CHARTS) > 256:
                _CHARTS.clear()
            chart = _CHARTS[key] = _householder_chart(theta)
        return chart

    @classmethod
    def aligned(cls, theta: ProjectivePoint, directions: Sequence) -> "Chart":
        """Frame whose first chart coordinates span the given directions at theta."""
        n = theta.num_vars
        vecs = [list(theta.coords)] + [list(d) for d in directions]
        for i in range(n):
            e = [0] * n
            e[i] = 1
            vecs.append(e)
        q = []
        with mpmath.workprec(theta.precision_bits):
            for v in vecs:
                try:
                    q = orthonormal_basis([*q, v], theta.precision_bits, tol_bits=40)
                except DegenerateBasis:
                    continue
                if len(q) == n:
                    break
            u = mpmath.matrix(n, n)
            for i, row in enumerate(q):
                for j, c in enumerate(row):
                    u[i, j] = mpmath.conj(c)
            # fix the phase so that U * theta is a positive multiple of e0
            img = (u * theta.unit())[0]
            ph = img / abs(img)
            for j in range(n):
                u[0, j] = u[0, j] / ph
        return cls(theta, u)

    def point(self, z) -> list:
        with mpmath.workprec(self.prec):
            w = [mpmath.mpc(1)] + [mpmath.mpc(c) for c in z]
            return [sum(self.inverse[i, j] * w[j] for j in range(len(w))) for i in range(len(w))]


_CHARTS: dict = {}


def _householder_chart(theta: ProjectivePoint) -> Chart:
    n = theta.num_vars
    with mpmath.workprec(theta.precision_bits):
        u = theta.unit()
        ph = u[0] / abs(u[0]) if u[0] != 0 else mpmath.mpc(1)
        v = mpmath.matrix([u[i] - (ph if i == 0 else 0) for i in range(n)])
        vv = sum(abs(v[i]) ** 2 for i in range(n))
        eye = mpmath.eye(n)
        if vv < mpmath.mpf(2) ** (-theta.precision_bits + 8):
            h = eye
        else:
            h = eye - (2 / vv) * (v * v.H)
        frame = h / ph
    return Chart(theta, frame)


# ---------------------------------------------------------------------------
# divisors


def _zero_threshold(prec: int):
    return mpmath.mpf(2) ** (-prec // 2)


def taylor_coefficients(f: HomogeneousPolynomial, chart: Chart, S: int) -> dict:
    """Taylor coefficients c_J, |J| <= S, of F(z) = f(U^H (1, z)) at 0."""
    if f.num_vars != chart.center.num_vars:
        raise BadInput("polynomial and chart live in different spaces")
    n = f.num_vars
    with mpmath.workprec(chart.prec + 16):
        rows = [[chart.inverse[i, j] for j in range(n)] for i in range(n)]
        expanded = series.substitute_linear(f.items(), rows, n, order=S)
    return {e[1:]: c for e, c in expanded.items() if sum(e[1:]) <= S}


def chart_derivatives(f: HomogeneousPolynomial, chart: Chart, S: int) -> dict:
    """Holomorphic derivatives d^J F(0) = J! c_J for |J| <= S."""
    with mpmath.workprec(chart.prec):
        return {J: c * math.prod(math.factorial(j) for j in J)
                for J, c in taylor_coefficients(f, chart, S).items()}


def derivated_algebraic_distance(f: HomogeneousPolynomial, theta: ProjectivePoint, S: int,
                                 chart: Chart | None = None) -> DistanceValue:
    """sup_{|J| <= S} log|d^J F(0)| - log |f|_{L2}."""
    if f.is_zero():
        raise ZeroPolynomial("distance to the divisor of zero")
    if S < 0:
        raise BadInput("derivative order must be nonnegative")
    chart = chart or Chart.at(theta)
    ders = chart_derivatives(f, chart, S)
    log_norm = log_l2_norm(f)
    with mpmath.workprec(chart.prec):
        thr = _zero_threshold(chart.prec) * mpmath.e ** log_norm
        best = max((abs(v) for v in ders.values()), default=mpmath.mpf(0))
        if best <= thr:
            raise PointOnDivisor(f"all derivatives of order <= {S} vanish at theta")
        val = float(mpmath.log(best)) - log_norm
    return DistanceValue(val, float(mpmath.mpf(2) ** (-chart.prec // 2 + 8)))


def algebraic_distance(f: HomogeneousPolynomial, theta: ProjectivePoint) -> DistanceValue:
    """log(|f(theta)| / (|f|_{L2} ||theta||^D))."""
    if f.is_zero():
        raise ZeroPolynomial("distance to the divisor of zero")
    if theta.exact is not None and f.evaluate(list(theta.exact)) == 0:
        raise PointOnDivisor("theta lies on div f")
    return derivated_algebraic_distance(f, theta, 0)


# ---------------------------------------------------------------------------
# zero-cycles


def _conj_points(Z: EffectiveCycle):
    for m, c in Z.points():
        for coords in c.conjugates():
            yield m, coords


def distance_series(Z: EffectiveCycle, chart: Chart, S: int, directions=None):
    """Truncated series of E(z) = prod |y, phi(z)|^n in Wirtinger variables.

    Variables are (z_d, conj z_d) for d in ``directions`` (1-based chart
    coordinates, default all). Returns (series, variable count).
    """
    M = chart.dim
    dirs = list(directions) if directions is not None else list(range(1, M + 1))
    k = len(dirs)
    nv = 2 * k
    prec = chart.prec + 32
    with mpmath.workprec(prec):
        zero = (0,) * nv

        def unit(i):
            e = [0] * nv
            e[i] = 1
            return tuple(e)

        # |z|^2 restricted to the chosen directions
        zz = {}
        for a in range(k):
            e = [0] * nv
            e[a] = 1
            e[k + a] = 1
            zz[tuple(e)] = mpmath.mpc(1)
        log_e = {}
        total_mult = 0
        for m, coords in _conj_points(Z):
            nrm = mpmath.sqrt(sum(abs(c) ** 2 for c in coords))
            y = [c / nrm for c in coords]
            b = [sum(chart.frame[i, j] * y[j] for j in range(M + 1)) for i in range(M + 1)]
            # <y, phi(z)> = sum conj(b_j) w_j with w = (1, z)
            lin = {zero: mpmath.conj(b[0])}
            lbar = {zero: b[0]}
            for a, d in enumerate(dirs):
                lin[unit(a)] = mpmath.conj(b[d])
                lbar[unit(k + a)] = b[d]
            inner2 = series.mul(lin, lbar, 2)
            N = series.add(series.add(series.constant(nv, 1), zz), inner2, -1)
            c0 = N.get(zero, 0)
            if abs(c0) <= _zero_threshold(chart.prec) ** 2:
                raise PointInSupport("theta lies in the support of the cycle")
            log_e = series.add(log_e, series.log(N, nv, S), mpmath.mpf(m) / 2)
            total_mult += m
        denom = series.log(series.add(series.constant(nv, 1), zz), nv, S)
        log_e = series.add(log_e, denom, -mpmath.mpf(total_mult) / 2)
        return series.exp(log_e, nv, S), nv


def _zero_cycle_distance(Z: EffectiveCycle, chart: Chart, S: int, directions=None) -> DistanceValue:
    ser, nv = distance_series(Z, chart, S, directions)
    with mpmath.workprec(chart.prec):
        best = mpmath.mpf(0)
        for e, c in ser.items():
            if sum(e) <= S:
                v = abs(c) * math.prod(math.factorial(i) for i in e)
                best = max(best, v)
        return DistanceValue(float(mpmath.log(best)), float(mpmath.mpf(2) ** (-chart.prec // 2 + 8)))


def cycle_distance(Z: EffectiveCycle, theta: ProjectivePoint, S: int, chart: Chart | None = None,
                   directions=None) -> DistanceValue:
    """Derivated algebraic distance D^S(Z, theta) of an effective cycle.

    Point components are treated together through E(z); a divisor component
    n * div f contributes the derivated distance of f^n; the parts are added.
    """
    Z.require_nonempty()
    if S < 0:
        raise BadInput("derivative order must be nonnegative")
    chart = chart or Chart.at(theta)
    total = DistanceValue(0.0)
    if Z.points():
        total = total + _zero_cycle_distance(EffectiveCycle(tuple(Z.points())), chart, S, directions)
    for m, f in Z.divisors():
        try:
            total = total + derivated_algebraic_distance(f ** m, theta, S, chart)
        except PointOnDivisor as exc:
            raise PointInSupport(str(exc)) from exc
    return total


# ---------------------------------------------------------------------------
# weighted variants


def weighted_size(Z: EffectiveCycle, a: float, seed: int = 0) -> float:
    """t_a(Z) = a deg Z + h(Z)."""
    return a * Z.degree() + cycle_height(Z, seed=seed).value


def weighted_derivated_distance(Z: EffectiveCycle, theta: ProjectivePoint, S: int, a: float,
                                chart: Chart | None = None, seed: int = 0) -> float:
    """phi_a^S(theta, Z) = D^{3S}(theta, Z) / t_a(Z)."""
    t = weighted_size(Z, a, seed=seed)
    if t <= 0:
        raise NonPositive(f"a-size {t} is not positive")
    return cycle_distance(Z, theta, 3 * S, chart).value / t


@dataclass(frozen=True)
class ComponentChoice:
    multiplicity: int
    component: object
    S_component: int
    phi_component: float
    phi_cycle: float
    slack: float
    holds: bool


def min_distance_component(Z: EffectiveCycle, theta: ProjectivePoint, S: int, a: float,
                           c: float = 1.0, seed: int = 0) -> ComponentChoice:
    """Irreducible component with the smallest weighted derivated distance.

    Every component Y gets the least admissible order S_Y, i.e. the smallest
    integer with S_Y / t_a(Y) >= S / t_a(Z); larger orders can only increase
    D^{3 S_Y}. Ties go to the first component in canonical order.
    """
    Z.require_nonempty()
    canon = Z.canonical()
    chart = Chart.at(theta)
    tz = weighted_size(Z, a, seed=seed)
    if tz <= 0:
        raise NonPositive(f"a-size {tz} is not positive")
    phi_z = cycle_distance(Z, theta, 3 * S, chart).value / tz
    best = None
    for m, comp in canon:
        Y = EffectiveCycle(((1, comp),))
        ty = a * Y.degree() + component_height(comp, seed=seed).value
        if ty <= 0:
            raise NonPositive(f"a-size {ty} is not positive")
        s_y = math.ceil(S * ty / tz - 1e-12)
        phi_y = cycle_distance(Y, theta, 3 * s_y, chart).value / ty
        if best is None or phi_y < best[3]:
            best = (m, comp, s_y, phi_y)
    deg = max(Z.degree(), 1)
    slack = c * math.log(deg) / a if deg > 1 else 0.0
    m, comp, s_y, phi_y = best
    return ComponentChoice(m, comp, s_y, phi_y, phi_z, slack, 2 * phi_y <= phi_z + slack + 1e-12)
