"""Integral subspaces, projections and lattice-based algebraic approximation."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import mpmath
import numpy as np

from . import kernels
from .derivations import VarietyPresentation
from .errors import (BadInput, DegenerateBasis, DeskScaleExceeded, MeetsCenter, NoCandidate,
                     PrecisionInsufficient, SearchExhausted, UnsupportedField)
from .heights import L2_WEIL, HeightValue, point_height, primitive_integer_vector
from .metric import fs_distance, orthonormal_basis, point_subspace_distance
from .points import EffectiveCycle, ProjectivePoint, poly_roots
from .polycore import HomogeneousPolynomial, log_l2_norm


# ---------------------------------------------------------------------------
# integral subspaces


def _minors_gcd(basis: Sequence[Sequence[int]]) -> int:
    import sympy

    k = len(basis)
    n = len(basis[0])
    g = 0
    m = sympy.Matrix(basis)
    for cols in combinations(range(n), k):
        g = math.gcd(g, int(m[:, list(cols)].det()))
    return g


@dataclass(frozen=True)
class IntegralSubspace:
    """W = span of integer vectors; P(W) has codimension n - dim W in P^{n-1}."""

    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(int(v) for v in row) for row in self.basis)
        if not b or len({len(r) for r in b}) != 1:
            raise BadInput("basis must be a nonempty list of equal-length vectors")
        g = _minors_gcd(b)
        if g == 0:
            raise DegenerateBasis("basis vectors are linearly dependent")
        if g != 1:
            raise BadInput(f"basis is not primitive (gcd of maximal minors {g})")
        object.__setattr__(self, "basis", b)

    @property
    def ambient(self) -> int:
        return len(self.basis[0])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        """Codimension of P(W) in P^M."""
        return self.ambient - self.dim

    def height(self) -> float:
        """log covolume of W ∩ Z^n, i.e. (1/2) log det(B B^T)."""
        import sympy

        m = sympy.Matrix(self.basis)
        return 0.5 * math.log(int((m * m.T).det()))

    def complement_basis(self) -> list:
        """LLL-reduced integer basis of the orthogonal complement."""
        import sympy
        from sympy.polys.matrices import DomainMatrix

        ns = sympy.Matrix(self.basis).nullspace()
        rows = []
        for v in ns:
            den = sympy.ilcm(*[sympy.fraction(c)[1] for c in v])
            ints = [int(c * den) for c in v]
            g = math.gcd(*ints)
            rows.append([c // g for c in ints])
        if not rows:
            return []
        dm = DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(sympy.ZZ)
        return [[int(c) for c in r] for r in dm.lll().to_Matrix().tolist()]

    def to_json(self) -> dict:
        return {"basis": [list(r) for r in self.basis], "codim": self.codim, "height": self.height()}


def _primitive_vectors(n: int, bound: int) -> np.ndarray:
    """Primitive integer vectors with entries in [-bound, bound], first nonzero > 0."""
    rng = np.arange(-bound, bound + 1)
    grid = np.array(np.meshgrid(*([rng] * n), indexing="ij")).reshape(n, -1).T
    grid = grid[np.any(grid != 0, axis=1)]
    first = grid[np.arange(len(grid)), np.argmax(grid != 0, axis=1)]
    grid = grid[first > 0]
    g = np.gcd.reduce(np.abs(grid), axis=1)
    grid = grid[g == 1]
    order = np.lexsort([*grid.T[::-1], (grid * grid).sum(axis=1)])
    return grid[order]


def _sample_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return points
    arr = np.array([[complex(c) for c in p.coords] for p in points], dtype=np.complex128)
    return arr / np.linalg.norm(arr, axis=1, keepdims=True)


def sample_array(X: VarietyPresentation, rng, n: int) -> np.ndarray:
    """Unit vectors of n random points of X in double precision.

    The base point is Fubini-Study uniform on P^t (ratios of complex
    Gaussians), so neighbourhoods of the hyperplane x0 = 0 are covered.
    """
    t = X.rel_dim
    out = np.empty((n, X.num_vars), dtype=np.complex128)
    filled = 0
    while filled < n:
        g = rng.standard_normal((t + 1,)) + 1j * rng.standard_normal((t + 1,))
        c = [1.0 + 0j] + list(g[1:] / g[0]) + [0j] * (X.ambient_dim - t)
        ok = True
        for mu, p in sorted(X.eliminants.items()):
            coeffs = _fiber_np(p, mu, c)
            if len(coeffs) < 2:
                ok = False
                break
            roots = np.roots(coeffs)
            c[mu] = roots[int(rng.integers(len(roots)))]
        if not ok:
            continue
        v = np.array(c, dtype=np.complex128)
        out[filled] = v / np.linalg.norm(v)
        filled += 1
    return out


@dataclass(frozen=True)
class SubspaceSearchResult:
    subspace: IntegralSubspace
    height: float
    log_distance: float
    threshold: float
    height_bound: float
    height_ok: bool
    candidates_scanned: int

    def to_json(self) -> dict:
        return {"subspace": self.subspace.to_json(), "height": self.height,
                "log_distance_to_X": self.log_distance, "threshold": self.threshold,
                "height_bound": self.height_bound, "height_ok": self.height_ok,
                "candidates_scanned": self.candidates_scanned}


def _refine_min_distance(X: VarietyPresentation | None, Q: np.ndarray, pts, k: int = 8,
                         iters: int = 60) -> float:
    """Push the nearest sample points downhill in the distance to P(W).

    Moves the affine base coordinates by a shrinking random pattern search and
    follows the fiber roots continuously; returns the smallest distance seen.
    """
    arr = _sample_array(pts)
    proj2 = np.abs(arr @ Q.conj().T) ** 2
    dist = np.sqrt(np.clip(1 - proj2.sum(axis=1), 0, None))
    best = float(dist.min())
    if X is None or not X.eliminants:
        return best
    rng = np.random.default_rng(1234)
    t = X.rel_dim

    def coords_from(base, prev):
        c = [1.0 + 0j] + list(base) + [0j] * (X.ambient_dim - t)
        for mu, p in sorted(X.eliminants.items()):
            coeffs = _fiber_np(p, mu, c)
            roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
            if len(roots) == 0:
                return None
            c[mu] = roots[np.argmin(np.abs(roots - prev[mu]))]
        v = np.array(c, dtype=np.complex128)
        return v / np.linalg.norm(v)

    def dist_of(v):
        return float(np.sqrt(max(0.0, 1 - (np.abs(Q.conj() @ v) ** 2).sum())))

    for idx in np.argsort(dist)[:k]:
        v = arr[idx] / arr[idx][0]
        base = v[1:t + 1].copy()
        cur = v.copy()
        cur_d = dist_of(cur / np.linalg.norm(cur))
        step = 0.1 * (1 + np.abs(base).max())
        for _ in range(iters):
            improved = False
            for _ in range(4 * t):
                delta = step * (rng.standard_normal(t) + 1j * rng.standard_normal(t))
                w = coords_from(base + delta, cur)
                if w is None:
                    continue
                dw = dist_of(w)
                if dw < cur_d:
                    base = base + delta
                    cur = w / w[0]
                    cur_d = dw
                    improved = True
            if not improved:
                step *= 0.5
                if step < 1e-9:
                    break
        best = min(best, cur_d)
    return best


def _fiber_np(p: HomogeneousPolynomial, mu: int, c):
    deg = max(e[mu] for e in p.terms)
    coeffs = np.zeros(deg + 1, dtype=np.complex128)
    for e, v in p.items():
        m = float(v)
        for i, k in enumerate(e):
            if i != mu and k:
                m = m * c[i] ** k
        coeffs[deg - e[mu]] += m
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    return coeffs[nz[0]:] if len(nz) else coeffs[:0]


def find_avoiding_subspace(X, target_codim: int, degree: int | None = None, c_bar: float = math.log(2),
                           c_tilde: float = 1.0, seed: int = 0, samples: int = 4000,
                           bound: int = 12, max_candidates: int = 20000,
                           dim_X: int | None = None) -> SubspaceSearchResult:
    """Integral subspace W with |x, P(W)| >= e^{-c_bar} / deg X on X.

    X is a VarietyPresentation (sampled here) or a list of ProjectivePoints.
    The search first picks a complex trial subspace far from the sample, then
    ranks primitive integer vectors by norm and closeness to it and scans
    bases built from them, shortest first; the first basis clearing the
    threshold with a 10% margin after local refinement wins.
    """
    rng = np.random.default_rng(seed)
    if isinstance(X, VarietyPresentation):
        n = X.num_vars
        deg = degree or X.degree_bound
        dim_x = X.rel_dim if dim_X is None else dim_X
        pts = sample_array(X, rng, samples)
        pres = X
    else:
        pts = list(X)
        n = pts[0].num_vars
        deg = degree or 1
        dim_x = 0 if dim_X is None else dim_X
        pres = None
    if n - 1 > 4:
        raise DeskScaleExceeded("ambient dimension above 4")
    k = n - target_codim
    if not (1 <= k < n):
        raise BadInput(f"target codimension {target_codim} impossible in P^{n - 1}")
    if target_codim <= dim_x:
        raise BadInput("P(W) must have codimension larger than dim X to avoid it")
    threshold = math.exp(-c_bar) / max(deg, 1)
    arr = _sample_array(pts)

    # far-from-X trial subspace among random complex ones
    trials = rng.standard_normal((64, k, n)) + 1j * rng.standard_normal((64, k, n))
    bases = np.array([np.linalg.qr(tr.T)[0].T for tr in trials])
    vals = kernels.min_subspace_distance(np.ascontiguousarray(bases), arr, 0.0)
    best_trial = bases[int(np.argmax(vals))]

    vecs = _primitive_vectors(n, bound)
    vn = np.sqrt((vecs * vecs).sum(axis=1))
    close = np.sqrt(np.clip(1 - (np.abs(vecs @ best_trial.conj().T) ** 2).sum(axis=1) / vn ** 2, 0, None))
    # anisotropic box: short overall and nearly inside the trial subspace
    score = np.log(vn) + 2.0 * close
    ranked = vecs[np.argsort(score, kind="stable")][:max(4 * k + 24, 40)]

    combos = []
    for comb in combinations(range(len(ranked)), k):
        B = ranked[list(comb)]
        gram = B @ B.T
        det = round(np.linalg.det(gram.astype(float)))
        if det <= 0:
            continue
        combos.append((0.5 * math.log(det), comb))
        if len(combos) >= max_candidates:
            break
    combos.sort(key=lambda c: c[0])
    scanned = 0
    chunk = 256
    for lo in range(0, len(combos), chunk):
        part = combos[lo:lo + chunk]
        qs = np.array([np.linalg.qr(ranked[list(c)].T.astype(np.complex128))[0].T for _, c in part])
        d = kernels.min_subspace_distance(np.ascontiguousarray(qs), arr, threshold * 1.1)
        scanned += len(part)
        for j in np.flatnonzero(d >= threshold * 1.1):
            h, comb = part[j]
            basis = [list(map(int, ranked[i])) for i in comb]
            try:
                W = IntegralSubspace(tuple(basis))
            except BadInput:
                continue
            refined = _refine_min_distance(pres, qs[j], pts)
            if refined < threshold * 1.05:
                continue
            hb = c_tilde * math.log(max(deg, 2))
            return SubspaceSearchResult(W, W.height(), math.log(refined), threshold, hb,
                                        W.height() <= hb + 1e-12, scanned)
    raise SearchExhausted(f"no integral subspace within entry bound {bound}")


# ---------------------------------------------------------------------------
# projections


class ProjectionSetup:
    """Linear projection from P(W): x -> orthogonal projection onto W^perp.

    For a coordinate subspace W = span{e_j : j in J} this drops the
    coordinates in J, which keeps rational points rational.
    """

    def __init__(self, W: IntegralSubspace):
        self.W = W
        n = W.ambient
        self.coordinate = all(sum(1 for v in row if v) == 1 and max(abs(v) for v in row) == 1
                              for row in W.basis)
        if self.coordinate:
            dropped = {row.index(next(v for v in row if v)) for row in W.basis}
            self.kept = [i for i in range(n) if i not in dropped]
        else:
            self.kept = None
        self.complement = W.complement_basis()

    @classmethod
    def dropping(cls, n: int, coords: Sequence[int]) -> "ProjectionSetup":
        rows = []
        for j in coords:
            e = [0] * n
            e[j] = 1
            rows.append(tuple(e))
        return cls(IntegralSubspace(tuple(rows)))

    def image_coords(self, x: ProjectivePoint):
        """Orthonormal-frame coordinates of the projection of x."""
        prec = x.precision_bits
        if self.coordinate:
            return [x.coords[i] for i in self.kept]
        q = orthonormal_basis(self.complement, prec)
        with mpmath.workprec(prec):
            return [sum(mpmath.conj(a) * b for a, b in zip(row, x.coords)) for row in q]

    def check_center(self, x: ProjectivePoint, tol_bits: int | None = None):
        d = point_subspace_distance(x, self.W.basis)
        with mpmath.workprec(x.precision_bits):
            if d <= mpmath.mpf(2) ** (-(tol_bits or x.precision_bits // 2)):
                raise MeetsCenter("point meets the projection center")
        return d

    def image(self, x: ProjectivePoint) -> ProjectivePoint:
        self.check_center(x)
        if self.coordinate and x.exact is not None:
            return ProjectivePoint.rational([x.exact[i] for i in self.kept], x.precision_bits)
        return ProjectivePoint(self.image_coords(x), x.precision_bits)


@dataclass(frozen=True)
class ProjectionReport:
    degree_before: int
    degree_after: int
    height_before: float | None
    height_after: float | None
    height_ok: bool | None

    def to_json(self) -> dict:
        return {"degree_before": self.degree_before, "degree_after": self.degree_after,
                "height_before": self.height_before, "height_after": self.height_after,
                "height_ok": self.height_ok}


def project(setup: ProjectionSetup, Z):
    """Image of a point or zero-cycle; reports degree and height bookkeeping."""
    if isinstance(Z, ProjectivePoint):
        Z = EffectiveCycle.of(Z)
    if Z.divisors():
        raise BadInput("only zero-cycles can be projected")
    comps = [(m, setup.image(p)) for m, p in Z.points()]
    img = EffectiveCycle(tuple(comps))
    hb = ha = ok = None
    if all(p.exact is not None for _, p in Z.points()) and setup.coordinate:
        hb = sum(m * point_height(p).value for m, p in Z.points())
        ha = sum(m * point_height(p).value for m, p in img.points())
        ok = exact_height_le(img, Z)
    return img, ProjectionReport(Z.degree(), img.degree(), hb, ha, ok)


def exact_height_le(img: EffectiveCycle, Z: EffectiveCycle) -> bool:
    """Compare sum m log||a|| exactly through products of integer squared norms."""
    def prod_sq(C):
        out = 1
        for m, p in C.points():
            a = primitive_integer_vector(p.exact)
            out *= sum(v * v for v in a) ** m
        return out

    return prod_sq(img) <= prod_sq(Z)


def contraction_margin(setup: ProjectionSetup, x: ProjectivePoint, y: ProjectivePoint) -> float:
    """log|x,y| - log|x,P(W)| - log|y,P(W)| - log|pi x, pi y| (>= 0 expected)."""
    dx = setup.check_center(x)
    dy = setup.check_center(y)
    px = ProjectivePoint(setup.image_coords(x), x.precision_bits)
    py = ProjectivePoint(setup.image_coords(y), y.precision_bits)
    with mpmath.workprec(x.precision_bits):
        dxy = fs_distance(x, y)
        dpi = fs_distance(px, py)
        if dpi == 0:
            return math.inf
        return float(mpmath.log(dxy) - mpmath.log(dx) - mpmath.log(dy) - mpmath.log(dpi))


@dataclass(frozen=True)
class PullbackReport:
    l2_shift: float
    shift_per_degree: float
    shift_ok: bool

    def to_json(self) -> dict:
        return {"l2_shift": self.l2_shift, "shift_per_degree": self.shift_per_degree,
                "shift_ok": self.shift_ok}


def pullback_section(f: HomogeneousPolynomial, setup: ProjectionSetup, c: float = 1.0):
    """f*(x) = f(pi x) for a coordinate projection, with the L2 shift report."""
    if not setup.coordinate:
        raise BadInput("pullback is implemented for coordinate projections")
    n = setup.W.ambient
    if f.num_vars != len(setup.kept):
        raise BadInput("section lives on the wrong projective space")
    fstar = f.embed(n, setup.kept)
    shift = log_l2_norm(fstar) - log_l2_norm(f)
    D = max(f.degree, 1)
    return fstar, PullbackReport(shift, shift / D, abs(shift) <= c * D + 1e-12)


def pullback_derivative_check(f: HomogeneousPolynomial, setup: ProjectionSetup, theta: ProjectivePoint,
                              S: int) -> tuple[float, float]:
    """(sup log|d^I f*(theta)|, sup log|d^I f(pi theta)|) in affine x_0-charts."""
    from .derivations import sup_log_derivative

    fstar, _ = pullback_section(f, setup)
    n = setup.W.ambient
    if setup.kept[0] != 0:
        raise BadInput("the projection must keep x0")
    up = sup_log_derivative(fstar, VarietyPresentation.full_space(n - 1), theta, S)
    down = sup_log_derivative(f, VarietyPresentation.full_space(len(setup.kept) - 1),
                              setup.image(theta), S)
    return up, down


# ---------------------------------------------------------------------------
# algebraic approximants


def parse_decimal(text: str):
    """(value, significant digits, exact Fraction or None) from a decimal or p/q string."""
    s = text.strip()
    if re.fullmatch(r"[+-]?\d+\s*/\s*\d+", s):
        q = Fraction(s.replace(" ", ""))
        return q, math.inf, q
    m = re.fullmatch(r"([+-]?)(\d*)\.?(\d*)(?:[eE]([+-]?\d+))?", s)
    if not m or not (m.group(2) or m.group(3)):
        raise BadInput(f"not a decimal number: {text!r}")
    digits = (m.group(2) + m.group(3)).lstrip("0")
    return s, len(digits), None


@dataclass(frozen=True)
class ApproximantResult:
    alpha: ProjectivePoint
    minpoly: tuple
    degree: int
    height: HeightValue
    log_distance: float | None
    exact: bool = False

    def to_json(self) -> dict:
        return {"minpoly": [str(c) for c in self.minpoly], "alpha": self.alpha.to_json(),
                "degree": self.degree, "height": self.height.value,
                "log_distance": "exact" if self.exact else self.log_distance}


def minpoly_cycle_height(coeffs: Sequence[int], prec: int = 256) -> float:
    """log|a_d| + sum log sqrt(1 + |beta_i|^2) over the roots of a primitive polynomial."""
    lead = abs(int(coeffs[0]))
    roots = poly_roots(coeffs, prec)
    with mpmath.workprec(prec):
        return math.log(lead) + float(sum(mpmath.log(mpmath.sqrt(1 + abs(r) ** 2)) for r in roots))


def _lattice_candidates(tau, d: int, digits: float, prec: int, log_scale: float | None = None):
    import sympy
    from sympy.polys.matrices import DomainMatrix

    with mpmath.workprec(prec):
        if log_scale is None:
            scale = mpmath.mpf(10) ** int(0.9 * digits)
        else:
            scale = mpmath.exp(min(log_scale, 0.9 * digits * math.log(10)))
        powers = [tau ** j for j in range(d + 1)]
        cplx = abs(mpmath.im(tau)) > mpmath.mpf(10) ** (-0.9 * digits)
        rows = []
        for j in range(d + 1):
            row = [0] * (d + 1)
            row[j] = 1
            row.append(int(mpmath.nint(scale * mpmath.re(powers[j]))))
            if cplx:
                row.append(int(mpmath.nint(scale * mpmath.im(powers[j]))))
            rows.append(row)
    dm = DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(sympy.ZZ)
    red = dm.lll().to_Matrix().tolist()
    return [[int(v) for v in r[:d + 1]] for r in red]


def _irreducible_factors(coeffs_low_to_high):
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** i for i, c in enumerate(coeffs_low_to_high))
    if expr == 0:
        return []
    _, facs = sympy.factor_list(expr)
    out = []
    for fac, _ in facs:
        p = sympy.Poly(fac, x)
        if p.degree() < 1:
            continue
        cs = [int(c) for c in p.all_coeffs()]
        if cs[0] < 0:
            cs = [-c for c in cs]
        g = math.gcd(*cs)
        out.append(tuple(c // g for c in cs))
    return out


def _poly_log_abs(coeffs, tau, prec):
    with mpmath.workprec(prec):
        v = mpmath.polyval([mpmath.mpf(c) for c in coeffs], tau)
        return float(mpmath.log(abs(v))) if v != 0 else -math.inf


def find_algebraic_approximant(theta, max_degree: int, max_height_log: float = 10.0,
                               digits: int | None = None) -> ApproximantResult:
    """Integer polynomial of degree <= max_degree nearly vanishing at theta.

    theta is a decimal string, an exact "p/q" string, an mpmath number or a
    point [1 : tau] of P^1. Lattice rows (e_j | round(C Re tau^j), round(C Im
    tau^j)) with C = 10^(0.9 digits) are LLL-reduced; every irreducible
    factor of every reduced row is a candidate. Among candidates whose root
    has cycle height <= max_height_log the one with the smallest |g(tau)|
    wins, ties going to smaller degree and then smaller height.
    """
    exact = None
    if isinstance(theta, str):
        val, ndig, exact = parse_decimal(theta)
        digits = digits or ndig
    elif isinstance(theta, ProjectivePoint):
        if theta.num_vars != 2:
            raise BadInput("approximants are searched on P^1; call per coordinate for M >= 2")
        if theta.exact is not None:
            if theta.exact[0] == 0:
                raise BadInput("point at infinity")
            exact = theta.exact[1] / theta.exact[0]
        val = None
        digits = digits or int(theta.precision_bits * math.log10(2))
    else:
        val = theta
        if digits is None:
            raise BadInput("digits must be given for numeric input")
    if exact is not None:
        alpha = ProjectivePoint.rational([1, exact])
        mp = (exact.denominator, -exact.numerator)
        return ApproximantResult(alpha, mp, 1, HeightValue(point_height(alpha).value, L2_WEIL), None, True)
    if digits < 40:
        raise PrecisionInsufficient(f"need at least 40 digits, got {digits}")
    if max_degree < 1:
        raise BadInput("max_degree must be positive")
    prec = int(digits * 3.33) + 64
    with mpmath.workprec(prec):
        if isinstance(theta, ProjectivePoint):
            tau = theta.coords[1] / theta.coords[0]
        elif isinstance(val, str):
            tau = mpmath.mpc(mpmath.mpf(val))
        else:
            tau = mpmath.mpc(val)
    seen = {}
    with mpmath.workprec(prec):
        cplx = abs(mpmath.im(tau)) > mpmath.mpf(10) ** (-0.9 * digits)
    for d in range(1, max_degree + 1):
        # full scale, then smaller scales whose short vectors fit the height bound
        scales = [None] + [(d + 1) * max_height_log * f / (2 if cplx else 1) for f in (1.0, 0.75, 0.5)]
        rows = [r for ls in scales for r in _lattice_candidates(tau, d, digits, prec, ls)]
        for row in rows:
            for fac in _irreducible_factors(row):
                if fac in seen:
                    continue
                h = minpoly_cycle_height(fac, prec)
                if h > max_height_log:
                    seen[fac] = None
                    continue
                seen[fac] = (_poly_log_abs(fac, tau, prec), len(fac) - 1, h)
    cands = [(v, fac) for fac, v in seen.items() if v is not None]
    if not cands:
        raise NoCandidate("no candidate within the height bound")
    floor = -0.9 * digits * math.log(10)
    # values below the precision floor are indistinguishable from zero
    cands.sort(key=lambda c: (max(c[0][0], floor), c[0][1], c[0][2]))
    (lv, deg, h), fac = cands[0]
    if deg == 1:
        alpha = ProjectivePoint.rational([1, Fraction(-fac[1], fac[0])], prec)
    else:
        alpha = _algebraic_point(fac, tau, prec)
    with mpmath.workprec(prec):
        dist = fs_distance(alpha, ProjectivePoint([1, tau], prec))
        log_dist = float(mpmath.log(dist)) if dist > 0 else floor
    return ApproximantResult(alpha, fac, deg, HeightValue(h, L2_WEIL), max(log_dist, floor))


def _algebraic_point(fac, tau, prec):
    if len(fac) - 1 <= 4:
        return ProjectivePoint.algebraic(fac, tau, prec)
    roots = poly_roots(fac, prec)
    with mpmath.workprec(prec):
        r = min(roots, key=lambda z: abs(z - tau))
    # degree beyond the stored-conjugate range: numerical point only
    return ProjectivePoint([1, r], prec)


@dataclass(frozen=True)
class ExponentCell:
    degree: int
    height_bound: float
    found_degree: int
    log_distance: float
    size: float
    exponent: float
    saturated: bool

    def to_json(self) -> dict:
        return {"D": self.degree, "H": self.height_bound, "found_degree": self.found_degree,
                "log_distance": self.log_distance, "size": self.size,
                "exponent": self.exponent, "saturated": self.saturated}


def approximation_exponent(theta, degree_schedule: Sequence[int], height_schedule: Sequence[float],
                           digits: int | None = None) -> list[ExponentCell]:
    """Empirical Mahler-type exponents -log|alpha, theta| / (t_{H/D}(alpha) D)."""
    if len(degree_schedule) != len(height_schedule):
        raise BadInput("degree and height schedules must have equal length")
    if isinstance(theta, str):
        _, ndig, _ = parse_decimal(theta)
        digits = digits or ndig
    floor = -0.9 * (digits or 0) * math.log(10)
    out = []
    for D, H in zip(degree_schedule, height_schedule):
        res = find_algebraic_approximant(theta, D, H, digits)
        size = (H / D) * res.degree + res.height.value
        ld = floor if res.exact else res.log_distance
        sat = res.exact or ld <= floor + 1e-9
        out.append(ExponentCell(D, H, res.degree, ld, size, -ld / (size * D), sat))
    return out
