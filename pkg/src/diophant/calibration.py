"""Calibration suites for the unnamed constants and the random generators they use.

Each suite measures the constant an inequality needs on its own random
family and rounds it up to a grid. Acceptance runs draw from disjoint seeds.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np

from .derivations import DerivationData, VarietyPresentation, eliminant_height
from .heights import liouville_check
from .points import ProjectivePoint
from .polycore import HomogeneousPolynomial, log_l2_norm, monomials, polprod_bounds

CALIBRATION_SEED = 10_000
FLOOR = 0.05


def _ceil_grid(x: float, step: float = FLOOR) -> float:
    return round(max(FLOOR, math.ceil(x / step - 1e-9) * step), 10)


# ---------------------------------------------------------------------------
# generators


def random_poly(rng, num_vars: int, degree: int, lo: int = -9, hi: int = 9) -> HomogeneousPolynomial:
    while True:
        terms = {e: int(rng.integers(lo, hi + 1)) for e in monomials(num_vars, degree)}
        f = HomogeneousPolynomial(num_vars, degree, {e: c for e, c in terms.items() if c})
        if not f.is_zero():
            return f


def random_conic(rng, bound: int = 5) -> VarietyPresentation:
    """Irreducible conic with a nonzero x2^2 term, presented over (x0, x1)."""
    import sympy

    while True:
        f = random_poly(rng, 3, 2, -bound, bound)
        if f.coefficient((0, 0, 2)) == 0:
            continue
        _, facs = sympy.factor_list(f.to_sympy())
        if len(facs) != 1 or facs[0][1] != 1:
            continue
        # smooth: the partials have no common zero
        x = sympy.symbols("x0 x1 x2")
        grads = [sympy.diff(f.to_sympy(), v) for v in x]
        if sympy.Matrix([[sympy.Poly(g, *x).coeff_monomial(v) for v in x] for g in grads]).det() == 0:
            continue
        return VarietyPresentation(2, 1, {2: f.primitive()})


def random_cubic(rng, bound: int = 4) -> VarietyPresentation:
    import sympy

    while True:
        f = random_poly(rng, 3, 3, -bound, bound)
        if f.coefficient((0, 0, 3)) == 0:
            continue
        _, facs = sympy.factor_list(f.to_sympy())
        if len(facs) != 1 or facs[0][1] != 1:
            continue
        return VarietyPresentation(2, 1, {2: f.primitive()})


def random_irreducible(rng, degree: int, bound: int = 10) -> list[int]:
    import sympy

    x = sympy.Symbol("x")
    while True:
        cs = [int(rng.integers(-bound, bound + 1)) for _ in range(degree + 1)]
        if cs[0] == 0:
            continue
        p = sympy.Poly(cs, x)
        if p.is_irreducible and math.gcd(*cs) == 1:
            return cs if cs[0] > 0 else [-c for c in cs]


def random_algebraic_point(rng, max_degree: int = 4) -> ProjectivePoint:
    d = int(rng.integers(1, max_degree + 1))
    if d == 1:
        q = int(rng.integers(1, 20))
        return ProjectivePoint.rational([1, Fraction(int(rng.integers(-20, 21)), q)])
    mp = random_irreducible(rng, d)
    from .points import poly_roots

    roots = poly_roots(mp, 256)
    return ProjectivePoint.algebraic(mp, roots[int(rng.integers(len(roots)))])


def random_liouville_pair(rng):
    from .errors import PointOnDivisor

    while True:
        alpha = random_algebraic_point(rng)
        f = random_poly(rng, 2, int(rng.integers(1, 5)))
        try:
            liouville_check(f, alpha, 0.0)
        except PointOnDivisor:
            continue
        return f, alpha


# ---------------------------------------------------------------------------
# suites


def calibrate_polprod() -> dict:
    """Exhaustive over small cases: P^1 with D, D' <= 2 and P^2 linear forms, coefficients in {-1, 0, 1}."""
    need1 = need2 = -math.inf
    cases = 0
    for n, degs in ((2, (1, 2)), (3, (1,))):
        polys = {}
        for D in degs:
            mons = monomials(n, D)
            polys[D] = [HomogeneousPolynomial(n, D, {e: c for e, c in zip(mons, cs) if c})
                        for cs in product((-1, 0, 1), repeat=len(mons)) if any(cs)]
        for D in degs:
            for E in degs:
                for f in polys[D]:
                    for g in polys[E]:
                        r = polprod_bounds(f, g, 1.0, 1.0)
                        need1 = max(need1, r["needed_c1"])
                        need2 = max(need2, r["needed_c2"])
                        cases += 1
    return {"c1_polprod": _ceil_grid(need1), "c2_polprod": _ceil_grid(need2),
            "needed_c1": need1, "needed_c2": need2, "cases": cases}


def calibrate_liouville(n: int = 100, seed: int = CALIBRATION_SEED) -> dict:
    rng = np.random.default_rng(seed)
    need = -math.inf
    for _ in range(n):
        f, alpha = random_liouville_pair(rng)
        r = liouville_check(f, alpha, 0.0)
        # margin(d) = margin(0) + d D deg(alpha)
        need = max(need, -r.margin / (f.degree * alpha.field_degree))
    return {"d": _ceil_grid(need), "needed_d": need, "pairs": n}


def calibrate_subspace(n: int = 100, seed: int = CALIBRATION_SEED) -> dict:
    from .approx import find_avoiding_subspace

    rng = np.random.default_rng(seed)
    need = 0.0
    for i in range(n):
        X = random_conic(rng)
        res = find_avoiding_subspace(X, 2, c_bar=math.log(2), seed=seed + i)
        need = max(need, res.height / math.log(X.degree_bound))
    return {"c_tilde": _ceil_grid(need, 0.25), "needed_c_tilde": need, "c_bar": math.log(2),
            "conics": n}


def calibrate_derivations(n: int = 10, seed: int = CALIBRATION_SEED) -> dict:
    rng = np.random.default_rng(seed)
    need = -math.inf
    for i in range(n):
        X = random_conic(rng) if i % 2 == 0 else random_cubic(rng)
        data = DerivationData(X)
        h_x = eliminant_height(X, seed)
        need = max(need, (log_l2_norm(data.P) - h_x) / X.degree_bound)
    return {"c": _ceil_grid(need), "needed_c": need, "presentations": n}


def calibrate_hoch(max_degree: int = 10) -> dict:
    """Largest |L2 shift| / D of a form pulled back from P^t to P^M, M <= 4."""
    need = 0.0
    for M in range(1, 5):
        for t in range(1, M):
            for D in range(1, max_degree + 1):
                shift = 0.5 * (math.lgamma(M + 1) + math.lgamma(D + t + 1)
                               - math.lgamma(t + 1) - math.lgamma(D + M + 1))
                need = max(need, abs(shift) / D)
    return {"c_hoch": _ceil_grid(need), "needed_c_hoch": need}


def run_calibration(seed: int = CALIBRATION_SEED) -> dict:
    suites = {
        "polprod": calibrate_polprod(),
        "liouville": calibrate_liouville(seed=seed),
        "subspace": calibrate_subspace(seed=seed),
        "derivations": calibrate_derivations(seed=seed),
        "hoch": calibrate_hoch(),
    }
    constants = {
        "c": suites["derivations"]["c"],
        "c_bar": suites["subspace"]["c_bar"],
        "c_tilde": suites["subspace"]["c_tilde"],
        "d": suites["liouville"]["d"],
        "c1_polprod": suites["polprod"]["c1_polprod"],
        "c2_polprod": suites["polprod"]["c2_polprod"],
        "c_hoch": suites["hoch"]["c_hoch"],
        # structural window and selection constants, not fitted
        "c1": 1.0,
        "b": 11.0,
        "n": 1.0,
        "c_component": 1.0,
    }
    return {"constants": constants, "suites": suites, "seed": seed}
