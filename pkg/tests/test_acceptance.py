"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Seeds here are disjoint from the calibration seed (10000).
"""
import math
import time

import mpmath
import numpy as np
import sympy

from diophant.approx import (ProjectionSetup, IntegralSubspace, contraction_margin,
                             find_algebraic_approximant, find_avoiding_subspace, project,
                             sample_array)
from diophant.calibration import (random_conic, random_cubic, random_irreducible,
                                  random_liouville_pair, random_poly)
from diophant.config import shipped_calibration
from diophant.criteria import (FAILED, HOLD, GrowthQuadruple, check_growth_calculus,
                               check_hypotheses_algind1, growth_exponent,
                               sufficiently_approximating)
from diophant.derivations import derivative_at, derivative_polynomial, sample_points
from diophant.errors import BadInput, CommonComponent, MeetsCenter, PointOnDivisor
from diophant.heights import liouville_check
from diophant.instances import (degree_violation, derivative_violation, liouville_instance,
                                norm_violation)
from diophant.multiplicity import intersection_multiplicity_plane, vanishing_order
from diophant.points import EffectiveCycle, ProjectivePoint, poly_roots
from diophant.polycore import HomogeneousPolynomial, normrel_sandwich

from oracles import chart_derivative_fd, random_singular_curve, resultant_valuation

CONST = shipped_calibration()["constants"]


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_c1_normrel_sandwich(capsys):
    rng = np.random.default_rng(20001)
    t0 = time.perf_counter()
    bad = []
    for i in range(200):
        M = int(rng.integers(1, 4))
        D = int(rng.integers(1, 7))
        f = random_poly(rng, M + 1, D)
        r = normrel_sandwich(f, seed=20001 + i)
        if not r["ok"]:
            bad.append((str(f), r["checks"]))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    report(capsys, 1, ok, f"normrel sandwich, {len(bad)}/200 violations, {dt:.1f}s")
    assert not bad, bad[:3]
    assert dt < 60


def test_c2_derivation_recursion(capsys):
    rng = np.random.default_rng(20002)
    t0 = time.perf_counter()
    deg_bad = fd_bad = 0
    worst = 0.0
    for i in range(20):
        X = random_conic(rng) if i % 2 == 0 else random_cubic(rng)
        M, t, dX = X.num_vars - 1, X.rel_dim, X.degree_bound
        f = random_poly(rng, 3, int(rng.integers(1, 4)), -5, 5)
        for S in range(1, 5):
            fI = derivative_polynomial(f, (S,), X)
            if fI.degree > f.degree + (2 * S - 1) * (M - t) * dX:
                deg_bad += 1
        for th in sample_points(X, rng, 10, 256):
            for S in range(1, 5):
                with mpmath.workprec(256):
                    ours = derivative_at(f, (S,), X, th)
                    ref = chart_derivative_fd(X, f, th, S)
                    rel = abs(ours - ref) / abs(ref) if ref != 0 else abs(ours)
                worst = max(worst, float(rel))
                if rel > mpmath.mpf(10) ** -20:
                    fd_bad += 1
    dt = time.perf_counter() - t0
    ok = deg_bad == 0 and fd_bad == 0 and dt < 120
    report(capsys, 2, ok, f"derivations, degree violations {deg_bad}, FD mismatches {fd_bad}, "
                          f"worst rel err {worst:.1e}, {dt:.1f}s")
    assert deg_bad == 0 and fd_bad == 0
    assert dt < 120


def _tangent_cone(g, a, b):
    X, Y = sympy.symbols("X Y")
    x0, x1, x2 = sympy.symbols("x0:3")
    G = sympy.Poly(sympy.expand(g.to_sympy().subs({x0: 1, x1: X + a, x2: Y + b})), X, Y)
    m = min(sum(e) for e in G.monoms())
    return {e: c for e, c in zip(G.monoms(), G.coeffs()) if sum(e) == m}


def test_c3_local_bezout(capsys):
    rng = np.random.default_rng(20003)
    pairs = violations = mismatches = sub_bad = 0
    while pairs < 100:
        y = [1, int(rng.integers(-2, 3)), int(rng.integers(-2, 3))]
        m1, m2 = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        f = random_singular_curve(rng, y, m1, int(rng.integers(max(m1, 2), 5)))
        g = random_singular_curve(rng, y, m2, int(rng.integers(max(m2, 2), 4)))
        try:
            vi = resultant_valuation(f, g, y)
        except ValueError:
            continue
        pairs += 1
        yp = ProjectivePoint.rational(y)
        vf, vg = vanishing_order(f, yp).order, vanishing_order(g, yp).order
        if vi < vf * vg:
            violations += 1
        try:
            if intersection_multiplicity_plane(f, g, yp).order != vi:
                mismatches += 1
        except CommonComponent:
            mismatches += 1
        # a line through y off the tangent cone of g meets it with multiplicity v(g)
        cone = _tangent_cone(g, y[1], y[2])
        while True:
            p, q = int(rng.integers(-6, 7)), int(rng.integers(-6, 7))
            if (p, q) != (0, 0) and sum(c * p ** e[0] * q ** e[1] for e, c in cone.items()) != 0:
                break
        # direction (p, q) in the (x1, x2) chart: q (x1 - a x0) - p (x2 - b x0)
        line = HomogeneousPolynomial(3, 1, {(1, 0, 0): -q * y[1] + p * y[2], (0, 1, 0): q,
                                            (0, 0, 1): -p})
        line = HomogeneousPolynomial(3, 1, {e: c for e, c in line.items() if c})
        if resultant_valuation(line, g, y) != vg:
            sub_bad += 1
    ok = violations == 0 and mismatches == 0 and sub_bad == 0
    report(capsys, 3, ok, f"local Bezout on {pairs} pairs, violations {violations}, "
                          f"implementation/oracle mismatches {mismatches}, subspace inequalities {sub_bad}")
    assert violations == 0 and mismatches == 0 and sub_bad == 0


def test_c4_liouville(capsys):
    rng = np.random.default_rng(20004)
    d = CONST["d"]
    margins = []
    for _ in range(100):
        f, alpha = random_liouville_pair(rng)
        margins.append(liouville_check(f, alpha, d).margin)
    low = min(margins)
    ok = low >= 0
    report(capsys, 4, ok, f"Liouville with calibrated d={d}, min margin {low:.4f} on 100 pairs")
    assert ok


def _real_minpoly(rng):
    while True:
        deg = int(rng.integers(1, 5))
        mp = random_irreducible(rng, deg, 100)
        real = [r for r in poly_roots(mp, 512) if abs(mpmath.im(r)) < mpmath.mpf(2) ** -400]
        if real:
            return mp, mpmath.re(real[int(rng.integers(len(real)))])


def test_c5_approximant_search(capsys):
    rng = np.random.default_rng(20005)
    d = CONST["d"]
    recovered = slow = liou_bad = 0
    worst = 0.0
    for _ in range(50):
        mp, root = _real_minpoly(rng)
        with mpmath.workprec(512):
            eps = mpmath.mpf(float(rng.uniform(-1, 1))) * mpmath.mpf(10) ** -58
            theta = mpmath.nstr(root * (1 + eps), 60, strip_zeros=False)
        t0 = time.perf_counter()
        res = find_algebraic_approximant(theta, 4)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        slow += dt >= 1.0
        got = list(res.minpoly)
        if got == mp or got == [-c for c in mp]:
            recovered += 1
        while True:
            f = random_poly(rng, 2, int(rng.integers(1, 4)))
            try:
                if liouville_check(f, res.alpha, d).margin < 0:
                    liou_bad += 1
                break
            except PointOnDivisor:
                continue
    ok = recovered >= 48 and slow == 0 and liou_bad == 0
    report(capsys, 5, ok, f"approximants recovered {recovered}/50, slowest {worst:.2f}s, "
                          f"Liouville failures {liou_bad}")
    assert recovered >= 48
    assert slow == 0
    assert liou_bad == 0


def test_c6_projection(capsys):
    rng = np.random.default_rng(20006)
    h_bad = 0
    for _ in range(100):
        n = int(rng.integers(3, 5))
        drop = sorted(rng.choice(n, size=int(rng.integers(1, n - 1)), replace=False).tolist())
        setup = ProjectionSetup.dropping(n, drop)
        comps = []
        while len(comps) < int(rng.integers(1, 4)):
            v = [int(c) for c in rng.integers(-30, 31, size=n)]
            if all(v[i] == 0 for i in range(n) if i not in drop) or math.gcd(*v) != 1:
                continue
            comps.append((int(rng.integers(1, 4)), ProjectivePoint.rational(v)))
        _, rep = project(setup, EffectiveCycle(tuple(comps)))
        if not rep.height_ok:
            h_bad += 1
    prec = 256
    radius = 2.0 ** (-prec / 2)
    c_bad = 0
    worst = math.inf
    for i in range(200):
        n = int(rng.integers(3, 6))
        k = int(rng.integers(1, n - 1))
        while True:
            basis = tuple(tuple(int(c) for c in rng.integers(-3, 4, size=n)) for _ in range(k))
            try:
                W = IntegralSubspace(basis)
                break
            except BadInput:
                continue
        setup = ProjectionSetup(W)
        x = ProjectivePoint(list(rng.normal(size=n) + 1j * rng.normal(size=n)), prec)
        y = ProjectivePoint(list(rng.normal(size=n) + 1j * rng.normal(size=n)), prec)
        try:
            m = contraction_margin(setup, x, y)
        except MeetsCenter:
            continue
        worst = min(worst, m)
        if m < -radius:
            c_bad += 1
    ok = h_bad == 0 and c_bad == 0
    report(capsys, 6, ok, f"projection, height violations {h_bad}/100, contraction violations "
                          f"{c_bad}/200, min margin {worst:.3e}")
    assert h_bad == 0 and c_bad == 0


def _growth_pairs(seed=2024, n=50):
    rng = np.random.default_rng(seed)
    exps = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0]
    pairs = []
    for i in range(n):
        a, b = rng.choice(exps), rng.choice(exps)
        c0, c1, c2, c3 = rng.uniform(0.5, 3.0, size=4)
        if i % 2 == 0:
            pairs.append((lambda k, a=a, c=c0: c * k ** a, lambda k, b=b, c=c2: c * k ** b))
        else:
            pairs.append((lambda k, a=a, c0=c0, c1=c1: c0 * k ** a + c1 * k ** (a - 1),
                          lambda k, b=b, c2=c2, c3=c3: c2 * k ** b + c3))
    return pairs


def test_c7_growth_calculus(capsys):
    K = np.arange(1, 10_001, dtype=float)
    err = max(abs(growth_exponent(K ** a).value - a) for a in (0.5, 1, 1.5, 2, 2.5, 3))
    rep = check_growth_calculus(_growth_pairs())
    failed = [(i, c["rule"]) for i, p in enumerate(rep["pairs"]) for c in p["checks"] if not c["ok"]]
    rules = {c["rule"] for c in rep["pairs"][0]["checks"]}
    need = {"sum", "product", "quotient", "composition", "inverse"}
    ok = err <= 0.05 and not failed and need <= rules
    report(capsys, 7, ok, f"growth calculus, pure-power error {err:.4f}, "
                          f"closure failures {len(failed)} on 50 pairs")
    assert err <= 0.05
    assert need <= rules
    assert not failed, failed[:5]


def test_c8_criterion_harness(capsys):
    inst = liouville_instance()
    pos = check_hypotheses_algind1(inst, seed=20008)
    pos_ok = pos.verdict == HOLD and pos.asserted_bound == "t >= 1" and inst.X.rel_dim == 1
    neg = {}
    for make, reason in ((degree_violation, "degree"), (norm_violation, "norm"),
                         (derivative_violation, "derivative-bound")):
        r = check_hypotheses_algind1(make(inst), seed=20008)
        neg[reason] = (r.verdict, r.failed_k, r.failed_reason) == (FAILED, 2, reason)
    # the predicate divides by S_k, so it is run on the unit-S variant of the quadruple
    q = inst.quadruple
    q1 = GrowthQuadruple(q.D, (1,) * len(q), q.H, q.V)
    near = ProjectivePoint.rational([10 ** 8, 10 ** 7 + 1])
    runs = [sufficiently_approximating(near, 2, 1, q1, inst.theta, 1, seed=20008).to_json()
            for _ in range(2)]
    same = runs[0] == runs[1]
    ok = pos_ok and all(neg.values()) and same
    report(capsys, 8, ok, f"harness, positive {pos.verdict}/{pos.asserted_bound}, negatives "
                          f"{neg}, predicate bit-identical {same}")
    assert pos_ok
    assert all(neg.values()), neg
    assert same


def test_c9_avoiding_subspace(capsys):
    rng = np.random.default_rng(20009)
    c_bar, c_tilde = CONST["c_bar"], CONST["c_tilde"]
    dist_bad = h_bad = slow = 0
    worst = 0.0
    for i in range(10):
        X = random_conic(rng)
        t0 = time.perf_counter()
        res = find_avoiding_subspace(X, 2, c_bar=c_bar, c_tilde=c_tilde, seed=20009 + i)
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        slow += dt >= 30
        w = np.array(res.subspace.basis[0], dtype=float)
        w /= np.linalg.norm(w)
        pts = sample_array(X, np.random.default_rng(30009 + i), 10_000)
        # chordal distance between [w] and each sampled point
        d = np.sqrt(np.clip(1 - np.abs(pts @ w) ** 2, 0, None)).min()
        if d < res.threshold:
            dist_bad += 1
        if res.height > c_tilde * math.log(X.degree_bound) + 1e-12:
            h_bad += 1
    ok = dist_bad == 0 and h_bad == 0 and slow == 0
    report(capsys, 9, ok, f"avoiding point on 10 conics, distance failures {dist_bad}, "
                          f"height failures {h_bad}, slowest {worst:.1f}s")
    assert dist_bad == 0 and h_bad == 0 and slow == 0
