"""Independent reference computations used by several test modules."""
import math

import mpmath
import numpy as np
import sympy


def chart_derivative_fd(X, f, theta, S, prec=256):
    """d^S/du^S of f/x0^D along a plane curve, u = x1/x0, by finite differences.

    The fiber coordinate z(u) is followed with Newton's method on the
    eliminant, so nothing from the derivation calculus is reused.
    """
    (mu, p), = X.eliminants.items()
    x = sympy.symbols("x0:3")
    u, z = sympy.symbols("u z")
    pe = sympy.lambdify((u, z), p.to_sympy().subs({x[0]: 1, x[1]: u, x[mu]: z}), "mpmath")
    dpe = sympy.lambdify((u, z), sympy.diff(p.to_sympy(), x[mu]).subs({x[0]: 1, x[1]: u, x[mu]: z}),
                         "mpmath")
    fe = sympy.lambdify((u, z), f.to_sympy().subs({x[0]: 1, x[1]: u, x[mu]: z}), "mpmath")
    with mpmath.workprec(2 * prec):
        u0 = theta.coords[1] / theta.coords[0]
        z0 = theta.coords[mu] / theta.coords[0]

        def F(uu):
            zz = z0
            for _ in range(200):
                step = pe(uu, zz) / dpe(uu, zz)
                zz -= step
                if abs(step) < mpmath.mpf(2) ** (-2 * prec):
                    break
            return fe(uu, zz)

        h = mpmath.mpf(2) ** (-prec // 4)
        return mpmath.diff(F, u0, S, h=h)


def eliminant_by_groebner(forms, mu, t):
    """Generator of the elimination ideal in x_0..x_t, x_mu from a lex Groebner basis."""
    n = forms[0].num_vars
    x = sympy.symbols(f"x0:{n}")
    keep = list(range(t + 1)) + [mu]
    drop = [x[i] for i in range(n) if i not in keep]
    gens = drop + [x[i] for i in keep]
    G = sympy.groebner([f.to_sympy() for f in forms], *gens, order="lex")
    elim = [g for g in G.exprs if not (set(g.free_symbols) & set(drop))]
    g = elim[0]
    for h in elim[1:]:
        g = sympy.gcd(g, h)
    # clear factors that live purely on the base (vertical components)
    _, facs = sympy.factor_list(g, *x)
    kept = [fac for fac, _ in facs if sympy.degree(fac, x[mu]) > 0]
    return sympy.Mul(*kept)


def exhaustive_conic_distance(X, bound=20, samples=4000, seed=0):
    """Best point of P^2 with primitive integer entries <= bound, scored
    by its distance to a dense sample of the conic."""
    from diophant.approx import sample_array

    rng = np.random.default_rng(seed)
    pts = sample_array(X, rng, samples)
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    r = np.arange(-bound, bound + 1)
    V = np.array(np.meshgrid(r, r, r, indexing="ij")).reshape(3, -1).T
    g = np.gcd(np.gcd(V[:, 0], V[:, 1]), V[:, 2])
    V = V[g == 1]
    U = V / np.linalg.norm(V, axis=1, keepdims=True)
    best = np.empty(len(U))
    for lo in range(0, len(U), 2048):
        ip = np.abs(U[lo:lo + 2048] @ pts.conj().T) ** 2
        best[lo:lo + 2048] = np.sqrt(np.clip(1 - ip.max(axis=1), 0, None))
    i = int(best.argmax())
    return float(best[i]), tuple(int(v) for v in V[i])


def resultant_valuation(f, g, y):
    """Intersection multiplicity at an affine rational point y = (1, a, b)
    by the textbook route: translate, generic shear, resultant in x2, and
    the x1-adic valuation of the result."""
    x0, x1, x2 = sympy.symbols("x0:3")
    a, b = sympy.Rational(y[1]) / y[0], sympy.Rational(y[2]) / y[0]
    X, Y = sympy.symbols("X Y")
    F = f.to_sympy().subs({x0: 1, x1: X + a, x2: Y + b})
    G = g.to_sympy().subs({x0: 1, x1: X + a, x2: Y + b})
    vals = []
    # another intersection on the line X = 0 inflates one shear, not all of them
    for lam in (3, 5, 7, 11):
        Fs = sympy.expand(F.subs(X, X + lam * Y))
        Gs = sympy.expand(G.subs(X, X + lam * Y))
        r = sympy.Poly(sympy.resultant(Fs, Gs, Y), X)
        if r.is_zero:
            raise ValueError("common component")
        coeffs = r.all_coeffs()[::-1]
        vals.append(next(i for i, c in enumerate(coeffs) if c != 0))
    return min(vals)


def random_singular_curve(rng, y, m, D, bound=4):
    """Random plane curve of degree D with a point of multiplicity >= m at y = [1:a:b]."""
    from diophant.polycore import HomogeneousPolynomial

    x0, x1, x2 = sympy.symbols("x0:3")
    a, b = sympy.Rational(y[1]) / y[0], sympy.Rational(y[2]) / y[0]
    X, Y = x1 - a * x0, x2 - b * x0
    while True:
        expr = 0
        for k in range(m, D + 1):
            for i in range(k + 1):
                c = int(rng.integers(-bound, bound + 1))
                expr += c * X ** i * Y ** (k - i) * x0 ** (D - k)
        expr = sympy.expand(expr)
        if expr == 0:
            continue
        f = HomogeneousPolynomial.from_sympy(expr, 3)
        if f.degree == D:
            return f.primitive()
