"""Truncated multivariate power series with mpmath coefficients.

A series is a dict mapping exponent tuples to mpc values; every operation
takes an ``order`` and drops terms of total degree above it.
"""
from __future__ import annotations

import mpmath

Series = dict


def constant(nvars: int, c) -> Series:
    return {(0,) * nvars: mpmath.mpc(c)}


def add(a: Series, b: Series, scale_b=1) -> Series:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + scale_b * c
    return out


def scale(a: Series, c) -> Series:
    return {e: c * v for e, v in a.items()}


def mul(a: Series, b: Series, order: int) -> Series:
    out: Series = {}
    bb = [(e, c, sum(e)) for e, c in b.items()]
    for ea, ca in a.items():
        da = sum(ea)
        if da > order:
            continue
        for eb, cb, db in bb:
            if da + db > order:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return out


def truncate(a: Series, order: int) -> Series:
    return {e: c for e, c in a.items() if sum(e) <= order}


def _split(a: Series, nvars: int):
    zero = (0,) * nvars
    c0 = a.get(zero, mpmath.mpc(0))
    rest = {e: c for e, c in a.items() if e != zero}
    return c0, rest


def log(a: Series, nvars: int, order: int) -> Series:
    """log of a series with nonzero constant term (principal branch at 0)."""
    c0, r = _split(a, nvars)
    if c0 == 0:
        raise ZeroDivisionError("log of a series vanishing at the origin")
    u = scale(r, 1 / c0)
    out = constant(nvars, mpmath.log(c0))
    term = constant(nvars, 1)
    for k in range(1, order + 1):
        term = mul(term, u, order)
        out = add(out, term, mpmath.mpf((-1) ** (k + 1)) / k)
    return out


def exp(a: Series, nvars: int, order: int) -> Series:
    c0, r = _split(a, nvars)
    out = constant(nvars, 1)
    term = constant(nvars, 1)
    for k in range(1, order + 1):
        term = scale(mul(term, r, order), mpmath.mpf(1) / k)
        out = add(out, term)
    return scale(out, mpmath.exp(c0))


def power(a: Series, p, nvars: int, order: int) -> Series:
    """a**p for real p via the binomial series; needs a nonzero constant term."""
    c0, r = _split(a, nvars)
    if c0 == 0:
        raise ZeroDivisionError("non-integer power of a series vanishing at the origin")
    u = scale(r, 1 / c0)
    out = constant(nvars, 1)
    term = constant(nvars, 1)
    coef = mpmath.mpf(1)
    for k in range(1, order + 1):
        term = mul(term, u, order)
        coef = coef * (p - k + 1) / k
        if coef == 0:
            break
        out = add(out, term, coef)
    return scale(out, mpmath.power(c0, p))


def substitute_linear(terms, matrix, nvars_out: int, keep_first: int | None = None,
                      order: int | None = None) -> Series:
    """Expand sum c_a prod_i (sum_j matrix[i][j] w_j)^{a_i} as a polynomial in w.

    ``terms`` is an iterable of (exponent, coefficient). When ``order`` is
    given, monomials whose degree in w_1..w_{n-1} exceeds it are dropped, which
    is the truncation needed for Taylor coefficients of a dehomogenized form in
    the chart w_0 = 1.
    """
    nin = len(matrix)
    lin = []
    for i in range(nin):
        row = {}
        for j in range(nvars_out):
            c = matrix[i][j]
            if c != 0:
                e = [0] * nvars_out
                e[j] = 1
                row[tuple(e)] = mpmath.mpc(c)
        lin.append(row)

    def tail(e):
        return sum(e) - e[0]

    def tmul(a, b):
        out = {}
        for ea, ca in a.items():
            ta = tail(ea)
            for eb, cb in b.items():
                if order is not None and ta + tail(eb) > order:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return out

    cache = {}

    def pw(i, k):
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = {(0,) * nvars_out: mpmath.mpc(1)}
            else:
                cache[key] = tmul(pw(i, k - 1), lin[i])
        return cache[key]

    out: Series = {}
    for exp, c in terms:
        m = {(0,) * nvars_out: mpmath.mpc(c.numerator) / c.denominator
             if hasattr(c, "denominator") else mpmath.mpc(c)}
        for i, k in enumerate(exp):
            if k:
                m = tmul(m, pw(i, k))
        for e, v in m.items():
            out[e] = out.get(e, 0) + v
    return out
