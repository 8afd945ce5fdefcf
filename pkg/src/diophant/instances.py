"""Constructed criterion instances built from Liouville-style numbers.

For a_j = (j!)^r the number tau = sum_j 10^(-a_j) has the rational
approximations p_k/q_k = sum_{j <= k} 10^(-a_j) with q_k = 10^(a_k) and
|q_k tau - p_k| < 1.12 * 10^(a_k - a_{k+1}). Only finitely many terms fit
in memory, so tau is stored as the truncation after a_{K+1}, which agrees
with the infinite sum far beyond every checked approximation.
"""
from __future__ import annotations

import math
from dataclasses import replace
from fractions import Fraction

import mpmath

from .criteria import CriterionInstance, GrowthQuadruple
from .derivations import VarietyPresentation
from .points import ProjectivePoint
from .polycore import HomogeneousPolynomial

LN10 = math.log(10)


def exponents(r: int, n: int) -> list[int]:
    return [math.factorial(j) ** r for j in range(1, n + 1)]


def liouville_fraction(r: int, K: int, signs=None) -> Fraction:
    """sum_{j <= K} s_j 10^(-a_j) exactly."""
    a = exponents(r, K)
    signs = signs or [1] * K
    return sum((Fraction(s, 10 ** e) for s, e in zip(signs, a)), Fraction(0))


def _point(values, digits: int) -> ProjectivePoint:
    bits = int(digits * math.log2(10)) + 256
    with mpmath.workprec(bits):
        coords = [mpmath.mpf(1)] + [mpmath.mpf(v.numerator) / v.denominator for v in values]
    return ProjectivePoint(coords, bits)


def _linear(n: int, i: int, q: int, p: int) -> HomogeneousPolynomial:
    """q x_i - p x_0 in n variables."""
    terms = {}
    e = [0] * n
    e[i] = 1
    terms[tuple(e)] = Fraction(q)
    e0 = [0] * n
    e0[0] = 1
    terms[tuple(e0)] = Fraction(-p)
    return HomogeneousPolynomial(n, 1, terms)


def liouville_instance(r: int = 3, checked: int = 3, length: int = 16) -> CriterionInstance:
    """Positive first-criterion instance on P^1 with s = 0.

    F_k = {q_k x1 - p_k x0}, D_k = 1, S_k = 0, H_k = a_k log 10 + 1 and
    V_k = (a_{k+1} - a_k) log 10 - 1, so S_k^0 V_k / (D_k + H_k) grows like
    (k+1)^r. The constants 1 absorb log 1.12 and the L2 normalisation.
    """
    a = exponents(r, length + 1)
    K = checked + 1
    tau = liouville_fraction(r, K)
    # twice the digits of the last term, so alpha_K and theta differ above half precision
    theta = _point([tau], 2 * a[K - 1] + 64)
    D = [1] * length
    S = [0] * length
    H = [a[k] * LN10 + 1 for k in range(length)]
    V = [(a[k + 1] - a[k]) * LN10 - 1 for k in range(length)]
    fams = {}
    for k in range(1, checked + 1):
        q = 10 ** a[k - 1]
        p = int(liouville_fraction(r, k) * q)
        fams[k] = [_linear(2, 1, q, p)]
    g = HomogeneousPolynomial.variable(2, 0)
    return CriterionInstance(GrowthQuadruple(tuple(D), tuple(S), tuple(H), tuple(V)), theta,
                             VarietyPresentation.full_space(1), fams, g, 0)


def degree_violation(inst: CriterionInstance, k: int = 2) -> CriterionInstance:
    fams = dict(inst.families)
    fams[k] = fams[k] + [fams[k][0] * HomogeneousPolynomial.variable(inst.X.num_vars, 0)]
    return replace(inst, families=fams, strict=False)


def norm_violation(inst: CriterionInstance, k: int = 2) -> CriterionInstance:
    """Scale F_k by an integer big enough to push log|f| past H_k."""
    fams = dict(inst.families)
    H_k = inst.quadruple.at(k)[2]
    factor = 10 ** (int(H_k / LN10) + 2)
    fams[k] = [f.scale(factor) for f in fams[k]]
    return replace(inst, families=fams)


def derivative_violation(inst: CriterionInstance, k: int = 2) -> CriterionInstance:
    """Raise V_k one unit above the true derivative decay at theta."""
    from .derivations import sup_log_derivative

    true = max(sup_log_derivative(f, inst.X, inst.theta, inst.quadruple.at(k)[1], inst.g)
               for f in inst.families[k])
    q = inst.quadruple
    V = list(q.V)
    V[k - 1] = -true + 1.0
    return replace(inst, quadruple=GrowthQuadruple(q.D, q.S, q.H, tuple(V)))


def plane_instance(r: int = 5, checked: int = 2, length: int = 16) -> CriterionInstance:
    """Second-criterion instance on P^2 with s = 1.

    theta = [1 : tau_1 : tau_2] with tau_1 = sum 10^(-a_j) and
    tau_2 = sum (-1)^j 10^(-a_j); F_k holds the D_k-th powers of the two
    linear forms vanishing at the k-th approximations, whose divisors meet
    properly. D_k = 3k^2, S_k = k.
    """
    a = exponents(r, length + 1)
    K = checked + 1
    signs = [(-1) ** j for j in range(1, K + 1)]
    t1 = liouville_fraction(r, K)
    t2 = liouville_fraction(r, K, signs)
    D = [3 * k * k for k in range(1, length + 1)]
    S = list(range(1, length + 1))
    H, V = [], []
    for i in range(length):
        d, s = D[i], S[i]
        H.append(d * (a[i] * LN10 + 0.01) + 1)
        V.append((d - s) * (a[i + 1] - a[i]) * LN10 - s * (math.log(d) + a[i] * LN10 + 0.01) - 1)
    fams = {}
    for k in range(1, checked + 1):
        q = 10 ** a[k - 1]
        p1 = int(liouville_fraction(r, k) * q)
        p2 = int(liouville_fraction(r, k, signs[:k]) * q)
        fams[k] = [_linear(3, 1, q, p1) ** D[k - 1], _linear(3, 2, q, p2) ** D[k - 1]]
    # cancellation in the expanded powers needs about D_k (a_{k+1} - a_k) extra digits
    digits = max(D[k - 1] * a[k] for k in range(1, checked + 1)) + 2 * a[K - 1] + 64
    theta = _point([t1, t2], digits)
    cands = [ProjectivePoint.rational([9, 1, -1]), ProjectivePoint.rational([10, 1, 1])]
    g = HomogeneousPolynomial.variable(3, 0)
    return CriterionInstance(GrowthQuadruple(tuple(D), tuple(S), tuple(H), tuple(V)), theta,
                             VarietyPresentation.full_space(2), fams, g, 1, candidates=cands)
