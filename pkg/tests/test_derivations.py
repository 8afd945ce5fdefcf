from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy

from diophant.calibration import random_conic, random_cubic
from diophant.derivations import (VarietyPresentation, build_derivation_data, derivative_at,
                                  derivative_polynomial, eliminant, exact_affine_derivative,
                                  presentation_from_system, sample_points)
from diophant.errors import BadInput, DegenerateEliminant, PointOffVariety
from diophant.points import ProjectivePoint
from diophant.polycore import HomogeneousPolynomial

from oracles import chart_derivative_fd, eliminant_by_groebner

P = HomogeneousPolynomial.parse
PARABOLA = VarietyPresentation(2, 1, {2: P("x2^2 - x0*x1", 3)})
CIRCLE = VarietyPresentation(2, 1, {2: P("x1^2 + x2^2 - x0^2", 3)})


def test_eliminant_examples():
    assert eliminant([P("x2^2 - x0*x1", 3)], 2, 1) == P("x2^2 - x0*x1", 3)
    assert eliminant([P("x1^2 + x2^2 - x0^2", 3)], 2, 1) == P("x2^2 + x1^2 - x0^2", 3)


def test_eliminant_against_groebner():
    forms = [P("x0*x2 - x1^2", 4), P("x0^2*x3 - x1^3", 4)]
    for mu in (2, 3):
        ours = eliminant(forms, mu, 1)
        ref = HomogeneousPolynomial.from_sympy(eliminant_by_groebner(forms, mu, 1), 4).primitive()
        assert ours == ref or ours == -ref
    assert eliminant(forms, 2, 1) == P("x0*x2 - x1^2", 4)


def test_eliminant_random_pairs_against_groebner():
    rng = np.random.default_rng(21)
    from diophant.calibration import random_poly

    for _ in range(3):
        forms = [random_poly(rng, 4, 1, -3, 3), random_poly(rng, 4, 2, -2, 2)]
        ours = eliminant(forms, 3, 1)
        ref = HomogeneousPolynomial.from_sympy(eliminant_by_groebner(forms, 3, 1), 4).primitive()
        assert ours in (ref, -ref)


def test_presentation_validation():
    with pytest.raises(BadInput):
        VarietyPresentation(2, 1, {})
    with pytest.raises(DegenerateEliminant):
        VarietyPresentation(2, 1, {2: P("x0*x1", 3)})
    with pytest.raises(BadInput):
        VarietyPresentation(3, 1, {2: P("x2 - x3", 4), 3: P("x3 - x1", 4)})


def test_derivation_data_hand_values():
    d = build_derivation_data(PARABOLA)
    assert d.P == P("2*x2", 3)
    assert d.A_products[(1, 2)] == P("x0", 3)
    line = build_derivation_data(VarietyPresentation(2, 1, {2: P("x2 - x1", 3)}))
    assert line.P.degree == 0
    c = build_derivation_data(CIRCLE)
    assert c.P == P("2*x2", 3)
    assert c.A_products[(1, 2)] == P("-2*x1", 3)


def test_derivative_polynomial_examples():
    f = P("x2", 3)
    assert derivative_polynomial(f, (0,), PARABOLA) == f
    assert derivative_polynomial(f, (1,), PARABOLA) == P("x0", 3)


def test_derivative_at_parabola():
    th = ProjectivePoint.rational([1, 1, 1])
    assert complex(derivative_at(P("x2", 3), (1,), PARABOLA, th)) == pytest.approx(0.5)
    with pytest.raises(PointOffVariety):
        derivative_at(P("x2", 3), (1,), PARABOLA, ProjectivePoint.rational([1, 2, 1]))


def test_exact_derivatives_on_parabola():
    # z = sqrt(u): z' = 1/(2z), z'' = -1/(4 z^3), z''' = 3/(8 z^5) at u = 4, z = 2
    d = build_derivation_data(PARABOLA)
    pt = [Fraction(1), Fraction(4), Fraction(2)]
    f = P("x2", 3)
    assert exact_affine_derivative(d, f, (1,), pt) == Fraction(1, 4)
    assert exact_affine_derivative(d, f, (2,), pt) == Fraction(-1, 32)
    assert exact_affine_derivative(d, f, (3,), pt) == Fraction(3, 256)


@pytest.mark.parametrize("seed", [0, 1])
def test_finite_difference_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    X = random_conic(rng) if seed == 0 else random_cubic(rng)
    f = P("x0*x1 + 2*x2^2 - x1*x2", 3)
    for th in sample_points(X, rng, 3, 256):
        for S in range(1, 4):
            ours = derivative_at(f, (S,), X, th)
            ref = chart_derivative_fd(X, f, th, S)
            assert abs(ours - ref) <= mpmath.mpf(10) ** -20 * abs(ref)


def test_degree_bound_holds():
    rng = np.random.default_rng(5)
    X = random_cubic(rng)
    d = build_derivation_data(X)
    f = P("x0^2 - x1*x2", 3)
    for S in range(1, 5):
        assert derivative_polynomial(f, (S,), X).degree <= d.degree_bound(f, S)


def test_json_roundtrip():
    assert VarietyPresentation.from_json(CIRCLE.to_json()) == CIRCLE
