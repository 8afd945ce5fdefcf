import numpy as np
import pytest

from diophant.derivations import VarietyPresentation
from diophant.errors import CommonComponent, RestrictionZero
from diophant.multiplicity import (check_local_bezout, generic_subspace_multiplicity,
                                   intersection_multiplicity_plane, multiplicity_chain,
                                   vanishing_from_derivatives, vanishing_order,
                                   weighted_vanishing_best)
from diophant.points import EffectiveCycle, ProjectivePoint
from diophant.polycore import HomogeneousPolynomial

from oracles import random_singular_curve, resultant_valuation

P = HomogeneousPolynomial.parse
R = ProjectivePoint.rational


def test_vanishing_order_examples():
    assert vanishing_order(P("x0 + x1", 2), R([1, 1])).order == 0
    assert vanishing_order(P("x0*x1^2 + x2^3", 3), R([1, 0, 0])).order == 2
    assert vanishing_order(P("(x1 - x0)^3", 2), R([1, 1])).order == 3


def test_vanishing_order_numeric_point():
    y = ProjectivePoint([1, 2 ** 0.5])
    # x1^2 - 2 x0^2 vanishes once at sqrt 2
    from diophant.points import poly_roots

    beta = max(poly_roots([1, 0, -2], 256), key=lambda z: z.real)
    assert vanishing_order(P("x1^2 - 2*x0^2", 2), ProjectivePoint([1, beta])).order == 1
    assert vanishing_order(P("x1 - x0", 2), y).order == 0


@pytest.mark.parametrize("f,g,y,expected", [
    ("x1", "x2", [1, 0, 0], 1),
    ("x0*x2 - x1^2", "x2", [1, 0, 0], 2),
    ("x0*x2^2 - x1^3", "x2", [1, 0, 0], 3),
])
def test_intersection_examples(f, g, y, expected):
    f, g = P(f, 3), P(g, 3)
    assert intersection_multiplicity_plane(f, g, R(y)).order == expected
    assert resultant_valuation(f, g, y) == expected


def test_common_component_rejected():
    with pytest.raises(CommonComponent):
        intersection_multiplicity_plane(P("x1*x2", 3), P("x1*(x0 + x2)", 3), R([1, 0, 0]))


def test_bezout_node_and_subspace_equality():
    node = P("x0*x2^2 - x1^2*x0 - x1^3", 3)
    smooth = P("x0*x2 - x1^2 - x0*x1", 3)
    rep = check_local_bezout(node, smooth, R([1, 0, 0]))
    assert rep.v_f == 2 and rep.v_g == 1 and rep.v_intersection >= 2 and rep.holds
    line = P("x2 - 3*x1", 3)
    rep = check_local_bezout(line, node, R([1, 0, 0]))
    assert rep.v_intersection == rep.v_g
    gen = generic_subspace_multiplicity(node, R([1, 0, 0]))
    assert gen.order == 2


def test_bezout_random_against_oracle():
    rng = np.random.default_rng(77)
    y = [1, 1, -2]
    for _ in range(4):
        f = random_singular_curve(rng, y, int(rng.integers(1, 4)), 4)
        g = random_singular_curve(rng, y, int(rng.integers(1, 3)), 3)
        try:
            ours = intersection_multiplicity_plane(f, g, R(y)).order
        except CommonComponent:
            continue
        assert ours == resultant_valuation(f, g, y)


def test_vanishing_from_derivatives():
    X = VarietyPresentation(2, 1, {2: P("x0*x2 - x1^2", 3)})
    rep = vanishing_from_derivatives(X, P("x2", 3), R([1, 0, 0]), 3)
    assert rep.certified_lower_bound == 2 and rep.cross_check == 2
    rep = vanishing_from_derivatives(X, P("x2 - 2*x1 + x0", 3), R([1, 1, 1]), 3)
    assert rep.certified_lower_bound == 2 and rep.cross_check == 2
    rep = vanishing_from_derivatives(X, P("x1 + x2", 3), R([1, 0, 0]), 2)
    assert rep.certified_lower_bound == 1 and rep.cross_check == 1
    rep = vanishing_from_derivatives(X, P("x0", 3), R([1, 0, 0]), 2)
    assert rep.certified_lower_bound == 0
    with pytest.raises(RestrictionZero):
        vanishing_from_derivatives(X, P("x0*x2 - x1^2", 3), R([1, 0, 0]), 1)


def test_multiplicity_chain():
    conic = VarietyPresentation(2, 1, {2: P("x0*x2 - x1^2", 3)})
    rep = multiplicity_chain(conic, [(P("x2", 3), 2)], R([1, 0, 0]))
    assert rep.product_bound == 2 and rep.oracle == 2
    plane = VarietyPresentation.full_space(2)
    rep = multiplicity_chain(plane, [], R([1, 0, 0]))
    assert rep.product_bound == 1
    rep = multiplicity_chain(plane, [(P("x1^2", 3), 2), (P("x2^2", 3), 2)], R([1, 0, 0]))
    assert rep.product_bound == 4 <= rep.oracle


def test_weighted_vanishing_choice():
    y = R([1, 0, 0])
    a, b = P("x1^2 + x2^2", 3), P("x1", 3)
    Z = EffectiveCycle.of(a, b)
    ch = weighted_vanishing_best(Z, y, 1.0, orders=[2, 1], sizes=[1.0, 4.0])
    assert ch.component == a
