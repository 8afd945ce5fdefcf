import math

import mpmath
import pytest

from diophant.errors import PointOnDivisor
from diophant.metric import (algebraic_distance, cycle_distance, derivated_algebraic_distance,
                             fs_distance, min_distance_component, point_subspace_distance,
                             weighted_size)
from diophant.points import EffectiveCycle, ProjectivePoint
from diophant.polycore import HomogeneousPolynomial

P = HomogeneousPolynomial.parse
R = ProjectivePoint.rational


def test_fs_distance_examples():
    assert float(fs_distance(R([1, 0]), R([0, 1]))) == pytest.approx(1.0)
    assert float(fs_distance(R([3, 4]), R([6, 8]))) == pytest.approx(0.0, abs=1e-60)
    assert float(fs_distance(R([1, 1]), R([1, 0]))) == pytest.approx(1 / math.sqrt(2))


def test_fs_distance_is_sine_of_angle():
    x = ProjectivePoint([1, 2j, -1])
    y = ProjectivePoint([0.5, 1, 1 + 1j])
    with mpmath.workprec(256):
        ip = abs(sum(a * mpmath.conj(b) for a, b in zip(x.coords, y.coords)))
        cos2 = ip ** 2 / (x.norm() ** 2 * y.norm() ** 2)
        assert fs_distance(x, y) == pytest.approx(float(mpmath.sqrt(1 - cos2)), rel=1e-14)


def test_point_subspace_distance():
    W = [[1, 0, 0]]
    assert float(point_subspace_distance(R([1, 1, 0]), W)) == pytest.approx(1 / math.sqrt(2))
    assert float(point_subspace_distance(R([0, 2, 5]), W)) == pytest.approx(1.0)
    assert float(point_subspace_distance(R([4, 0, 0]), W)) == pytest.approx(0.0, abs=1e-60)


def test_algebraic_distance_examples():
    assert algebraic_distance(P("x0", 2), R([1, 0])).value == pytest.approx(0.5 * math.log(2))
    with pytest.raises(PointOnDivisor):
        algebraic_distance(P("x1", 2), R([1, 0]))
    f, th = P("x0^2 - 3*x1^2 + x0*x1", 2), R([2, 1])
    assert algebraic_distance(f.scale(7), th).value == pytest.approx(algebraic_distance(f, th).value)


def test_derivated_distance_examples():
    f, th = P("x0 + 3*x1", 2), R([1, 2])
    assert derivated_algebraic_distance(f, th, 0).value == pytest.approx(algebraic_distance(f, th).value)
    # F(z) = z^2 has second derivative 2, and |x1^2|^2 = 1! 2! / 3! = 1/3
    d = derivated_algebraic_distance(P("x1^2", 2), R([1, 0]), 2)
    assert d.value == pytest.approx(math.log(2) + 0.5 * math.log(3), abs=1e-12)


def test_derivated_distance_nondecreasing_in_S():
    f, th = P("x0^3 - 2*x1^3 + x0*x1*x2", 3), R([1, 1, 1])
    with pytest.raises(PointOnDivisor):
        derivated_algebraic_distance(f, th, 0)
    vals = [derivated_algebraic_distance(f, th, S).value for S in range(1, 5)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_cycle_distance_point_and_product():
    y, z, th = R([1, 1]), R([1, 3]), R([1, 2])
    d0 = cycle_distance(EffectiveCycle.of(y), th, 0).value
    assert d0 == pytest.approx(math.log(float(fs_distance(y, th))), abs=1e-12)
    both = cycle_distance(EffectiveCycle.of(y, z), th, 0).value
    assert both == pytest.approx(math.log(float(fs_distance(y, th))) + math.log(float(fs_distance(z, th))))


def test_cycle_distance_multiplicity_bound():
    y, th = R([1, 1]), R([1, 2])
    m, n, S = 2, 3, 1
    lhs = cycle_distance(EffectiveCycle.of((m * n, y)), th, S).value
    rhs = m * cycle_distance(EffectiveCycle.of((n, y)), th, n * S).value
    assert lhs <= rhs + 1e-9


def test_weighted_size_linear():
    a, b = R([1, 0]), R([2, 3])
    assert weighted_size(EffectiveCycle.of(a), 2.0) == pytest.approx(2.0)
    tot = weighted_size(EffectiveCycle.of(a, b), 1.5)
    assert tot == pytest.approx(weighted_size(EffectiveCycle.of(a), 1.5) + weighted_size(EffectiveCycle.of(b), 1.5))


def test_min_component_prefers_near_point():
    th = R([3, 1])
    near = R([3 * 10 ** 8, 10 ** 8 + 1])
    far = R([1, 2])
    for order in ((near, far), (far, near)):
        ch = min_distance_component(EffectiveCycle.of(*order), th, 0, 1.0)
        assert ch.component == near
