import math

import pytest

from diophant.errors import PointOnDivisor
from diophant.heights import (cycle_height, divisor_height, liouville_check, point_height,
                              sigma)
from diophant.points import EffectiveCycle, ProjectivePoint
from diophant.polycore import HomogeneousPolynomial, log_l2_norm

P = HomogeneousPolynomial.parse
R = ProjectivePoint.rational


@pytest.mark.parametrize("coords,expected", [([1, 0], 0.0), ([1, 1], 0.5 * math.log(2)),
                                             ([2, 3], 0.5 * math.log(13)),
                                             ([4, 6], 0.5 * math.log(13))])
def test_point_height(coords, expected):
    assert point_height(R(coords)).value == pytest.approx(expected, abs=1e-15)


def test_sigma_one():
    assert sigma(1) == pytest.approx(0.5)


def test_divisor_height_linear():
    h = divisor_height(P("x0", 2), samples=200_000)
    assert abs(h.value) <= h.error_radius


def test_divisor_height_square_doubles():
    f = P("x0 + 2*x1", 2)
    h1 = divisor_height(f, samples=100_000, seed=1)
    h2 = divisor_height(f * f, samples=100_000, seed=1)
    assert abs(h2.value - 2 * h1.value) <= 2 * h1.error_radius + h2.error_radius


def test_divisor_height_upper_bound():
    for text in ("3*x0^2 - x1^2 + x0*x1", "x0 - 7*x1", "x0^3 + 2*x1^3 - 5*x0*x1^2"):
        f = P(text, 2)
        h = divisor_height(f, samples=50_000)
        assert h.value - h.error_radius <= log_l2_norm(f) + f.degree * sigma(1)


def test_cycle_height_sums():
    Z = EffectiveCycle.of(R([1, 1]), R([2, 3]))
    assert cycle_height(Z).value == pytest.approx(0.5 * (math.log(2) + math.log(13)))
    assert cycle_height(EffectiveCycle.of((3, R([1, 0])))).value == 0.0
    assert cycle_height(EffectiveCycle.of()).value == 0.0


def test_liouville_examples():
    with pytest.raises(PointOnDivisor):
        liouville_check(P("x1 - x0", 2), R([1, 1]), math.log(2))
    r = liouville_check(P("x1 - 2*x0", 2), R([1, 1]), math.log(2))
    assert r.holds and r.margin >= 0
    r3 = liouville_check(P("3*x1 - 6*x0", 2), R([1, 1]), math.log(2))
    assert r3.margin == pytest.approx(r.margin, abs=1e-12)


def test_liouville_algebraic_point():
    from diophant.points import poly_roots

    beta = max(poly_roots([1, 0, -2], 256), key=lambda z: z.real)
    alpha = ProjectivePoint.algebraic([1, 0, -2], beta)
    r = liouville_check(P("x1^2 - 3*x0*x1 + x0^2", 2), alpha, 0.05)
    assert r.holds
