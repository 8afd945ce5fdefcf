import math
from dataclasses import replace

import numpy as np
import pytest

from diophant.criteria import (FAILED, HOLD, INCONCLUSIVE, CriterionInstance, GrowthQuadruple,
                               check_growth_calculus, check_hypotheses_algind1,
                               check_hypotheses_algind2, check_regular_growth, criterion_limit,
                               growth_exponent, inverse_sequence, regularity_window,
                               sufficiently_approximating)
from diophant.errors import BadInput, NonPositive, NoWindow, TooFewSamples
from diophant.instances import (degree_violation, derivative_violation, liouville_instance,
                                norm_violation, plane_instance)
from diophant.points import ProjectivePoint

K = np.arange(1, 10_001, dtype=float)


@pytest.fixture(scope="module")
def positive():
    return liouville_instance()


@pytest.fixture(scope="module")
def plane():
    return plane_instance()


def quad(D, S, H, V, n=16):
    return GrowthQuadruple.from_functions(D, S, H, V, n)


def slope_oracle(vals):
    # plain least squares on log-log over the last decade
    k = np.arange(1, len(vals) + 1)
    sel = k >= len(vals) // 10
    return np.polyfit(np.log(k[sel]), np.log(vals[sel]), 1)[0]


@pytest.mark.parametrize("a", [0.5, 1, 2, 3])
def test_pure_powers(a):
    est = growth_exponent(K ** a)
    assert abs(est.value - a) <= 0.05


def test_bounded_and_composition():
    assert abs(growth_exponent(2 + np.sin(K) ** 2 / K).value) <= 0.05
    comp = growth_exponent((K ** 2) ** 3)
    assert comp.value == pytest.approx(slope_oracle((K ** 2) ** 3), abs=0.05)
    assert comp.value == pytest.approx(6.0, abs=0.05)


def test_growth_errors():
    with pytest.raises(TooFewSamples):
        growth_exponent([1.0] * 5)
    with pytest.raises(NonPositive):
        growth_exponent([1.0] * 20 + [0.0])


def test_product_and_inverse_against_oracle():
    fg = K ** 2 * K ** 3
    assert growth_exponent(fg).value == pytest.approx(slope_oracle(fg), abs=0.05)
    inv = inverse_sequence(K ** 2, 10_000)
    ref = np.ceil(np.sqrt(np.arange(1, 10_001)))
    np.testing.assert_array_equal(inv, ref)
    assert growth_exponent(inv).value == pytest.approx(0.5, abs=0.05)


def test_growth_calculus_rules():
    rep = check_growth_calculus([(lambda k: k ** 2, lambda k: k ** 3),
                                 (lambda k: k ** 1.5 + 3 * k, lambda k: np.sqrt(k) + 1)])
    assert rep["ok"], rep
    rules = {c["rule"] for c in rep["pairs"][0]["checks"]}
    assert {"sum", "product", "quotient", "composition", "inverse", "reciprocal"} <= rules


def test_order_consistency():
    rep = check_growth_calculus([(lambda k: k ** 3, lambda k: k ** 2)])
    assert rep["pairs"][0]["order_consistent"]


def test_quadruple_validation():
    with pytest.raises(BadInput):
        quad(lambda k: k, lambda k: k + 1, lambda k: k, lambda k: k)
    with pytest.raises(TooFewSamples):
        quad(lambda k: k, lambda k: 1, lambda k: k, lambda k: k, n=8)
    with pytest.raises(NonPositive):
        quad(lambda k: k, lambda k: 1, lambda k: -k, lambda k: k)
    q = quad(lambda k: k, lambda k: 1, lambda k: k, lambda k: k)
    assert GrowthQuadruple.from_json(q.to_json()) == q


def test_regular_growth_examples():
    ok, _ = check_regular_growth(quad(lambda k: k * k, lambda k: k, lambda k: k ** 3, lambda k: k ** 6))
    assert ok
    ok, rep = check_regular_growth(quad(lambda k: k, lambda k: k, lambda k: k ** 3, lambda k: k ** 6))
    assert not ok and any("D_k/3" in r for r in rep["reasons"])
    ok, rep = check_regular_growth(quad(lambda k: k ** 4, lambda k: k, lambda k: k ** 3, lambda k: k ** 6))
    assert not ok and any("H/D" in r for r in rep["reasons"])


def test_criterion_limit_examples():
    q = quad(lambda k: k, lambda k: k, lambda k: k, lambda k: k ** 3, n=40)
    lim = criterion_limit(q, 1)
    np.testing.assert_allclose(lim["values"], [k * k / 2 for k in range(1, 41)])
    assert lim["diverges"]
    q = quad(lambda k: k, lambda k: 1, lambda k: k, lambda k: 5)
    assert not criterion_limit(q, 0)["diverges"]
    q = quad(lambda k: k * k, lambda k: k, lambda k: k, lambda k: k ** 4)
    v1, v2 = criterion_limit(q, 1)["values"], criterion_limit(q, 2)["values"]
    for k, (a, b) in enumerate(zip(v1, v2), start=1):
        assert b == pytest.approx(a / k)


def test_positive_instance_holds(positive):
    rep = check_hypotheses_algind1(positive, seed=3)
    assert rep.verdict == HOLD
    assert rep.asserted_bound == "t >= 1"
    assert 1 <= positive.X.rel_dim
    assert not rep.notes


@pytest.mark.parametrize("make,reason", [(degree_violation, "degree"), (norm_violation, "norm"),
                                         (derivative_violation, "derivative-bound")])
def test_negative_instances(positive, make, reason):
    rep = check_hypotheses_algind1(make(positive), seed=3)
    assert (rep.verdict, rep.failed_k, rep.failed_reason) == (FAILED, 2, reason)


def test_degree_violation_rejected_at_load(positive):
    bad = degree_violation(positive)
    with pytest.raises(BadInput):
        CriterionInstance.from_json(bad.to_json(), strict=True)


def test_weakening_V_keeps_verdict(positive):
    q = positive.quadruple
    weaker = GrowthQuadruple(q.D, q.S, q.H, tuple(v * 0.9 for v in q.V))
    assert check_hypotheses_algind1(replace(positive, quadruple=weaker)).verdict == HOLD


def test_instance_roundtrip(positive):
    back = CriterionInstance.from_json(positive.to_json())
    assert back.quadruple == positive.quadruple
    assert back.families == positive.families


def _with_unit_S(q):
    # the predicate divides by S_k, which the linear-form instance keeps at 0
    return GrowthQuadruple(q.D, (1,) * len(q), q.H, q.V)


NEAR = ProjectivePoint.rational([10 ** 8, 10 ** 7 + 1])  # the second convergent


def test_sufficiently_approximating(positive):
    q = _with_unit_S(positive.quadruple)
    pred = sufficiently_approximating(NEAR, 2, 1, q, positive.theta, 1)
    assert pred.holds and pred.margin2 > 0 and pred.margin3 > 0
    assert pred.order == 0
    far = ProjectivePoint.rational([1, 5])
    rep = sufficiently_approximating(far, 2, 1, q, positive.theta, 1)
    assert not rep.holds and rep.margin3 < 0
    assert not sufficiently_approximating(NEAR, 0, 1, q, positive.theta, 1).holds


def test_predicate_reproducible(positive):
    q = _with_unit_S(positive.quadruple)
    a = sufficiently_approximating(NEAR, 2, 1, q, positive.theta, 1, seed=4)
    b = sufficiently_approximating(NEAR, 2, 1, q, positive.theta, 1, seed=4)
    assert a.to_json() == b.to_json()


def test_plane_instance_holds(plane):
    rep = check_hypotheses_algind2(plane, seed=1)
    assert rep.verdict == HOLD and rep.asserted_bound == "t >= 2"


def test_plane_regularity_failure(plane):
    q = plane.quadruple
    flat = GrowthQuadruple(q.D, q.D, q.H, q.V)
    rep = check_hypotheses_algind2(replace(plane, quadruple=flat), seed=1)
    assert (rep.verdict, rep.failed_reason) == (INCONCLUSIVE, "regularity")


def test_plane_restriction_failure(plane):
    # keep only the first section at k = 1 and offer its own line as candidate
    fams = dict(plane.families)
    line = fams[1][0]
    base = line.primitive()
    from diophant.polycore import HomogeneousPolynomial

    lin = HomogeneousPolynomial(3, 1, {(0, 1, 0): 10, (1, 0, 0): -1})
    assert (lin ** plane.quadruple.at(1)[0]).primitive() == base
    fams[1] = [fams[1][0]]
    inst = replace(plane, families=fams, candidates=[lin])
    rep = check_hypotheses_algind2(inst, seed=1)
    assert (rep.verdict, rep.failed_k, rep.failed_reason) == (FAILED, 1, "restriction")


def test_regularity_window_examples():
    q = quad(lambda k: k * k, lambda k: k, lambda k: k ** 3, lambda k: k ** 7, n=200)
    k, rep = regularity_window(q, 100, {"c1": 1.0, "b": 1e9, "d": 0.0})
    assert rep["m"] == 1.0 and 50 <= k < 100 and k == 50
    with pytest.raises(NoWindow):
        regularity_window(q, 0.5, {"c1": 1.0, "b": 1e9, "d": 0.0})
    k2, rep2 = regularity_window(q, 100, {"c1": 2.0, "b": 1e9, "d": 0.0})
    assert rep2["window"] == [2 * w for w in rep["window"]]
    # halving D under doubled constants reproduces the original window
    k3, _ = regularity_window(q, 50, {"c1": 2.0, "b": 1e9, "d": 0.0})
    assert k3 == k
