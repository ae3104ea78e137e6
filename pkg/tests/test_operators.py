import pytest

from rotabaxter.exact_rings import QPoly, q
from rotabaxter.operators import (
    DimPair, DivergentSumError, NotIdempotentError, OperatorError, check_additivity, check_idempotent,
    check_rb_identity, check_rb_pair, check_twisted_rb, geometric_sum_rb, identity_operator, integrate,
    integration_operator, iterated_identity_check, kernel_image_closure_check, laurent_negative_operator,
    laurent_negative_part, lift_coefficientwise, pair_semiring_check, project_support, projection_operator,
    q_integrate, q_integration_operator, q_shift, q_zero_evaluation, series_domain, shift_operator_P,
    shift_operator_rb, shift_xq, substitution_endomorphism, substitution_geometric_sum, zero_operator,
)
from rotabaxter.series import MultiIndex, TruncatedSeries, divided, laurent, qdivided

def test_negative_part_frozen():
    assert laurent_negative_part(laurent({-2: 1, 0: 3, 1: 1})) == laurent({-2: 1}, -2, 10)


def test_integration_frozen():
    assert integrate(divided({0: 1, 3: 2})) == divided({1: 1, 4: 2})
    one = divided({0: 1})
    P = integrate
    # P(1)P(1) = x*x = 2 x^2/2! = P(P(1)) + P(P(1))
    assert P(one) * P(one) == P(P(one) * one) + P(one * P(one))


def test_q_integration_and_shift_frozen():
    assert q_integrate(qdivided({0: 1, 2: 1})) == qdivided({1: 1, 3: 1})
    assert q_shift(qdivided({2: 1})) == qdivided({2: QPoly.q(2)})


def test_twisted_identity_on_generators():
    op = q_integration_operator()
    one = qdivided({0: 1}, 6)
    P, S = op.apply, op.twist
    # P(1)P(1) = x*x = (1+q) x^2/[2]!; P(P(1)) + P(S(P(1))) = x^2/[2]! + q x^2/[2]!
    assert P(one) * P(one) == P(P(one) * one) + P(one * S(P(one)))
    assert (P(one) * P(one))[2] == 1 + q


def test_rb_checks_hold():
    assert check_rb_identity(laurent_negative_operator(), 100, 8, 1).holds
    assert check_rb_identity(integration_operator(), 100, 8, 1).holds
    assert check_twisted_rb(q_integration_operator(), 50, 6, 1).holds
    assert check_rb_identity(identity_operator(series_domain("divided")), 20, 6, 1).holds
    assert check_rb_identity(zero_operator(series_domain("divided")), 20, 6, 1).holds


def test_integration_is_not_weight_minus_one():
    op = integration_operator()
    wrong = type(op)(op.name, -1, op.apply, op.domain)
    r = check_rb_identity(wrong, 50, 6, 0)
    assert r.verdict == "fails"
    assert set(r.to_json()) == {"op", "weight", "samples", "order", "seed", "verdict", "witness"}
    assert {"f", "g", "at", "lhs", "rhs"} <= set(r.witness)


def test_explicit_pair():
    op = laurent_negative_operator()
    assert check_rb_pair(op, laurent({-1: 1, 2: 1}, -3, 8), laurent({-2: 3, 1: 1}, -3, 8), 5) is None


def test_additivity_and_idempotence():
    assert check_additivity(integration_operator(), 50, 6, 0).holds
    assert check_idempotent(laurent_negative_operator(), 50, 6, 0).holds
    assert not check_idempotent(integration_operator(), 20, 6, 0).holds


def test_p_J():
    f = TruncatedSeries("divided", {MultiIndex({"x1": 1}): 2, MultiIndex({"x1": 1, "x3": 1}): 5}, 4)
    assert project_support(f, {"x1", "x2"}).terms == {MultiIndex({"x1": 1}): 2}
    op = projection_operator({"x1", "x2"})
    assert check_rb_identity(op, 50, 4, 3).holds
    assert kernel_image_closure_check(op, 20, 4, 3).holds


def test_kernel_of_negative_part_is_not_an_ideal():
    op = laurent_negative_operator()
    assert kernel_image_closure_check(op, 50, 6, 0, ideal=False).holds
    r = kernel_image_closure_check(op, 50, 6, 0, ideal=True)
    assert r.verdict == "fails" and r.witness["property"].startswith("kernel_")


def test_kernel_check_needs_idempotent():
    with pytest.raises(NotIdempotentError):
        kernel_image_closure_check(integration_operator(), 5, 4, 0)


def test_geometric_sum_frozen():
    op = substitution_geometric_sum(divided({2: 1}, 8), 8)
    # x -> x^2/2! -> (x^2/2)^2/2 = 3 x^4/4! -> x^8/128 = 315 x^8/8!
    assert op.apply(divided({1: 1}, 8)) == divided({1: 1, 2: 1, 4: 3, 8: 315}, 8)
    assert check_rb_identity(op, 50, 8, 0).holds


def test_geometric_sum_divergence_detected():
    with pytest.raises(DivergentSumError):
        substitution_geometric_sum(divided({1: 1}, 6), 6)
    F = substitution_endomorphism(divided({1: 2}, 6))
    with pytest.raises(DivergentSumError):
        geometric_sum_rb(F, 6, series_domain("divided"))


def test_shift_frozen():
    x = TruncatedSeries("divided", {MultiIndex({"x": 1}): 1}, 6)
    assert shift_xq(x).terms == {MultiIndex({"x": 1, "q": 1}): 1}
    # x^2/2! -> (qx)^2/2! = x^2/2! * 2 q^2/2!
    x2 = TruncatedSeries("divided", {MultiIndex({"x": 2}): 1}, 6)
    assert shift_xq(x2).terms == {MultiIndex({"x": 2, "q": 2}): 2}


def test_shift_operator():
    assert shift_operator_rb(5, 30, 0).holds
    with pytest.raises(DivergentSumError):
        shift_operator_P(5).apply(TruncatedSeries("divided", {MultiIndex({"q": 1}): 1}, 5))


def test_lifts():
    assert check_rb_identity(lift_coefficientwise(q_zero_evaluation(), "matrix"), 30, 4, 0).holds
    assert check_rb_identity(lift_coefficientwise(q_zero_evaluation(), "series"), 30, 3, 0).holds
    assert check_rb_identity(lift_coefficientwise(laurent_negative_operator(), "matrix"), 30, 4, 0).holds


@pytest.mark.parametrize("a,b", [(1, 1), (1, 3), (2, 2), (3, 1), (4, 2)])
def test_iterated_identity(a, b):
    assert iterated_identity_check(integration_operator(), a, b, 20, 8, 0).holds


def test_iterated_identity_preconditions():
    with pytest.raises(OperatorError):
        iterated_identity_check(integration_operator(), 0, 1, 1, 4)
    with pytest.raises(OperatorError):
        iterated_identity_check(laurent_negative_operator(), 1, 1, 1, 4)


def test_pairs():
    proj, quot = pair_semiring_check(6)
    assert proj.holds and proj.samples == 28 * 28
    assert quot.verdict == "fails"
    assert quot.witness["property"] == "multiplicative"
    assert (quot.witness["x"], quot.witness["y"]) == ([0, 1], [1, 1])
    with pytest.raises(ValueError):
        DimPair(2, 1)


def test_reports_are_deterministic():
    a = check_rb_identity(integration_operator(), 30, 6, 99).to_json()
    b = check_rb_identity(integration_operator(), 30, 6, 99).to_json()
    assert a == b
