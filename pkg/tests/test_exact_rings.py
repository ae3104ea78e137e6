from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rotabaxter.exact_rings import (
    CoefficientError, QPoly, format_coefficient, format_qpoly, parse_coefficient, parse_qpoly,
    promote, q, q_binomial, q_factorial, q_int, qpoly_eval, ring_arithmetic,
)

qpolys = st.lists(st.integers(-20, 20), max_size=6).map(QPoly)


def test_qpoly_basic_arithmetic():
    assert (1 + q) * (1 + q) == QPoly([1, 2, 1])
    assert (1 + q) - q == 1
    assert q ** 3 == QPoly.q(3)
    assert QPoly([0, 0, 0]).is_zero()
    assert (q ** 2 + 2 * q + 1)(3) == 16


def test_exact_division():
    assert (QPoly([1, 2, 1])).divmod_exact(QPoly([1, 1])) == QPoly([1, 1])
    with pytest.raises(ArithmeticError):
        QPoly([1, 0, 1]).divmod_exact(QPoly([1, 1]))


def test_qpoly_rejects_fractions():
    with pytest.raises(CoefficientError):
        q + Fraction(1, 2)
    with pytest.raises(CoefficientError):
        ring_arithmetic(q, Fraction(1, 2), "mul")


def test_promote_and_ring_arithmetic():
    assert promote(3, "qpoly") == QPoly([3])
    assert promote(3, "rat") == Fraction(3)
    assert ring_arithmetic(Fraction(1, 2), 2, "mul") == 1
    assert ring_arithmetic(q, 1, "add") == 1 + q


def test_q_numbers_frozen():
    assert q_int(3) == QPoly([1, 1, 1])
    assert q_factorial(3) == QPoly([1, 2, 2, 1])
    assert format_qpoly(q_binomial(4, 2)) == "1 + q + 2*q^2 + q^3 + q^4"
    assert q_binomial(5, 2) == QPoly([1, 1, 2, 2, 2, 1, 1])
    assert q_binomial(6, 0) == 1 and q_binomial(6, 6) == 1


def test_q_binomial_at_one_is_binomial():
    from math import comb
    for n in range(10):
        for k in range(n + 1):
            assert qpoly_eval(q_binomial(n, k), 1) == comb(n, k)


def test_q_binomial_bad_args():
    with pytest.raises(ValueError):
        q_binomial(2, 3)
    with pytest.raises(ValueError):
        q_int(-1)


def test_canonical_text():
    assert format_qpoly(QPoly([0, -1, 0, 3])) == "-q + 3*q^3"
    assert format_qpoly(QPoly()) == "0"
    assert format_coefficient(Fraction(6, 4)) == "3/2"
    assert format_coefficient(Fraction(4, 2)) == "2"
    assert parse_coefficient("3/2") == Fraction(3, 2)
    assert parse_coefficient("1 + q", "qpoly") == 1 + q
    with pytest.raises(ValueError):
        parse_coefficient("1/0")


@given(qpolys)
def test_qpoly_text_roundtrip(p):
    assert parse_qpoly(format_qpoly(p)) == p


@given(st.fractions(max_denominator=50))
def test_rational_text_roundtrip(c):
    assert parse_coefficient(format_coefficient(c), "rat") == c


@given(qpolys, qpolys, qpolys)
def test_qpoly_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(qpolys, qpolys)
def test_evaluation_is_a_ring_map(a, b):
    for q0 in (-2, 0, 1, 3):
        assert qpoly_eval(a * b, q0) == qpoly_eval(a, q0) * qpoly_eval(b, q0)
        assert qpoly_eval(a + b, q0) == qpoly_eval(a, q0) + qpoly_eval(b, q0)
