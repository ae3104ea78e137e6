from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rotabaxter.exact_rings import QPoly, q
from rotabaxter.series import (
    BasisMismatch, MultiIndex, SeriesError, SeriesMatrix, TruncatedSeries, TruncationError, divided,
    first_difference, format_series, laurent, qdivided, series_from_json, series_eq_to_order,
    series_substitute, series_to_json, words,
)

coeffs = st.integers(-9, 9)


def laurent_polys(lo=-3, hi=5):
    return st.dictionaries(st.integers(lo, hi), coeffs, max_size=5).map(lambda t: laurent(t, lo, 30))


def divided_polys(order=8, variables=("x", "y")):
    idx = st.lists(st.tuples(st.sampled_from(variables), st.integers(0, 3)), max_size=2).map(MultiIndex)
    return st.dictionaries(idx, coeffs, max_size=5).map(lambda t: TruncatedSeries("divided", t, order))


def qdivided_polys(order=8):
    qc = st.lists(st.integers(-3, 3), max_size=3).map(QPoly)
    return st.dictionaries(st.integers(0, 4), qc, max_size=4).map(lambda t: qdivided(t, order))


def word_polys(order=4):
    w = st.lists(st.sampled_from((1, 2)), max_size=2).map(tuple)
    return st.dictionaries(w, coeffs, max_size=4).map(lambda t: words(t, order))


def test_multiindex():
    m = MultiIndex({"y": 2, "x": 1, "z": 0})
    assert m.items() == (("x", 1), ("y", 2))
    assert m.degree == 3
    assert m.shift("x", -1) == MultiIndex({"y": 2})
    assert m.shift("x", -2) is None
    assert m.binom(MultiIndex({"y": 1})) == 2
    assert m.factorial() == 2


def test_divided_product_frozen():
    x = divided({1: 1})
    assert (x * x)[MultiIndex.single("x", 2)] == 2
    # (x^2/2!)(x^3/3!) = binom(5,2) x^5/5!
    assert (divided({2: 1}) * divided({3: 1}))[MultiIndex.single("x", 5)] == 10


def test_qdivided_product_frozen():
    x = qdivided({1: 1})
    assert (x * x)[2] == 1 + q
    assert (qdivided({2: 1}) * qdivided({2: 1}))[4] == QPoly([1, 1, 2, 1, 1])


def test_laurent_truncation_bookkeeping():
    f = laurent({-2: 1, 0: 3}, -2, 6)
    g = laurent({-1: 1, 1: 1}, -1, 6)
    h = f * g
    assert h.trunc == (-3, 4)
    assert h[-3] == 1 and h[-1] == 1 + 3
    assert (f + g).trunc == (-2, 6)


def test_word_product_is_concatenation():
    a, b = words({(1,): 2}), words({(2, 1): 3})
    assert (a * b).terms == {(1, 2, 1): 6}
    assert (b * a).terms == {(2, 1, 1): 6}


def test_basis_mismatch():
    with pytest.raises(BasisMismatch):
        laurent({0: 1}) + divided({0: 1})


def test_truncation_errors():
    f, g = divided({1: 1}, 4), divided({1: 1}, 6)
    assert series_eq_to_order(f, g, 4)
    with pytest.raises(TruncationError):
        series_eq_to_order(f, g, 5)
    assert first_difference(divided({1: 1}, 4), divided({1: 2}, 4), 4)[1:] == (1, 2)
    with pytest.raises(TruncationError):
        f.truncate(5)


def test_bad_laurent_bound():
    with pytest.raises(SeriesError):
        TruncatedSeries("laurent", {-5: 1}, (-2, 4))


def test_substitution_frozen():
    # exp(x) - 1 composed with x + x^2/2!: coefficients from the divided oracle
    e = divided({n: 1 for n in range(1, 6)}, 5)
    g = divided({1: 1, 2: 1}, 5)
    h = series_substitute(e, g, 5)
    # e^(x + x^2/2) - 1 = x + 2 x^2/2! + 4 x^3/3! + 10 x^4/4! + 26 x^5/5! (involutions, shifted)
    assert [h[MultiIndex.single("x", n)] for n in range(1, 6)] == [1, 2, 4, 10, 26]


def test_substitution_rejects_constant():
    with pytest.raises(SeriesError):
        series_substitute(divided({1: 1}), divided({0: 1, 1: 1}), 5)


def test_format():
    assert format_series(laurent({-2: 1, 0: 3, 1: 1})) == "z^-2 + 3 + z"
    assert format_series(divided({1: 1, 2: 3})) == "x + (3)*x^2/2!"
    assert format_series(qdivided({2: 1 + q})) == "(1 + q)*x^2/[2]!"


def test_matrix_product():
    one, zero = laurent({0: 1}), laurent({})
    z = laurent({1: 1})
    m = SeriesMatrix([[one, z], [zero, one]])
    assert (m * m)[0, 1] == z + z


@pytest.mark.parametrize("strategy", [laurent_polys(), divided_polys(), qdivided_polys(), word_polys()],
                         ids=["laurent", "divided", "qdivided", "word"])
def test_json_roundtrip(strategy):
    @given(strategy)
    def run(f):
        assert series_from_json(series_to_json(f)) == f
    run()


@pytest.mark.parametrize("strategy", [laurent_polys(), divided_polys(), qdivided_polys()],
                         ids=["laurent", "divided", "qdivided"])
def test_commutative_ring_laws(strategy):
    @settings(max_examples=60, deadline=None)
    @given(strategy, strategy, strategy)
    def run(f, g, h):
        assert f * g == g * f
        left, right = (f * g) * h, f * (g * h)
        order = min(left.order, right.order)
        assert series_eq_to_order(left, right, order)
        d1, d2 = f * (g + h), f * g + f * h
        assert series_eq_to_order(d1, d2, min(d1.order, d2.order))
    run()


@settings(max_examples=60, deadline=None)
@given(word_polys(), word_polys(), word_polys())
def test_word_ring_associative(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


def test_rational_coefficients_allowed_in_divided():
    f = divided({1: Fraction(1, 2)})
    assert (f * f)[MultiIndex.single("x", 2)] == Fraction(1, 2)
