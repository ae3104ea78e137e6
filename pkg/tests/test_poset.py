import numpy as np
import pytest

from rotabaxter.poset import (
    FinitePoset, IncidenceElement, PosetError, PosetFunction, antichain, chain, delta, diamond,
    exhaustive_poset_check, forest, incidence_mul, incidence_P, incidence_rb_check,
    incidence_rb_counterexample, locally_chain_posets, poset_P, poset_rb_check, zeta, zeta_strict,
)


def test_from_covers_and_validation():
    X = FinitePoset.from_json({"n": 3, "covers": [[1, 2], [2, 3]]})
    assert X.le(0, 2) and not X.le(2, 0)
    assert X.to_json() == {"n": 3, "covers": [[1, 2], [2, 3]]}
    with pytest.raises(PosetError):
        FinitePoset.from_json({"n": 2, "covers": [[1, 2], [2, 1]]})
    with pytest.raises(PosetError):
        FinitePoset.from_json({"n": 2, "covers": [[1, 3]]})


def test_locally_chain():
    assert chain(4).is_locally_chain()
    assert antichain(3).is_locally_chain()
    assert forest([None, 1, 1, 2]).is_locally_chain()
    assert not diamond().is_locally_chain()


def test_family_size():
    # forests with parent[i] < i: n! of them on n points
    assert sum(1 for _ in locally_chain_posets(5)) == 1 + 2 + 6 + 24 + 120


def test_P_frozen():
    X = chain(3)
    f = PosetFunction(X, [1, 2, 3])
    assert poset_P(f, strict=False).values == (1, 3, 6)
    assert poset_P(f, strict=True).values == (0, 1, 3)


def test_exhaustive_on_family():
    for X in locally_chain_posets(4):
        assert exhaustive_poset_check(X, False).holds
        assert exhaustive_poset_check(X, True).holds


def test_random_check_on_chain():
    assert poset_rb_check(chain(5), False, 100, 0).holds
    assert poset_rb_check(chain(5), True, 100, 0).holds


def test_diamond_fails_with_witness():
    for strict in (False, True):
        r = exhaustive_poset_check(diamond(), strict)
        assert r.verdict == "fails"
        assert r.witness == {"at": 4, "f": [0, 0, 1, 0], "g": [0, 1, 0, 0], "lhs": "1", "rhs": "0"}


def test_zeta_squared_counts_intervals():
    X = chain(3)
    z2 = incidence_mul(zeta(X), zeta(X))
    # (zeta^2)(i, j) = |[i, j]|
    assert z2[1, 3] == 3 and z2[1, 2] == 2 and z2[2, 2] == 1
    assert incidence_mul(zeta(X), delta(X)) == zeta(X)


def test_zeta_matrix():
    M = diamond().zeta_matrix(strict=False)
    assert M.dtype.kind == "i" and np.array_equal(np.diag(M), np.ones(4))
    assert int(M.sum()) == 9


def test_incidence_P_recovers_P():
    X = chain(4)
    f = PosetFunction(X, [2, 0, 1, 5])
    assert incidence_P(zeta(X), f) == poset_P(f, strict=False)
    assert incidence_P(zeta_strict(X), f) == poset_P(f, strict=True)
    assert incidence_rb_check(zeta(X), -1) is None


def test_incidence_counterexample():
    r = incidence_rb_counterexample(chain(3), 100, 0)
    assert r.verdict == "fails"


def test_incidence_validation():
    with pytest.raises(PosetError):
        IncidenceElement(chain(2), {(2, 1): 1})
