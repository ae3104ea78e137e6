import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from rotabaxter.operators import integrate
from rotabaxter.species import (
    BijectionError, BijectionWitness, GradedSet, SpeciesError, builtin_species, gradedset_negative_part,
    gradedset_product, gradedset_rb_sides, gradedset_valuation, ordered_splits, species_from_json, species_P,
    species_nonempty, species_product, species_sum, valuation_laws_check, weight0_bijection_witness,
    weight0_map,
)

grades = st.lists(st.integers(-4, 4), max_size=6).map(GradedSet.from_grades)


def test_ordered_splits():
    splits = list(ordered_splits(3))
    assert len(splits) == 8
    assert splits[0] == ((), (1, 2, 3))
    assert ((1, 3), (2,)) in splits


def test_builtin_counts():
    L, E, X = (builtin_species(n, 6) for n in "LEX")
    assert [L.count(n) for n in range(7)] == [math.factorial(n) for n in range(7)]
    assert [E.count(n) for n in range(7)] == [1] * 7
    assert [X.count(n) for n in range(7)] == [0, 1, 0, 0, 0, 0, 0]
    with pytest.raises(SpeciesError):
        builtin_species("Q", 3)
    with pytest.raises(SpeciesError):
        L.structures(7)


def test_product_counts_frozen():
    LL = species_product(builtin_species("L", 8), builtin_species("L", 8))
    assert LL.count(8) == math.factorial(9)
    EE = species_product(builtin_species("E", 6), builtin_species("E", 6))
    assert [EE.count(n) for n in range(7)] == [2 ** n for n in range(7)]


def test_P_shifts_and_integrates():
    L = builtin_species("L", 6)
    PL = species_P(L)
    assert [PL.count(n) for n in range(7)] == [0, 1, 1, 2, 6, 24, 120]
    assert PL.valuation() == integrate(L.valuation())


def test_nonempty_and_sum():
    E = builtin_species("E", 4)
    assert species_nonempty(E).count(0) == 0
    assert species_sum(E, E).count(3) == 2


def test_valuation_laws():
    assert valuation_laws_check(8).holds


def test_species_json():
    F = species_from_json({"bound": 5, "species": ["·", "L", ["P", "E"]]})
    assert [F.count(n) for n in range(6)] == [0, 1, 3, 10, 41, 206]
    with pytest.raises(SpeciesError):
        species_from_json({"bound": 3, "species": ["?", "E"]})


@pytest.mark.parametrize("a,b", [("E", "E"), ("L", "X"), ("L", "L"), ("X", "E")])
def test_weight0_witness(a, b):
    for n in range(1, 7):
        w = weight0_bijection_witness(builtin_species(a, 6), builtin_species(b, 6), n)
        assert len(w.mapping) == len(w.right)


def test_weight0_map_frozen():
    # split ({1}, {2}) of [2]: 2 lies in the second block, so the left summand
    token = ("*", (1,), (2,), ("P", ("E",)), ("P", ("E",)))
    assert weight0_map(token, 2) == ("+", 0, ("P", ("*", (1,), (), ("P", ("E",)), ("E",))))


def test_broken_witness_detected():
    L = builtin_species("L", 4)
    w = weight0_bijection_witness(L, L, 3)
    broken = BijectionWitness(w.n, w.left, w.right, [(a, w.mapping[0][1]) for a, _ in w.mapping])
    with pytest.raises(BijectionError):
        broken.validate()


def test_graded_set_frozen():
    a = GradedSet.from_grades([-2, 0, 1])
    assert gradedset_negative_part(a).grades == (-2,)
    assert gradedset_product(a, a).grade_counts()[-2] == 2
    v = gradedset_valuation(a)
    assert v[-2] == 1 and v[0] == 1 and v[1] == 1


@given(grades, grades)
def test_graded_sets_rota_baxter(a, b):
    lhs, rhs = gradedset_rb_sides(a, b)
    assert lhs == rhs


@given(grades, grades)
def test_graded_valuation_is_multiplicative(a, b):
    va, vb = gradedset_valuation(a, -8, 8), gradedset_valuation(b, -8, 8)
    prod = gradedset_valuation(gradedset_product(a, b), -16, 16)
    expect = Counter()
    for i, ci in va.terms.items():
        for j, cj in vb.terms.items():
            expect[i + j] += ci * cj
    assert {k: c for k, c in prod.terms.items()} == {k: c for k, c in expect.items() if c}
