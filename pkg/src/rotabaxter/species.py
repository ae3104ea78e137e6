"""Graded finite sets and linear species as explicit structure enumerators.

Structures are canonical nested tuples ("tokens"), so two species can be
compared as multisets and bijections between structure sets are plain
data that can be checked.

Token shapes::

    ("E",)                   the unique E-structure
    ("X",)                   the singleton structure on [1]
    ("L", perm)              a linear order on [n]
    ("+", side, t)           summand 0 or 1 of a sum
    ("*", x1, x2, t1, t2)    product: ordered split of [n] plus a structure
                             on each block, relabelled to [|block|]
    ("P", t)                 P(F) on [n] is F on [n-1] (maximum removed)
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .series import TruncatedSeries, divided


class SpeciesError(ValueError):
    pass


class BijectionError(SpeciesError):
    """A constructed structure map failed to be a bijection."""

    def __init__(self, message: str, structure=None):
        super().__init__(message)
        self.structure = structure


# -- graded sets ---------------------------------------------------------

@dataclass(frozen=True)
class GradedSet:
    """Finite set with an integer grade on each element."""

    elements: Tuple[Hashable, ...]
    grades: Tuple[int, ...]

    @classmethod
    def from_grades(cls, grades: Iterable[int]) -> "GradedSet":
        grades = tuple(grades)
        return cls(tuple(range(1, len(grades) + 1)), grades)

    def __len__(self):
        return len(self.elements)

    def grade_counts(self) -> Counter:
        return Counter(self.grades)

    def union(self, other: "GradedSet") -> "GradedSet":
        """Disjoint union, elements tagged by side."""
        return GradedSet(tuple((0, e) for e in self.elements) + tuple((1, e) for e in other.elements),
                         self.grades + other.grades)


def gradedset_product(a: GradedSet, b: GradedSet) -> GradedSet:
    elements = []
    grades = []
    for x, gx in zip(a.elements, a.grades):
        for y, gy in zip(b.elements, b.grades):
            elements.append((x, y))
            grades.append(gx + gy)
    return GradedSet(tuple(elements), tuple(grades))


def gradedset_negative_part(a: GradedSet) -> GradedSet:
    keep = [(e, g) for e, g in zip(a.elements, a.grades) if g < 0]
    return GradedSet(tuple(e for e, _ in keep), tuple(g for _, g in keep))


def gradedset_valuation(a: GradedSet, lo: Optional[int] = None, hi: Optional[int] = None) -> TruncatedSeries:
    counts = a.grade_counts()
    lo = min([0] + list(counts)) if lo is None else lo
    hi = max([10] + list(counts)) if hi is None else hi
    return TruncatedSeries("laurent", dict(counts), (lo, hi))


def gradedset_rb_sides(a: GradedSet, b: GradedSet) -> Tuple[Counter, Counter]:
    """Grade counts of P(a)xP(b) + P(axb) and P(P(a)xb) + P(axP(b))."""
    P, mul = gradedset_negative_part, gradedset_product
    lhs = mul(P(a), P(b)).union(P(mul(a, b)))
    rhs = P(mul(P(a), b)).union(P(mul(a, P(b))))
    return lhs.grade_counts(), rhs.grade_counts()


# -- linear species ------------------------------------------------------

def ordered_splits(n: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """All (x1, x2) with x1 + x2 = [n] as a disjoint union, x1 by size then lex."""
    universe = tuple(range(1, n + 1))
    for k in range(n + 1):
        for x1 in itertools.combinations(universe, k):
            s = set(x1)
            yield x1, tuple(i for i in universe if i not in s)


class LinearSpecies:
    """A species on finite linear orders, enumerated up to ``bound``.

    ``gen(n)`` yields the structures on [n] as tokens; results are cached.
    """

    def __init__(self, name: str, bound: int, gen: Callable[[int], Iterable]):
        self.name = name
        self.bound = bound
        self._gen = gen
        self._cache: Dict[int, Tuple] = {}

    def structures(self, n: int) -> Tuple:
        if n < 0 or n > self.bound:
            raise SpeciesError("size %d outside 0..%d for %s" % (n, self.bound, self.name))
        hit = self._cache.get(n)
        if hit is None:
            hit = self._cache[n] = tuple(self._gen(n))
        return hit

    def iter_structures(self, n: int) -> Iterator:
        if n in self._cache:
            return iter(self._cache[n])
        if n < 0 or n > self.bound:
            raise SpeciesError("size %d outside 0..%d for %s" % (n, self.bound, self.name))
        return iter(self._gen(n))

    def count(self, n: int) -> int:
        if n in self._cache:
            return len(self._cache[n])
        return sum(1 for _ in self._gen(n))

    def valuation(self, order: Optional[int] = None) -> TruncatedSeries:
        """Exponential generating series sum |F[n]| x^n/n! (divided basis)."""
        order = self.bound if order is None else order
        return divided({n: self.count(n) for n in range(order + 1)}, order)

    def __repr__(self):
        return "LinearSpecies(%s, bound=%d)" % (self.name, self.bound)


def builtin_species(name: str, bound: int) -> LinearSpecies:
    if name == "E":
        return LinearSpecies("E", bound, lambda n: [("E",)])
    if name == "X":
        return LinearSpecies("X", bound, lambda n: [("X",)] if n == 1 else [])
    if name == "L":
        return LinearSpecies("L", bound, lambda n: [("L", p) for p in itertools.permutations(range(1, n + 1))])
    if name == "zero":
        return LinearSpecies("zero", bound, lambda n: [])
    raise SpeciesError("unknown builtin species %r" % name)


def _shared_bound(F: LinearSpecies, G: LinearSpecies) -> int:
    if F.bound != G.bound:
        raise SpeciesError("size bounds differ: %d vs %d" % (F.bound, G.bound))
    return F.bound


def species_sum(F: LinearSpecies, G: LinearSpecies) -> LinearSpecies:
    def gen(n):
        for t in F.iter_structures(n):
            yield ("+", 0, t)
        for t in G.iter_structures(n):
            yield ("+", 1, t)
    return LinearSpecies("(%s+%s)" % (F.name, G.name), _shared_bound(F, G), gen)


def species_product(F: LinearSpecies, G: LinearSpecies) -> LinearSpecies:
    def gen(n):
        for x1, x2 in ordered_splits(n):
            fs = F.structures(len(x1))
            if not fs:
                continue
            gs = G.structures(len(x2))
            for tf in fs:
                for tg in gs:
                    yield ("*", x1, x2, tf, tg)
    return LinearSpecies("(%s*%s)" % (F.name, G.name), _shared_bound(F, G), gen)


def species_P(F: LinearSpecies) -> LinearSpecies:
    """P(F)[n] = F[n-1]; empty at n = 0."""
    def gen(n):
        if n == 0:
            return
        for t in F.iter_structures(n - 1):
            yield ("P", t)
    return LinearSpecies("P(%s)" % F.name, F.bound, gen)


def species_nonempty(F: LinearSpecies) -> LinearSpecies:
    """F_+: F with the structures on the empty set removed."""
    return LinearSpecies("%s+" % F.name, F.bound, lambda n: F.iter_structures(n) if n else [])


def species_from_json(d: dict) -> LinearSpecies:
    """``{"bound": N, "species": tree}`` where a tree is a builtin name or
    ``["+", a, b]``, ``["·", a, b]`` (also ``"*"``) or ``["P", a]``."""
    bound = int(d["bound"])

    def build(t):
        if isinstance(t, str):
            return builtin_species(t, bound)
        head, *args = t
        if head == "+" and len(args) == 2:
            return species_sum(build(args[0]), build(args[1]))
        if head in ("·", "*") and len(args) == 2:
            return species_product(build(args[0]), build(args[1]))
        if head == "P" and len(args) == 1:
            return species_P(build(args[0]))
        raise SpeciesError("malformed species tree %r" % (t,))

    return build(d["species"])


# -- bijection witnesses -------------------------------------------------

@dataclass
class BijectionWitness:
    n: int
    left: Tuple
    right: Tuple
    mapping: List[Tuple]

    def validate(self) -> "BijectionWitness":
        right = set(self.right)
        if len(right) != len(self.right):
            raise BijectionError("right side has repeated structures")
        domain = [a for a, _ in self.mapping]
        if sorted(map(repr, domain)) != sorted(map(repr, self.left)):
            raise BijectionError("map is not total on the left side")
        seen = {}
        for a, b in self.mapping:
            if b not in right:
                raise BijectionError("image outside the right side", a)
            if b in seen:
                raise BijectionError("map is not injective", a)
            seen[b] = a
        if len(seen) != len(right):
            missing = next(t for t in self.right if t not in seen)
            raise BijectionError("map is not surjective", missing)
        return self

    def to_json(self) -> dict:
        return {"n": self.n, "size": len(self.mapping), "pairs": [[repr(a), repr(b)] for a, b in self.mapping]}


def _drop(xs: Tuple[int, ...], v: int) -> Tuple[int, ...]:
    return tuple(i for i in xs if i != v)


def weight0_map(token, n: int):
    """Send a P(F)P(G) structure on [n] to P(P(F)G) + P(F P(G)) by the block
    holding the maximum n."""
    _, x1, x2, pf, pg = token
    if n in x2:
        return ("+", 0, ("P", ("*", x1, _drop(x2, n), pf, pg[1])))
    return ("+", 1, ("P", ("*", _drop(x1, n), x2, pf[1], pg)))


def weight0_bijection_witness(F: LinearSpecies, G: LinearSpecies, n: int) -> BijectionWitness:
    if n < 1:
        raise SpeciesError("witness needs n >= 1")
    PF, PG = species_P(F), species_P(G)
    left = species_product(PF, PG).structures(n)
    right = species_sum(species_P(species_product(PF, G)), species_P(species_product(F, PG))).structures(n)
    mapping = [(t, weight0_map(t, n)) for t in left]
    return BijectionWitness(n, left, right, mapping).validate()


def valuation_laws_check(bound: int = 8, names: Sequence[str] = ("E", "X", "L", "zero")):
    """|F + G| = |F| + |G|, |FG| = |F||G| and |P(F)| = integral of |F| for
    every pair of builtin species, through ``bound``."""
    from .operators import CheckReport, integrate

    count = 0
    for a in names:
        F = builtin_species(a, bound)
        vf = F.valuation()
        count += 1
        if species_P(F).valuation() != integrate(vf):
            return CheckReport("species_valuation", None, count, bound, None, "fails",
                               {"law": "P", "F": a})
        for b in names:
            G = builtin_species(b, bound)
            vg = G.valuation()
            count += 1
            if species_sum(F, G).valuation() != vf + vg:
                return CheckReport("species_valuation", None, count, bound, None, "fails",
                                   {"law": "sum", "F": a, "G": b})
            if species_product(F, G).valuation() != vf * vg:
                return CheckReport("species_valuation", None, count, bound, None, "fails",
                                   {"law": "product", "F": a, "G": b})
    return CheckReport("species_valuation", None, count, bound, None, "holds")
