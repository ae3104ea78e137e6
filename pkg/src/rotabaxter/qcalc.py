"""q-integers, Gaussian binomials and q-weighted linear species.

q is kept formal throughout: every identity is checked in Z[q], and the
integer specialisations follow by :func:`qpoly_eval`.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Iterable, Optional, Tuple

from .exact_rings import QPoly, format_qpoly, q_binomial, q_factorial, q_int, qpoly_eval
from .operators import CheckReport
from .series import TruncatedSeries
from .species import BijectionError, LinearSpecies, SpeciesError, ordered_splits

__all__ = [
    "q_int", "q_factorial", "q_binomial", "q_binomial_by_factorials", "q_pascal_check",
    "inversions", "inversion_gaussian_check", "QSpecies", "qspecies_from_linear",
    "species_q_product", "species_q_sum", "species_Pq", "species_Sq", "species_dq",
    "twisted_species_check", "qpoly_eval",
]


def q_binomial_by_factorials(n: int, k: int) -> QPoly:
    """[n]_q! / ([k]_q! [n-k]_q!) by exact polynomial division."""
    if n < 0 or k < 0 or k > n:
        raise ValueError("need 0 <= k <= n")
    return q_factorial(n).divmod_exact(q_factorial(k) * q_factorial(n - k))


def q_pascal_check(N: int) -> CheckReport:
    """binom(n,k)_q = binom(n-1,k)_q + q^(n-k) binom(n-1,k-1)_q for 1 <= k < n <= N.

    Both sides use the factorial-quotient form, so the recurrence that
    :func:`q_binomial` is built on is not assumed.
    """
    if N < 2:
        raise ValueError("q_pascal_check needs N >= 2")
    count = 0
    for n in range(2, N + 1):
        for k in range(1, n):
            count += 1
            lhs = q_binomial_by_factorials(n, k)
            rhs = q_binomial_by_factorials(n - 1, k) + QPoly.q(n - k) * q_binomial_by_factorials(n - 1, k - 1)
            if lhs != rhs or lhs != q_binomial(n, k):
                return CheckReport("q_pascal", None, count, N, None, "fails",
                                   {"n": n, "k": k, "lhs": format_qpoly(lhs), "rhs": format_qpoly(rhs)})
    return CheckReport("q_pascal", None, count, N, None, "holds")


def inversions(x1: Iterable[int], x2: Iterable[int]) -> int:
    """|{(i, j) : i in x1, j in x2, i > j}|."""
    x2 = tuple(x2)
    return sum(1 for i in x1 for j in x2 if i > j)


def inversion_polynomial(n: int, k: int) -> QPoly:
    universe = range(1, n + 1)
    acc: Dict[int, int] = {}
    for x1 in itertools.combinations(universe, k):
        s = set(x1)
        c = inversions(x1, [j for j in universe if j not in s])
        acc[c] = acc.get(c, 0) + 1
    return QPoly(acc)


def inversion_gaussian_check(n: int, k: int) -> CheckReport:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    got = inversion_polynomial(n, k)
    want = q_binomial(n, k)
    name = "inversions(%d,%d)" % (n, k)
    if got != want:
        return CheckReport(name, None, 1, n, None, "fails",
                           {"n": n, "k": k, "lhs": format_qpoly(got), "rhs": format_qpoly(want)})
    return CheckReport(name, None, 1, n, None, "holds")


# -- q-species -----------------------------------------------------------

class QSpecies:
    """Linear species whose structures carry a q-exponent.

    ``gen(n)`` yields ``(token, exponent)`` pairs.
    """

    def __init__(self, name: str, bound: int, gen: Callable[[int], Iterable[Tuple[object, int]]]):
        self.name = name
        self.bound = bound
        self._gen = gen
        self._cache: Dict[int, Tuple] = {}

    def structures(self, n: int) -> Tuple[Tuple[object, int], ...]:
        if n < 0 or n > self.bound:
            raise SpeciesError("size %d outside 0..%d for %s" % (n, self.bound, self.name))
        hit = self._cache.get(n)
        if hit is None:
            hit = self._cache[n] = tuple(self._gen(n))
        return hit

    def weight(self, n: int) -> QPoly:
        acc: Dict[int, int] = {}
        for _, e in self.structures(n):
            acc[e] = acc.get(e, 0) + 1
        return QPoly(acc)

    def valuation(self, order: Optional[int] = None) -> TruncatedSeries:
        """sum over n of (sum of q^exponent) x^n/[n]_q!."""
        order = self.bound if order is None else order
        return TruncatedSeries("qdivided", {n: self.weight(n) for n in range(order + 1)}, order)

    def forget(self) -> LinearSpecies:
        """The q = 1 shadow: same tokens, exponents dropped."""
        return LinearSpecies(self.name, self.bound, lambda n: [t for t, _ in self.structures(n)])

    def __repr__(self):
        return "QSpecies(%s, bound=%d)" % (self.name, self.bound)


def qspecies_from_linear(F: LinearSpecies) -> QSpecies:
    return QSpecies(F.name, F.bound, lambda n: [(t, 0) for t in F.structures(n)])


def species_q_sum(F: QSpecies, G: QSpecies) -> QSpecies:
    def gen(n):
        for t, e in F.structures(n):
            yield ("+", 0, t), e
        for t, e in G.structures(n):
            yield ("+", 1, t), e
    return QSpecies("(%s+%s)" % (F.name, G.name), min(F.bound, G.bound), gen)


def species_q_product(F: QSpecies, G: QSpecies) -> QSpecies:
    """Product whose structures carry q^(inversions of the split)."""
    if F.bound != G.bound:
        raise SpeciesError("size bounds differ: %d vs %d" % (F.bound, G.bound))

    def gen(n):
        for x1, x2 in ordered_splits(n):
            fs = F.structures(len(x1))
            if not fs:
                continue
            gs = G.structures(len(x2))
            c = inversions(x1, x2)
            for tf, ef in fs:
                for tg, eg in gs:
                    yield ("*", x1, x2, tf, tg), ef + eg + c
    return QSpecies("(%s*%s)" % (F.name, G.name), F.bound, gen)


def species_Pq(F: QSpecies) -> QSpecies:
    def gen(n):
        if n == 0:
            return
        for t, e in F.structures(n - 1):
            yield ("P", t), e
    return QSpecies("Pq(%s)" % F.name, F.bound, gen)


def species_Sq(F: QSpecies) -> QSpecies:
    return QSpecies("Sq(%s)" % F.name, F.bound, lambda n: [(t, e + n) for t, e in F.structures(n)])


def species_dq(F: QSpecies) -> QSpecies:
    return QSpecies("dq(%s)" % F.name, F.bound - 1, lambda n: F.structures(n + 1))


def twisted_map(token, n: int):
    _, x1, x2, pf, pg = token
    if n in x2:
        return ("+", 0, ("P", ("*", x1, tuple(i for i in x2 if i != n), pf, pg[1])))
    return ("+", 1, ("P", ("*", tuple(i for i in x1 if i != n), x2, pf[1], pg)))


def twisted_species_check(F: QSpecies, G: QSpecies, n_max: int) -> CheckReport:
    """Weight-preserving bijection Pq(F)Pq(G) -> Pq(Pq(F)G) + Pq(F Sq(Pq(G))) for n <= n_max.

    Raises :class:`BijectionError` with the offending structure when the
    case-split map fails.
    """
    PF, PG = species_Pq(F), species_Pq(G)
    left_sp = species_q_product(PF, PG)
    right_sp = species_q_sum(species_Pq(species_q_product(PF, G)),
                             species_Pq(species_q_product(F, species_Sq(PG))))
    total = 0
    for n in range(n_max + 1):
        right = dict(right_sp.structures(n))
        if len(right) != len(right_sp.structures(n)):
            raise BijectionError("repeated structures on the right at n=%d" % n)
        hit = set()
        for t, e in left_sp.structures(n):
            image = twisted_map(t, n)
            if image not in right:
                raise BijectionError("image outside the right side at n=%d" % n, t)
            if image in hit:
                raise BijectionError("map is not injective at n=%d" % n, t)
            if right[image] != e:
                raise BijectionError("q-exponent %d maps to %d at n=%d" % (e, right[image], n), t)
            hit.add(image)
            total += 1
        if len(hit) != len(right):
            raise BijectionError("map is not surjective at n=%d" % n,
                                 next(t for t in right if t not in hit))
    return CheckReport("twisted_q_species(%s,%s)" % (F.name, G.name), None, total, n_max, None, "holds")
