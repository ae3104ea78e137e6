"""Finite posets, pointwise function rings, summation operators and
incidence elements.

Carriers are ``1..n``. ``P_<`` sums strictly below, ``P_<=`` sums below
and at a point; on posets whose principal down-sets are chains they are
Rota-Baxter of weight +1 and -1 respectively. Elsewhere (the diamond) the
identities fail, and :func:`exhaustive_poset_check` finds the witness.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exact_rings import format_coefficient
from .operators import CheckReport, Domain, RbOperator, check_rb_identity, rb_sides, sample_rng


class PosetError(ValueError):
    pass


class FinitePoset:
    """Partial order on ``1..n`` stored as a boolean matrix (0-based)."""

    def __init__(self, n: int, leq: Sequence[Sequence[bool]], name: str = ""):
        self.n = n
        self.leq = tuple(tuple(bool(x) for x in row) for row in leq)
        self.name = name or "poset%d" % n
        self._validate()

    def _validate(self):
        n, r = self.n, self.leq
        if len(r) != n or any(len(row) != n for row in r):
            raise PosetError("relation matrix must be %dx%d" % (n, n))
        for i in range(n):
            if not r[i][i]:
                raise PosetError("not reflexive at %d" % (i + 1))
            for j in range(n):
                if i != j and r[i][j] and r[j][i]:
                    raise PosetError("not antisymmetric: %d and %d" % (i + 1, j + 1))
                for k in range(n):
                    if r[i][j] and r[j][k] and not r[i][k]:
                        raise PosetError("not transitive: %d <= %d <= %d" % (i + 1, j + 1, k + 1))

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[Tuple[int, int]], name: str = "") -> "FinitePoset":
        """Transitive closure of the 1-based relations ``i < j``."""
        r = [[i == j for j in range(n)] for i in range(n)]
        for i, j in covers:
            if not (1 <= i <= n and 1 <= j <= n):
                raise PosetError("cover (%d, %d) outside 1..%d" % (i, j, n))
            if i == j:
                raise PosetError("cover (%d, %d) is not strict" % (i, j))
            r[i - 1][j - 1] = True
        for k in range(n):
            for i in range(n):
                if r[i][k]:
                    for j in range(n):
                        if r[k][j]:
                            r[i][j] = True
        return cls(n, r, name)

    @classmethod
    def from_json(cls, d: dict) -> "FinitePoset":
        return cls.from_covers(int(d["n"]), [tuple(c) for c in d.get("covers", [])], d.get("name", ""))

    def to_json(self) -> dict:
        return {"n": self.n, "covers": [[i + 1, j + 1] for i, j in self.covers()]}

    def covers(self) -> List[Tuple[int, int]]:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.leq[i][j]:
                    if not any(k not in (i, j) and self.leq[i][k] and self.leq[k][j] for k in range(self.n)):
                        out.append((i, j))
        return out

    def le(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]

    def down_set(self, j: int) -> List[int]:
        return [i for i in range(self.n) if self.leq[i][j]]

    def is_locally_chain(self) -> bool:
        """Every principal down-set is totally ordered."""
        for j in range(self.n):
            d = self.down_set(j)
            for a, b in itertools.combinations(d, 2):
                if not (self.leq[a][b] or self.leq[b][a]):
                    return False
        return True

    def zeta_matrix(self, strict: bool) -> np.ndarray:
        z = np.zeros((self.n, self.n), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                if self.lt(i, j) if strict else self.le(i, j):
                    z[i, j] = 1
        return z

    def __repr__(self):
        return "FinitePoset(%s, covers=%s)" % (self.name, [(i + 1, j + 1) for i, j in self.covers()])


def chain(n: int) -> FinitePoset:
    return FinitePoset.from_covers(n, [(i, i + 1) for i in range(1, n)], "chain%d" % n)


def antichain(n: int) -> FinitePoset:
    return FinitePoset.from_covers(n, [], "antichain%d" % n)


def diamond() -> FinitePoset:
    """0 < a, b < 1 with a, b incomparable; labels 1=0, 2=a, 3=b, 4=1."""
    return FinitePoset.from_covers(4, [(1, 2), (1, 3), (2, 4), (3, 4)], "diamond")


def forest(parents: Sequence[Optional[int]], name: str = "") -> FinitePoset:
    """Rooted forest, roots at the bottom; ``parents[i]`` is the 1-based lower
    cover of element i+1 or ``None``."""
    covers = [(p, i + 1) for i, p in enumerate(parents) if p is not None]
    return FinitePoset.from_covers(len(parents), covers, name)


def locally_chain_posets(max_n: int) -> Iterator[FinitePoset]:
    """Posets on up to ``max_n`` elements whose down-sets are chains.

    These are exactly the rooted forests. Each lower cover precedes its
    element in the labelling, which reaches every isomorphism class.
    """
    for n in range(1, max_n + 1):
        choices = [[None] + list(range(1, i + 1)) for i in range(n)]
        for parents in itertools.product(*choices):
            yield forest(parents, "forest" + "".join("-" if p is None else str(p) for p in parents))


# -- functions on a poset --------------------------------------------------

class PosetFunction:
    """Map from the carrier to coefficients; pointwise + and *."""

    __slots__ = ("poset", "values")

    def __init__(self, poset: FinitePoset, values: Sequence):
        if len(values) != poset.n:
            raise PosetError("function needs %d values, got %d" % (poset.n, len(values)))
        self.poset = poset
        self.values = tuple(values)

    def _check(self, other: "PosetFunction"):
        if not isinstance(other, PosetFunction) or other.poset is not self.poset and other.poset.leq != self.poset.leq:
            raise PosetError("functions live on different posets")

    def __add__(self, other):
        return poset_pointwise_ring(self, other, "add")

    def __sub__(self, other):
        self._check(other)
        return PosetFunction(self.poset, [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        return poset_pointwise_ring(self, other, "mul")

    def __getitem__(self, j: int):
        """1-based evaluation."""
        return self.values[j - 1]

    def __eq__(self, other):
        return isinstance(other, PosetFunction) and self.values == other.values and self.poset.leq == other.poset.leq

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return "PosetFunction(%s)" % (list(self.values),)


def poset_pointwise_ring(f: PosetFunction, g: PosetFunction, op: str) -> PosetFunction:
    f._check(g)
    if op == "add":
        return PosetFunction(f.poset, [a + b for a, b in zip(f.values, g.values)])
    if op == "mul":
        return PosetFunction(f.poset, [a * b for a, b in zip(f.values, g.values)])
    raise ValueError("unknown pointwise operation %r" % op)


def poset_P(f: PosetFunction, strict: bool) -> PosetFunction:
    X = f.poset
    out = []
    for j in range(X.n):
        total = 0
        for i in range(X.n):
            if X.lt(i, j) if strict else X.le(i, j):
                total = total + f.values[i]
        out.append(total)
    return PosetFunction(X, out)


def function_domain(X: FinitePoset, semiring: bool = True) -> Domain:
    lo = 0 if semiring else -9

    def sample(rng: random.Random, order):
        return PosetFunction(X, [rng.randint(lo, 9) for _ in range(X.n)])

    def diff(a: PosetFunction, b: PosetFunction, order):
        for j, (x, y) in enumerate(zip(a.values, b.values)):
            if x != y:
                return j + 1, format_coefficient(x), format_coefficient(y)
        return None

    return Domain("functions(%s)" % X.name, sample, diff, lambda f: [format_coefficient(v) for v in f.values],
                  kind="poset", semiring=semiring)


def poset_operator(X: FinitePoset, strict: bool) -> RbOperator:
    name = "P_<" if strict else "P_<="
    return RbOperator("%s[%s]" % (name, X.name), 1 if strict else -1, lambda f: poset_P(f, strict), function_domain(X))


def poset_rb_check(X: FinitePoset, strict: bool, samples: int = 200, seed=0) -> CheckReport:
    return check_rb_identity(poset_operator(X, strict), samples, 0, seed)


def exhaustive_poset_check(X: FinitePoset, strict: bool, values: Sequence[int] = (0, 1, 2)) -> CheckReport:
    """Every pair of functions X -> ``values``; first failure in lexicographic order."""
    Z = X.zeta_matrix(strict)
    F = np.array(list(itertools.product(values, repeat=X.n)), dtype=np.int64)
    PF = F @ Z
    fg = F[:, None, :] * F[None, :, :]
    lhs = PF[:, None, :] * PF[None, :, :]
    rhs = (PF[:, None, :] * F[None, :, :]) @ Z + (F[:, None, :] * PF[None, :, :]) @ Z
    if strict:
        rhs = rhs + fg @ Z
    else:
        lhs = lhs + fg @ Z
    bad = np.argwhere((lhs != rhs).any(axis=2))
    name = "%s[%s]" % ("P_<" if strict else "P_<=", X.name)
    weight = 1 if strict else -1
    total = len(F) ** 2
    if len(bad) == 0:
        return CheckReport(name, weight, total, None, None, "holds")
    a, b = (int(v) for v in bad[0])
    j = int(np.argmax(lhs[a, b] != rhs[a, b]))
    return CheckReport(name, weight, total, None, None, "fails", {
        "f": [int(v) for v in F[a]], "g": [int(v) for v in F[b]], "at": j + 1,
        "lhs": str(int(lhs[a, b, j])), "rhs": str(int(rhs[a, b, j])),
    })


# -- incidence algebra -----------------------------------------------------

class IncidenceElement:
    """A(i, j) defined for i <= j only; interval convolution product."""

    __slots__ = ("poset", "entries")

    def __init__(self, poset: FinitePoset, entries: Dict[Tuple[int, int], object]):
        for (i, j), v in entries.items():
            if v and not poset.le(i - 1, j - 1):
                raise PosetError("incidence entry at (%d, %d) but %d is not <= %d" % (i, j, i, j))
        self.poset = poset
        self.entries = {k: v for k, v in entries.items() if v}

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def __add__(self, other: "IncidenceElement"):
        keys = set(self.entries) | set(other.entries)
        return IncidenceElement(self.poset, {k: self[k] + other[k] for k in keys})

    def __sub__(self, other: "IncidenceElement"):
        keys = set(self.entries) | set(other.entries)
        return IncidenceElement(self.poset, {k: self[k] - other[k] for k in keys})

    def __mul__(self, other: "IncidenceElement"):
        return incidence_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, IncidenceElement) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __repr__(self):
        return "IncidenceElement(%s)" % dict(sorted(self.entries.items()))


def incidence_mul(A: IncidenceElement, B: IncidenceElement) -> IncidenceElement:
    X = A.poset
    out = {}
    for i in range(1, X.n + 1):
        for k in range(1, X.n + 1):
            if not X.le(i - 1, k - 1):
                continue
            total = 0
            for j in range(1, X.n + 1):
                if X.le(i - 1, j - 1) and X.le(j - 1, k - 1):
                    total = total + A[i, j] * B[j, k]
            out[i, k] = total
    return IncidenceElement(X, out)


def zeta(X: FinitePoset) -> IncidenceElement:
    return IncidenceElement(X, {(i + 1, j + 1): 1 for i in range(X.n) for j in range(X.n) if X.le(i, j)})


def zeta_strict(X: FinitePoset) -> IncidenceElement:
    return IncidenceElement(X, {(i + 1, j + 1): 1 for i in range(X.n) for j in range(X.n) if X.lt(i, j)})


def delta(X: FinitePoset) -> IncidenceElement:
    return IncidenceElement(X, {(i + 1, i + 1): 1 for i in range(X.n)})


def incidence_P(A: IncidenceElement, f: PosetFunction) -> PosetFunction:
    """P_A(f)(j) = sum over i <= j of A(i, j) f(i)."""
    X = A.poset
    out = []
    for j in range(1, X.n + 1):
        total = 0
        for i in range(1, X.n + 1):
            if X.le(i - 1, j - 1):
                total = total + A[i, j] * f[i]
        out.append(total)
    return PosetFunction(X, out)


def incidence_operator(A: IncidenceElement, weight: int) -> RbOperator:
    return RbOperator("P_A", weight, lambda f: incidence_P(A, f), function_domain(A.poset))


def incidence_rb_check(A: IncidenceElement, weight: int, values: Sequence[int] = (0, 1)):
    """First (f, g, difference) over all functions with the given values, or None."""
    op = incidence_operator(A, weight)
    X = A.poset
    fs = [PosetFunction(X, v) for v in itertools.product(values, repeat=X.n)]
    for f in fs:
        for g in fs:
            lhs, rhs = rb_sides(op, f, g)
            d = op.domain.diff(lhs, rhs, 0)
            if d is not None:
                return f, g, d
    return None


def random_incidence(X: FinitePoset, rng: random.Random, lo: int = 0, hi: int = 3) -> IncidenceElement:
    return IncidenceElement(X, {(i + 1, j + 1): rng.randint(lo, hi)
                                for i in range(X.n) for j in range(X.n) if X.le(i, j)})


def incidence_rb_counterexample(X: FinitePoset, trials: int = 100, seed=0) -> CheckReport:
    """Search random incidence elements A for a failure of either weight.

    A = zeta is skipped at weight -1 and the strict zeta at weight +1, where
    the identities are known to hold.
    """
    z, zs = zeta(X), zeta_strict(X)
    for t in range(trials):
        A = random_incidence(X, sample_rng(seed, t))
        for weight in (-1, 1):
            if (weight == -1 and A == z) or (weight == 1 and A == zs):
                continue
            found = incidence_rb_check(A, weight)
            if found is not None:
                f, g, d = found
                return CheckReport("P_A[%s]" % X.name, weight, t + 1, None, seed, "fails", {
                    "trial": t, "A": [[i, j, format_coefficient(v)] for (i, j), v in sorted(A.entries.items())],
                    "f": list(f.values), "g": list(g.values), "at": d[0], "lhs": d[1], "rhs": d[2],
                })
    return CheckReport("P_A[%s]" % X.name, None, trials, None, seed, "holds")
