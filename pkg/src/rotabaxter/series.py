"""Sparse truncated series.

A :class:`TruncatedSeries` is a finite map from basis indices to exact
coefficients together with an explicit truncation bound. Four bases are
supported:

``laurent``
    index ``n`` in Z stands for ``z^n``; bound is a pair ``(lo, hi)`` with
    ``lo <= 0`` and every stored index inside ``[lo, hi]``.
``divided``
    index is a :class:`MultiIndex` ``m`` standing for ``x^m / m!``; bound is
    the maximal total degree.
``qdivided``
    index ``n >= 0`` stands for ``x^n / [n]_q!``; bound is the maximal
    degree.
``word``
    index is a tuple of alphabet symbols (a word in non-commuting
    variables); bound is the maximal word length.

Divided coefficients are always the stored normal form. Coefficients beyond
the bound are unknown, never zero, and comparing past the bound raises
:class:`TruncationError`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

from .exact_rings import (
    Coefficient,
    CoefficientError,
    QPoly,
    format_coefficient,
    parse_coefficient,
    q_binomial,
)

BASES = ("laurent", "divided", "qdivided", "word")

DEFAULT_ORDER = 10


class SeriesError(ValueError):
    pass


class BasisMismatch(SeriesError):
    pass


class TruncationError(SeriesError):
    pass


def _var_key(v) -> str:
    return str(v)


class MultiIndex:
    """Finitely supported map from variables to positive exponents."""

    __slots__ = ("_items", "_hash")

    def __init__(self, exps: Union[Dict[Hashable, int], Iterable[Tuple[Hashable, int]], None] = None):
        if exps is None:
            pairs: Iterable = ()
        elif isinstance(exps, dict):
            pairs = exps.items()
        else:
            pairs = exps
        acc: Dict[Hashable, int] = {}
        for v, e in pairs:
            if e < 0:
                raise ValueError("negative exponent %r for %r" % (e, v))
            acc[v] = acc.get(v, 0) + e
        self._items = tuple(sorted(((v, e) for v, e in acc.items() if e), key=lambda kv: _var_key(kv[0])))
        self._hash = hash(self._items)

    @classmethod
    def single(cls, var, n: int = 1) -> "MultiIndex":
        return cls(((var, n),))

    def items(self) -> Tuple[Tuple[Hashable, int], ...]:
        return self._items

    def __getitem__(self, v) -> int:
        for w, e in self._items:
            if w == v:
                return e
        return 0

    def support(self) -> frozenset:
        return frozenset(v for v, _ in self._items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self._items + other._items)

    def shift(self, var, by: int) -> Optional["MultiIndex"]:
        """Exponent of ``var`` moved by ``by``; ``None`` if it would go negative."""
        e = self[var] + by
        if e < 0:
            return None
        d = dict(self._items)
        d[var] = e
        return MultiIndex(d)

    def binom(self, part: "MultiIndex") -> int:
        out = 1
        for v, e in self._items:
            out *= math.comb(e, part[v])
        return out

    def factorial(self) -> int:
        out = 1
        for _, e in self._items:
            out *= math.factorial(e)
        return out

    def __eq__(self, other):
        return isinstance(other, MultiIndex) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.degree, tuple((_var_key(v), e) for v, e in self._items))

    def __repr__(self):
        if not self._items:
            return "MultiIndex()"
        return "MultiIndex(%s)" % ", ".join("%s^%d" % (v, e) for v, e in self._items)


Index = Union[int, MultiIndex, Tuple]
Trunc = Union[int, Tuple[int, int]]


def degree_of(basis: str, index) -> int:
    if basis in ("laurent", "qdivided"):
        return index
    if basis == "divided":
        return index.degree
    return len(index)


def sort_key(basis: str, index):
    if basis == "divided":
        return index.sort_key()
    if basis == "word":
        return (len(index), tuple(map(str, index)))
    return index


def _upper(basis: str, trunc) -> int:
    return trunc[1] if basis == "laurent" else trunc


class TruncatedSeries:
    """Immutable sparse series with a truncation bound."""

    __slots__ = ("basis", "terms", "trunc")

    def __init__(self, basis: str, terms: Optional[Dict[Any, Coefficient]] = None, trunc: Optional[Trunc] = None):
        if basis not in BASES:
            raise SeriesError("unknown basis %r" % basis)
        terms = dict(terms or {})
        if basis == "qdivided":
            terms = {n: (c if isinstance(c, QPoly) else QPoly._coerce(c)) for n, c in terms.items()}
        terms = {k: c for k, c in terms.items() if c}
        if basis == "laurent":
            if trunc is None:
                lo = min([0] + list(terms))
                hi = max([DEFAULT_ORDER] + list(terms))
                trunc = (lo, hi)
            lo, hi = trunc
            if lo > 0:
                raise SeriesError("laurent lower bound must be <= 0, got %d" % lo)
            bad = [n for n in terms if n < lo]
            if bad:
                raise SeriesError("laurent index %d below lower bound %d" % (min(bad), lo))
            terms = {n: c for n, c in terms.items() if n <= hi}
            trunc = (int(lo), int(hi))
        else:
            if trunc is None:
                trunc = max([DEFAULT_ORDER] + [degree_of(basis, k) for k in terms])
            if basis == "qdivided":
                if any(n < 0 for n in terms):
                    raise SeriesError("q-divided indices must be >= 0")
            if basis == "divided":
                for k in terms:
                    if not isinstance(k, MultiIndex):
                        raise SeriesError("divided indices must be MultiIndex, got %r" % (k,))
            if basis == "word":
                terms = {tuple(k): c for k, c in terms.items()}
            terms = {k: c for k, c in terms.items() if degree_of(basis, k) <= trunc}
        self.basis = basis
        self.terms = terms
        self.trunc = trunc

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, basis: str, trunc: Optional[Trunc] = None) -> "TruncatedSeries":
        return cls(basis, {}, trunc)

    @classmethod
    def one(cls, basis: str, trunc: Optional[Trunc] = None) -> "TruncatedSeries":
        idx = {"laurent": 0, "divided": MultiIndex(), "qdivided": 0, "word": ()}[basis]
        return cls(basis, {idx: 1}, trunc)

    def like(self, terms: Dict[Any, Coefficient], trunc: Optional[Trunc] = None) -> "TruncatedSeries":
        return TruncatedSeries(self.basis, terms, self.trunc if trunc is None else trunc)

    # -- inspection -----------------------------------------------------
    @property
    def order(self) -> int:
        """Highest degree through which the coefficients are known."""
        return _upper(self.basis, self.trunc)

    def __getitem__(self, index) -> Coefficient:
        return self.terms.get(index, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Any, Coefficient]]:
        return sorted(self.terms.items(), key=lambda kv: sort_key(self.basis, kv[0]))

    def min_degree(self) -> Optional[int]:
        if not self.terms:
            return None
        return min(degree_of(self.basis, k) for k in self.terms)

    def variables(self) -> frozenset:
        if self.basis != "divided":
            return frozenset()
        out = set()
        for m in self.terms:
            out |= m.support()
        return frozenset(out)

    # -- arithmetic -----------------------------------------------------
    def _check_same(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise BasisMismatch("expected a TruncatedSeries, got %r" % (other,))
        if other.basis != self.basis:
            raise BasisMismatch("basis mismatch: %s vs %s" % (self.basis, other.basis))

    def __add__(self, other):
        return series_add(self, other)

    def __neg__(self):
        return self.like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return series_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "TruncatedSeries":
        return self.like({k: c * v for k, v in self.terms.items()})

    def map_coefficients(self, fn: Callable[[Coefficient], Coefficient]) -> "TruncatedSeries":
        return self.like({k: fn(v) for k, v in self.terms.items()})

    def restrict(self, keep: Callable[[Any], bool]) -> "TruncatedSeries":
        return self.like({k: v for k, v in self.terms.items() if keep(k)})

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise TruncationError("cannot extend truncation from %d to %d" % (self.order, order))
        trunc = (self.trunc[0], order) if self.basis == "laurent" else order
        return self.like(self.terms, trunc)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.basis == other.basis and self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, self.trunc, frozenset(self.terms.items())))

    def __repr__(self):
        return "TruncatedSeries(%s, %s, trunc=%r)" % (self.basis, format_series(self), self.trunc)

    def __str__(self):
        return format_series(self)


# -- ring operations ----------------------------------------------------

def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    f._check_same(g)
    out = dict(f.terms)
    for k, c in g.terms.items():
        out[k] = out.get(k, 0) + c
    if f.basis == "laurent":
        trunc: Trunc = (min(f.trunc[0], g.trunc[0]), min(f.trunc[1], g.trunc[1]))
    else:
        trunc = min(f.trunc, g.trunc)
    return TruncatedSeries(f.basis, out, trunc)


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Graded convolution with the structure constants of the basis."""
    f._check_same(g)
    basis = f.basis
    out: Dict[Any, Coefficient] = {}
    if basis == "laurent":
        lo = f.trunc[0] + g.trunc[0]
        hi = min(f.trunc[1] + g.trunc[0], g.trunc[1] + f.trunc[0])
        for a, ca in f.terms.items():
            for b, cb in g.terms.items():
                n = a + b
                if n <= hi:
                    out[n] = out.get(n, 0) + ca * cb
        return TruncatedSeries(basis, out, (lo, hi))
    trunc = min(f.trunc, g.trunc)
    if basis == "divided":
        out = divided_convolve(f.terms, g.terms, trunc)
    elif basis == "qdivided":
        for a, ca in f.terms.items():
            for b, cb in g.terms.items():
                n = a + b
                if n <= trunc:
                    out[n] = out.get(n, 0) + q_binomial(n, a) * ca * cb
    else:
        for u, cu in f.terms.items():
            for v, cv in g.terms.items():
                w = u + v
                if len(w) <= trunc:
                    out[w] = out.get(w, 0) + cu * cv
    return TruncatedSeries(basis, out, trunc)


def divided_convolve(f: Dict[MultiIndex, Coefficient], g: Dict[MultiIndex, Coefficient],
                     max_degree: Optional[int] = None,
                     degree: Callable[[MultiIndex], int] = lambda m: m.degree) -> Dict[MultiIndex, Coefficient]:
    """(fg)(m) = sum over m1 + m2 = m of binom(m, m1) f(m1) g(m2)."""
    out: Dict[MultiIndex, Coefficient] = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = m1 + m2
            if max_degree is not None and degree(m) > max_degree:
                continue
            out[m] = out.get(m, 0) + m.binom(m1) * c1 * c2
    return {m: c for m, c in out.items() if c}


# -- comparisons --------------------------------------------------------

def _check_order(f: TruncatedSeries, g: TruncatedSeries, order: int) -> None:
    f._check_same(g)
    if order > f.order or order > g.order:
        raise TruncationError(
            "comparison order %d exceeds truncation (%d, %d)" % (order, f.order, g.order))


def series_eq_to_order(f: TruncatedSeries, g: TruncatedSeries, order: int) -> bool:
    return first_difference(f, g, order) is None


def first_difference(f: TruncatedSeries, g: TruncatedSeries, order: int):
    """First (index, f-coefficient, g-coefficient) disagreeing through ``order``."""
    _check_order(f, g, order)
    basis = f.basis
    keys = set(f.terms) | set(g.terms)
    for k in sorted(keys, key=lambda k: sort_key(basis, k)):
        if degree_of(basis, k) > order:
            continue
        if f[k] != g[k]:
            return k, f[k], g[k]
    return None


# -- substitution -------------------------------------------------------

def _single_var(f: TruncatedSeries) -> Optional[Hashable]:
    vs = f.variables()
    if len(vs) > 1:
        raise SeriesError("expected a single-variable divided series, found %s" % sorted(map(str, vs)))
    return next(iter(vs)) if vs else None


def to_monomial(f: TruncatedSeries) -> Dict[int, Fraction]:
    """Single-variable divided series as ``{n: monomial coefficient}``."""
    if f.basis != "divided":
        raise BasisMismatch("expected divided basis, got %s" % f.basis)
    _single_var(f)
    return {m.degree: Fraction(c) / math.factorial(m.degree) for m, c in f.terms.items()}


def from_monomial(coeffs: Dict[int, Fraction], trunc: int, var="x", integral: bool = True) -> TruncatedSeries:
    terms = {}
    for n, a in coeffs.items():
        c = a * math.factorial(n)
        if integral and isinstance(c, Fraction) and c.denominator == 1:
            c = int(c)
        terms[MultiIndex.single(var, n)] = c
    return TruncatedSeries("divided", terms, trunc)


def series_substitute(f: TruncatedSeries, g: TruncatedSeries, order: int) -> TruncatedSeries:
    """Composition f(g(x)) through total degree ``order``."""
    f._check_same(g)
    if f.basis != "divided":
        raise BasisMismatch("substitution is defined on divided series only")
    for c in list(f.terms.values()) + list(g.terms.values()):
        if isinstance(c, QPoly):
            raise CoefficientError("substitution needs integer or rational coefficients")
    if order > min(f.order, g.order):
        raise TruncationError("order %d exceeds truncation" % order)
    vf, vg = _single_var(f), _single_var(g)
    var = vg if vg is not None else (vf if vf is not None else "x")
    if g[MultiIndex()]:
        raise SeriesError("inner series has nonzero constant term")
    integral = not any(isinstance(c, Fraction) for c in list(f.terms.values()) + list(g.terms.values()))
    fm, gm = to_monomial(f), to_monomial(g)
    result: Dict[int, Fraction] = {}
    power: Dict[int, Fraction] = {0: Fraction(1)}
    for n in range(order + 1):
        a = fm.get(n)
        if a:
            for d, c in power.items():
                result[d] = result.get(d, 0) + a * c
        nxt: Dict[int, Fraction] = {}
        for d1, c1 in power.items():
            for d2, c2 in gm.items():
                if d1 + d2 <= order:
                    nxt[d1 + d2] = nxt.get(d1 + d2, 0) + c1 * c2
        power = nxt
        if not power:
            break
    return from_monomial({n: c for n, c in result.items() if c}, order, var, integral)


# -- matrices -----------------------------------------------------------

class SeriesMatrix:
    """Square matrix over series (or bare coefficients)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise SeriesError("matrix must be square and non-empty")
        bases = {e.basis for r in rows for e in r if isinstance(e, TruncatedSeries)}
        if len(bases) > 1:
            raise BasisMismatch("matrix entries mix bases %s" % sorted(bases))
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int, one=1, zero=0) -> "SeriesMatrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(e) for e in r] for r in self.rows])

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.n != other.n:
            raise SeriesError("dimension mismatch %d vs %d" % (self.n, other.n))
        return SeriesMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        return matrix_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, SeriesMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "SeriesMatrix(%r)" % (self.rows,)


def matrix_mul(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    if a.n != b.n:
        raise SeriesError("dimension mismatch %d vs %d" % (a.n, b.n))
    n = a.n
    return SeriesMatrix([
        [reduce(lambda s, t: s + t, (a[i, k] * b[k, j] for k in range(n))) for j in range(n)]
        for i in range(n)
    ])


# -- text and JSON ------------------------------------------------------

def _fmt_index(basis: str, k) -> str:
    if basis == "laurent":
        return "1" if k == 0 else ("z" if k == 1 else "z^%d" % k)
    if basis == "qdivided":
        return "1" if k == 0 else ("x" if k == 1 else "x^%d/[%d]!" % (k, k))
    if basis == "word":
        return "".join("x%s" % s for s in k) if k else "1"
    if not k.items():
        return "1"
    return "*".join(str(v) if e == 1 else "%s^%d/%d!" % (v, e, e) for v, e in k.items())


def format_series(f: TruncatedSeries) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for k, c in f.sorted_terms():
        cs = format_coefficient(c)
        idx = _fmt_index(f.basis, k)
        if idx == "1":
            parts.append(cs)
        elif cs == "1":
            parts.append(idx)
        else:
            parts.append("(%s)*%s" % (cs, idx))
    return " + ".join(parts)


def _index_to_json(basis: str, k):
    if basis in ("laurent", "qdivided"):
        return k
    if basis == "divided":
        return [[str(v), e] for v, e in k.items()]
    return list(k)


def series_to_json(f: TruncatedSeries) -> dict:
    trunc = list(f.trunc) if f.basis == "laurent" else f.trunc
    return {
        "basis": {"laurent": "laurent", "divided": "divided", "qdivided": "qdivided", "word": "word"}[f.basis],
        "trunc": trunc,
        "terms": [[_index_to_json(f.basis, k), format_coefficient(c)] for k, c in f.sorted_terms()],
    }


def series_from_json(d: dict, var_parser: Callable[[str], Hashable] = lambda s: s,
                     coefficient_kind: str = "auto") -> TruncatedSeries:
    basis = d["basis"]
    if basis not in BASES:
        raise SeriesError("unknown basis %r" % basis)
    kind = "qpoly" if basis == "qdivided" else coefficient_kind
    terms: Dict[Any, Coefficient] = {}
    for idx, cs in d["terms"]:
        c = parse_coefficient(str(cs), kind)
        if basis in ("laurent", "qdivided"):
            key: Any = int(idx)
        elif basis == "divided":
            key = MultiIndex([(var_parser(v), int(e)) for v, e in idx])
        else:
            key = tuple(idx)
        if key in terms:
            raise SeriesError("duplicate index %r" % (idx,))
        terms[key] = c
    trunc = d.get("trunc")
    if basis == "laurent" and trunc is not None:
        trunc = (int(trunc[0]), int(trunc[1]))
    return TruncatedSeries(basis, terms, trunc)


# -- small helpers used across the package --------------------------------

def laurent(terms: Dict[int, Coefficient], lo: Optional[int] = None, hi: Optional[int] = None) -> TruncatedSeries:
    if lo is None:
        lo = min([0] + list(terms))
    if hi is None:
        hi = max([DEFAULT_ORDER] + list(terms))
    return TruncatedSeries("laurent", terms, (lo, hi))


def divided(terms: Dict[int, Coefficient], trunc: int = DEFAULT_ORDER, var="x") -> TruncatedSeries:
    """Single-variable divided series from ``{n: divided coefficient}``."""
    return TruncatedSeries("divided", {MultiIndex.single(var, n): c for n, c in terms.items()}, trunc)


def qdivided(terms: Dict[int, Coefficient], trunc: int = DEFAULT_ORDER) -> TruncatedSeries:
    return TruncatedSeries("qdivided", terms, trunc)


def words(terms: Dict[Tuple, Coefficient], trunc: int = DEFAULT_ORDER) -> TruncatedSeries:
    return TruncatedSeries("word", terms, trunc)


def iter_degree_slots(basis: str, order: int, lo: int = 0, variables: Iterable = ("x",),
                      alphabet: Iterable = (1, 2)) -> Iterator:
    """All basis indices of degree <= ``order`` (and >= ``lo`` for Laurent)."""
    if basis == "laurent":
        yield from range(lo, order + 1)
    elif basis == "qdivided":
        yield from range(0, order + 1)
    elif basis == "word":
        alphabet = tuple(alphabet)
        layer: List[Tuple] = [()]
        for n in range(order + 1):
            yield from layer
            layer = [w + (a,) for w in layer for a in alphabet]
    else:
        variables = tuple(variables)

        def rec(i, remaining):
            if i == len(variables):
                yield ()
                return
            for e in range(remaining + 1):
                for rest in rec(i + 1, remaining - e):
                    yield ((variables[i], e),) + rest

        for pairs in rec(0, order):
            yield MultiIndex(pairs)
