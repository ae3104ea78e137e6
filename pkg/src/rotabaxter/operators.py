"""Rota-Baxter operators and the generic identity verifier.

An operator ``P`` of weight ``lam`` satisfies

    P(f) P(g) = P(P(f) g) + P(f P(g)) + lam P(f g).

Every check here is run in the subtraction-free arrangement, moving the
``lam P(fg)`` term to whichever side keeps all coefficients positive, so the
same code verifies rings and semirings.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple

from .exact_rings import QPoly, format_coefficient
from .series import (
    BasisMismatch,
    MultiIndex,
    SeriesError,
    SeriesMatrix,
    TruncatedSeries,
    first_difference,
    iter_degree_slots,
    series_substitute,
    series_to_json,
    _index_to_json,
)


class OperatorError(ValueError):
    pass


class DivergentSumError(OperatorError):
    """The geometric sum of an endomorphism does not terminate degree-wise."""


class NotIdempotentError(OperatorError):
    pass


# -- domains -------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """What an operator acts on: how to sample, compare and serialize it.

    ``diff(a, b, order)`` returns ``None`` when the elements agree through
    ``order``, otherwise ``(location, a_value, b_value)`` already in JSON form.
    """

    name: str
    sample: Callable[[random.Random, int], Any]
    diff: Callable[[Any, Any, int], Optional[Tuple[Any, str, str]]]
    to_json: Callable[[Any], Any]
    kind: str = "series"
    basis: Optional[str] = None
    semiring: bool = False
    generators: Optional[Callable[[int], Iterable[Any]]] = None


def _coeff_sampler(semiring: bool, coeff: str):
    lo = 0 if semiring else -9

    def draw(rng: random.Random):
        if coeff == "qpoly":
            return QPoly([rng.randint(lo, 9) for _ in range(3)])
        return rng.randint(lo, 9)

    return draw


def _series_diff(a: TruncatedSeries, b: TruncatedSeries, order: int):
    d = first_difference(a, b, order)
    if d is None:
        return None
    k, x, y = d
    return _index_to_json(a.basis, k), format_coefficient(x), format_coefficient(y)


def series_domain(basis: str, *, lo: int = -3, variables: Sequence = ("x",), alphabet: Sequence = (1, 2),
                  semiring: bool = False, coeff: str = "int", density: float = 0.5,
                  keep: Optional[Callable[[Any], bool]] = None, depth: int = 2,
                  name: Optional[str] = None) -> Domain:
    """Random polynomial samples of a series ring.

    Each basis slot of degree <= order is filled with probability ``density``
    by a coefficient uniform in [-9, 9] ([0, 9] for semirings). ``keep``
    restricts the slots (e.g. zero constant term). Laurent samples are
    polynomials, so they may honestly declare an upper bound of
    ``order + depth*|lo|``; this keeps products valid through ``order``.
    """
    draw = _coeff_sampler(semiring, coeff)

    def slots(order):
        for k in iter_degree_slots(basis, order, lo=lo, variables=variables, alphabet=alphabet):
            if keep is None or keep(k):
                yield k

    def sample(rng: random.Random, order: int) -> TruncatedSeries:
        terms = {}
        for k in slots(order):
            if rng.random() < density:
                terms[k] = draw(rng)
        if basis == "laurent":
            return TruncatedSeries(basis, terms, (lo, order - depth * lo))
        return TruncatedSeries(basis, terms, order)

    def generators(order):
        trunc = (lo, order - depth * lo) if basis == "laurent" else order
        for k in slots(order):
            yield TruncatedSeries(basis, {k: 1}, trunc)

    return Domain(name or basis, sample, _series_diff, series_to_json, "series", basis, semiring, generators)


def coefficient_domain(semiring: bool = False, coeff: str = "qpoly") -> Domain:
    draw = _coeff_sampler(semiring, coeff)

    def diff(a, b, order):
        return None if a == b else ([], format_coefficient(a), format_coefficient(b))

    return Domain("coefficient-" + coeff, lambda rng, order: draw(rng), diff, format_coefficient,
                  kind="coefficient", semiring=semiring)


def matrix_domain(entry: Domain, n: int) -> Domain:
    def sample(rng, order):
        return SeriesMatrix([[entry.sample(rng, order) for _ in range(n)] for _ in range(n)])

    def diff(a: SeriesMatrix, b: SeriesMatrix, order):
        for i in range(n):
            for j in range(n):
                d = entry.diff(a[i, j], b[i, j], order)
                if d is not None:
                    return [[i, j], d[0]], d[1], d[2]
        return None

    def to_json(m):
        return [[entry.to_json(e) for e in r] for r in m.rows]

    return Domain("M%d(%s)" % (n, entry.name), sample, diff, to_json, "matrix", entry.basis, entry.semiring)


# -- operators -----------------------------------------------------------

@dataclass(frozen=True)
class RbOperator:
    name: str
    weight: int
    apply: Callable[[Any], Any]
    domain: Optional[Domain] = None
    twist: Optional[Callable[[Any], Any]] = None

    def __call__(self, x):
        return self.apply(x)

    def power(self, k: int, x):
        for _ in range(k):
            x = self.apply(x)
        return x


@dataclass
class CheckReport:
    op: str
    weight: Optional[int]
    samples: int
    order: Optional[int]
    seed: Any
    verdict: str
    witness: Optional[Dict[str, Any]] = None

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> Dict[str, Any]:
        return {
            "op": self.op,
            "weight": self.weight,
            "samples": self.samples,
            "order": self.order,
            "seed": self.seed,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def sample_rng(seed, i: int) -> random.Random:
    # string seeds hash through sha512, so this is stable across runs
    return random.Random("%s:%d" % (seed, i))


def _require_domain(op: RbOperator) -> Domain:
    if op.domain is None:
        raise OperatorError("operator %s has no sampling domain" % op.name)
    return op.domain


def rb_sides(op: RbOperator, f, g):
    """Both sides of the weight-lam identity, subtraction-free."""
    P = op.apply
    pf, pg = P(f), P(g)
    lhs = pf * pg
    rhs = P(pf * g) + P(f * pg)
    if op.weight == -1:
        lhs = lhs + P(f * g)
    elif op.weight == 1:
        rhs = rhs + P(f * g)
    elif op.weight != 0:
        raise OperatorError("weight must be -1, 0 or 1, got %r" % op.weight)
    return lhs, rhs


def twisted_sides(op: RbOperator, f, g):
    if op.twist is None:
        raise OperatorError("operator %s has no twist" % op.name)
    P, S = op.apply, op.twist
    pf, pg = P(f), P(g)
    return pf * pg, P(pf * g) + P(f * S(pg))


def _witness(dom: Domain, i, f, g, d, **extra):
    w = {"sample": i, "f": dom.to_json(f), "g": dom.to_json(g),
         "at": d[0], "lhs": d[1], "rhs": d[2]}
    w.update(extra)
    return w


def _run_pairs(op: RbOperator, sides, samples: int, order: int, seed, name=None, weight="op") -> CheckReport:
    dom = _require_domain(op)
    for i in range(samples):
        rng = sample_rng(seed, i)
        f = dom.sample(rng, order)
        g = dom.sample(rng, order)
        lhs, rhs = sides(op, f, g)
        d = dom.diff(lhs, rhs, order)
        if d is not None:
            return CheckReport(name or op.name, op.weight if weight == "op" else weight, samples, order, seed,
                               "fails", _witness(dom, i, f, g, d))
    return CheckReport(name or op.name, op.weight if weight == "op" else weight, samples, order, seed, "holds")


def check_rb_identity(op: RbOperator, samples: int, order: int, seed=0) -> CheckReport:
    return _run_pairs(op, rb_sides, samples, order, seed)


def check_rb_pair(op: RbOperator, f, g, order: int) -> Optional[Tuple[Any, str, str]]:
    """Check one explicit pair; ``None`` when the identity holds."""
    lhs, rhs = rb_sides(op, f, g)
    return _require_domain(op).diff(lhs, rhs, order)


def check_twisted_rb(op: RbOperator, samples: int, order: int, seed=0) -> CheckReport:
    if op.twist is None:
        raise OperatorError("operator %s has no twist" % op.name)
    return _run_pairs(op, twisted_sides, samples, order, seed, name=op.name + "+twist", weight=None)


def check_additivity(op: RbOperator, samples: int, order: int, seed=0) -> CheckReport:
    def sides(op, f, g):
        return op.apply(f + g), op.apply(f) + op.apply(g)
    return _run_pairs(op, sides, samples, order, seed, name=op.name + ":additive")


def check_idempotent(op: RbOperator, samples: int, order: int, seed=0) -> CheckReport:
    def sides(op, f, g):
        return op.apply(op.apply(f)), op.apply(f)
    return _run_pairs(op, sides, samples, order, seed, name=op.name + ":idempotent")


# -- generic operators ---------------------------------------------------

def zero_operator(domain: Domain, weight: int = 0) -> RbOperator:
    def apply(f):
        if isinstance(f, TruncatedSeries):
            return f.like({})
        if isinstance(f, SeriesMatrix):
            return f.map(lambda e: e.like({}) if isinstance(e, TruncatedSeries) else 0 * e)
        return 0 * f
    return RbOperator("zero", weight, apply, domain)


def identity_operator(domain: Domain, weight: int = -1) -> RbOperator:
    return RbOperator("identity", weight, lambda f: f, domain)


# -- the catalog ---------------------------------------------------------

def _require_basis(f: TruncatedSeries, basis: str) -> None:
    if not isinstance(f, TruncatedSeries) or f.basis != basis:
        got = f.basis if isinstance(f, TruncatedSeries) else type(f).__name__
        raise BasisMismatch("expected %s series, got %s" % (basis, got))


def laurent_negative_part(f: TruncatedSeries) -> TruncatedSeries:
    """Keep exactly the terms of negative degree."""
    _require_basis(f, "laurent")
    return f.restrict(lambda n: n < 0)


def laurent_negative_operator(lo: int = -3) -> RbOperator:
    return RbOperator("laurent_negative_part", -1, laurent_negative_part, series_domain("laurent", lo=lo))


def _divided_var(f: TruncatedSeries, var):
    if var is not None:
        return var
    vs = f.variables()
    if len(vs) > 1:
        raise SeriesError("integration needs a single-variable divided series")
    return next(iter(vs)) if vs else "x"


def integrate(f: TruncatedSeries, var=None) -> TruncatedSeries:
    """x^n/n! -> x^(n+1)/(n+1)!; the result keeps the input's truncation."""
    _require_basis(f, "divided")
    var = _divided_var(f, var)
    out = {}
    for m, c in f.terms.items():
        if m.support() - {var}:
            raise SeriesError("integration needs a single-variable divided series")
        out[m.shift(var, 1)] = c
    return f.like(out)


def integration_operator() -> RbOperator:
    return RbOperator("integrate", 0, integrate, series_domain("divided"))


def q_derive(f: TruncatedSeries) -> TruncatedSeries:
    _require_basis(f, "qdivided")
    return TruncatedSeries("qdivided", {n - 1: c for n, c in f.terms.items() if n >= 1}, f.trunc - 1)


def q_integrate(f: TruncatedSeries) -> TruncatedSeries:
    _require_basis(f, "qdivided")
    return f.like({n + 1: c for n, c in f.terms.items()})


def q_shift(f: TruncatedSeries) -> TruncatedSeries:
    _require_basis(f, "qdivided")
    return f.like({n: QPoly.q(n) * c for n, c in f.terms.items()})


def q_integration_operator(coeff: str = "int") -> RbOperator:
    return RbOperator("q_integrate", 0, q_integrate, series_domain("qdivided", coeff=coeff), twist=q_shift)


def project_support(f: TruncatedSeries, J: Iterable) -> TruncatedSeries:
    """Keep the terms whose multi-index support lies inside ``J``."""
    _require_basis(f, "divided")
    J = frozenset(J)
    return f.restrict(lambda m: m.support() <= J)


def projection_operator(J: Iterable, variables: Sequence = ("x1", "x2", "x3")) -> RbOperator:
    J = frozenset(J)
    name = "p_J{%s}" % ",".join(sorted(map(str, J)))
    return RbOperator(name, -1, lambda f: project_support(f, J), series_domain("divided", variables=variables))


# -- geometric sums of endomorphisms ---------------------------------------

def substitution_endomorphism(g: TruncatedSeries) -> Callable[[TruncatedSeries], TruncatedSeries]:
    """f -> f(g(x)) on single-variable divided series."""
    def F(f: TruncatedSeries) -> TruncatedSeries:
        return series_substitute(f, g.truncate(f.order) if g.order > f.order else g, f.order)
    return F


def geometric_sum_rb(F: Callable, order: int, domain: Domain, name: str = "geometric_sum") -> RbOperator:
    """Operator f -> sum_{n>=0} F^n(f), truncated at ``order``.

    ``F`` must raise the minimal degree of every basis generator of
    ``domain``; this is probed once up front.
    """
    if domain.generators is None:
        raise OperatorError("domain %s has no basis generators to probe" % domain.name)
    for e in domain.generators(order):
        img = F(e)
        if img.is_zero():
            continue
        if img.min_degree() <= e.min_degree():
            raise DivergentSumError(
                "divergent geometric sum: F does not raise the degree of generator %s" % e)

    def apply(f):
        total = f
        cur = f
        for _ in range(order + 1):
            cur = F(cur)
            if cur.is_zero():
                break
            total = total + cur
        else:
            if not cur.is_zero():
                raise DivergentSumError("geometric sum did not terminate within order %d" % order)
        return total

    return RbOperator(name, -1, apply, domain)


def substitution_geometric_sum(g: TruncatedSeries, order: int) -> RbOperator:
    dom = series_domain("divided", keep=lambda m: m.degree >= 1, name="divided_0")
    return geometric_sum_rb(substitution_endomorphism(g), order, dom, name="geometric_sum(subst)")


# -- the two-variable shift ------------------------------------------------

def shift_xq(f: TruncatedSeries, x="x", q="q") -> TruncatedSeries:
    """s(f)(x, q) = f(qx, q) on divided series in (x, q).

    The divided term at (k, n) moves to (k, n + k) with factor (n+k)!/n!.
    """
    _require_basis(f, "divided")
    out = {}
    for m, c in f.terms.items():
        k, n = m[x], m[q]
        if m.support() - {x, q}:
            raise SeriesError("shift acts on series in %s, %s only" % (x, q))
        out[MultiIndex({x: k, q: n + k})] = c * (math.factorial(n + k) // math.factorial(n))
    return f.like(out)


def shift_operator_P(order: int) -> RbOperator:
    dom = series_domain("divided", variables=("x", "q"), keep=lambda m: m["x"] >= 1, name="divided(x,q)_x>0")
    inner = geometric_sum_rb(shift_xq, order, dom, name="P_S")

    def apply(f):
        bad = [m for m in f.terms if m["x"] == 0]
        if bad:
            raise DivergentSumError("P_S diverges on terms with zero x-degree, e.g. %r" % bad[0])
        return inner.apply(f)

    return RbOperator("P_S", -1, apply, dom)


def shift_operator_rb(order: int, samples: int = 100, seed=0) -> CheckReport:
    return check_rb_identity(shift_operator_P(order), samples, order, seed)


# -- lifts ---------------------------------------------------------------

def lift_coefficientwise(op: RbOperator, target: str, *, n: int = 2, basis: str = "word",
                         density: float = 0.5, **series_kw) -> RbOperator:
    """Apply ``op`` to every entry (``target='matrix'``) or coefficient
    (``target='series'``) of a larger ring; the weight is unchanged."""
    dom = _require_domain(op)
    if target == "matrix":
        return RbOperator("%s^M%d" % (op.name, n), op.weight, lambda m: m.map(op.apply), matrix_domain(dom, n))
    if target == "series":
        if dom.kind != "coefficient":
            raise BasisMismatch("series lift needs an operator on coefficients, %s acts on %s" % (op.name, dom.kind))
        base = series_domain(basis, **series_kw)

        def sample(rng, order):
            proto = base.sample(rng, order)
            terms = {k: dom.sample(rng, order) for k in proto.terms}
            return proto.like(terms)

        def apply(f):
            if not isinstance(f, TruncatedSeries):
                raise BasisMismatch("series lift applied to %r" % (f,))
            return f.map_coefficients(op.apply)

        lifted = Domain("%s[%s]" % (basis, dom.name), sample, _series_diff, series_to_json, "series", basis,
                        dom.semiring)
        return RbOperator("%s^%s" % (op.name, basis), op.weight, apply, lifted)
    raise OperatorError("unknown lift target %r" % target)


def q_zero_evaluation() -> RbOperator:
    """Z[q] -> Z[q], p -> p(0): an idempotent ring morphism."""
    return RbOperator("eval_q0", -1, lambda c: QPoly(QPoly._coerce(c)[0]), coefficient_domain())


# -- iterated identity ---------------------------------------------------

def nfold(x, n: int):
    """n-fold sum x + ... + x (n >= 1)."""
    return reduce(lambda a, b: a + b, [x] * n)


def iterated_sides(P: RbOperator, a: int, b: int, f, g):
    lhs = P.power(a, f) * P.power(b, g)
    terms = []
    for i in range(1, a + 1):
        terms.append(nfold(P.power(a + b - i, P.power(i, f) * g), math.comb(b - 1 + a - i, b - 1)))
    for i in range(1, b + 1):
        terms.append(nfold(P.power(a + b - i, f * P.power(i, g)), math.comb(a - 1 + b - i, a - 1)))
    return lhs, reduce(lambda s, t: s + t, terms)


def iterated_identity_check(P: RbOperator, a: int, b: int, samples: int, order: int, seed=0) -> CheckReport:
    if not (1 <= a <= 4 and 1 <= b <= 4):
        raise OperatorError("iterated identity needs 1 <= a, b <= 4, got a=%r b=%r" % (a, b))
    if P.weight != 0:
        raise OperatorError("iterated identity is for weight 0 operators")
    return _run_pairs(P, lambda op, f, g: iterated_sides(op, a, b, f, g), samples, order, seed,
                      name="%s^(%d,%d)" % (P.name, a, b))


# -- kernel / image closure ------------------------------------------------

def kernel_image_closure_check(op: RbOperator, samples: int, order: int, seed=0, ideal: bool = True) -> CheckReport:
    """Im(P) closed under + and *, Ker(P) closed under + and * (and, with
    ``ideal``, absorbing products from both sides)."""
    dom = _require_domain(op)
    idem = check_idempotent(op, samples, order, seed)
    if not idem.holds:
        raise NotIdempotentError("%s is not idempotent: %s" % (op.name, idem.witness))
    P = op.apply
    for i in range(samples):
        rng = sample_rng(seed, i)
        f, g, h = dom.sample(rng, order), dom.sample(rng, order), dom.sample(rng, order)
        a, b = P(f), P(g)
        k1, k2 = f - a, g - b
        zero = a - a
        probes = [
            ("image_sum", P(a + b), a + b),
            ("image_product", P(a * b), a * b),
            ("kernel_sum", P(k1 + k2), zero),
            ("kernel_product", P(k1 * k2), zero),
        ]
        if ideal:
            probes += [("kernel_left_ideal", P(h * k1), zero), ("kernel_right_ideal", P(k1 * h), zero)]
        for prop, x, y in probes:
            d = dom.diff(x, y, order)
            if d is not None:
                return CheckReport(op.name + ":ker/im", op.weight, samples, order, seed, "fails",
                                   _witness(dom, i, f, g, d, property=prop))
    return CheckReport(op.name + ":ker/im", op.weight, samples, order, seed, "holds")


# -- dimension pairs -------------------------------------------------------

class DimPair(tuple):
    """(dim V, dim W) for a subspace V of W; componentwise + and *."""

    def __new__(cls, a: int, b: int):
        if not 0 <= a <= b:
            raise ValueError("need 0 <= a <= b, got (%d, %d)" % (a, b))
        return super().__new__(cls, (a, b))

    def __add__(self, o):
        return DimPair(self[0] + o[0], self[1] + o[1])

    def __mul__(self, o):
        return DimPair(self[0] * o[0], self[1] * o[1])


def pair_projection(x: DimPair) -> DimPair:
    return DimPair(x[0], x[0])


def pair_quotient(x: DimPair) -> DimPair:
    return DimPair(0, x[1] - x[0])


def _pair_check(name: str, P: Callable, bound: int) -> CheckReport:
    pairs = [DimPair(a, b) for b in range(bound + 1) for a in range(b + 1)]
    n = 0
    for x in pairs:
        if P(P(x)) != P(x):
            return CheckReport(name, -1, n + 1, None, None, "fails",
                               {"property": "idempotent", "x": list(x), "lhs": list(P(P(x))), "rhs": list(P(x))})
        for y in pairs:
            n += 1
            lhs = P(x) * P(y) + P(x * y)
            rhs = P(P(x) * y) + P(x * P(y))
            if lhs != rhs:
                return CheckReport(name, -1, n, None, None, "fails",
                                   {"property": "rota_baxter", "x": list(x), "y": list(y),
                                    "lhs": list(lhs), "rhs": list(rhs)})
            if P(x * y) != P(x) * P(y):
                return CheckReport(name, -1, n, None, None, "fails",
                                   {"property": "multiplicative", "x": list(x), "y": list(y),
                                    "lhs": list(P(x * y)), "rhs": list(P(x) * P(y))})
    return CheckReport(name, -1, n, None, None, "holds")


def pair_semiring_check(bound: int = 6) -> Tuple[CheckReport, CheckReport]:
    """Exhaustive check over pairs a <= b <= bound of the two candidate
    operators: P(a, b) = (a, a) and P(a, b) = (0, b - a).

    Each is tested for idempotence, the weight -1 identity and
    multiplicativity, in that order; the first failure is the witness.
    """
    return _pair_check("pair_projection", pair_projection, bound), _pair_check("pair_quotient", pair_quotient, bound)
