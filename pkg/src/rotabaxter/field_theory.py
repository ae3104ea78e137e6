"""Divided power series on jet variables: derivatives, Euler-Lagrange
operators, the Poisson bracket and the Moyal star product.

Variables are jets ``d_I phi^j`` (kind ``jet``), their conjugates (kind
``bar``) and ``hbar``. A :class:`PhaseSeries` stores rational divided
coefficients: the term at multi-index ``m`` stands for ``prod v^m(v)/m(v)!``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact_rings import format_coefficient, parse_coefficient
from .operators import CheckReport, sample_rng
from .series import MultiIndex, divided_convolve


class FieldError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FieldVariable:
    kind: str  # "jet", "bar" or "hbar"
    I: Tuple[int, ...] = ()
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("jet", "bar", "hbar"):
            raise FieldError("unknown variable kind %r" % self.kind)
        if self.kind != "hbar" and (any(i < 0 for i in self.I) or self.j < 1):
            raise FieldError("bad jet index I=%r j=%r" % (self.I, self.j))

    @property
    def is_hbar(self) -> bool:
        return self.kind == "hbar"

    def bar(self) -> "FieldVariable":
        if self.kind == "hbar":
            raise FieldError("hbar has no conjugate")
        return FieldVariable("bar" if self.kind == "jet" else "jet", self.I, self.j)

    def base(self) -> "FieldVariable":
        """The unbarred variable k of a k / kbar pair."""
        return FieldVariable("jet", self.I, self.j) if self.kind == "bar" else self

    def __str__(self):
        if self.kind == "hbar":
            return "hbar"
        head = "u" if self.kind == "jet" else "ubar"
        return "%s%d[%s]" % (head, self.j, ",".join(map(str, self.I)))


HBAR = FieldVariable("hbar")

_VAR_RE = re.compile(r"^(u|ubar)(\d+)\[([\d,]*)\]$")


def parse_variable(text: str) -> FieldVariable:
    if text == "hbar":
        return HBAR
    m = _VAR_RE.match(text)
    if not m:
        raise FieldError("malformed field variable %r" % text)
    I = tuple(int(x) for x in m.group(3).split(",")) if m.group(3) else ()
    return FieldVariable("jet" if m.group(1) == "u" else "bar", I, int(m.group(2)))


@dataclass(frozen=True)
class Universe:
    """Jet variables for ``k`` fields on a ``d``-dimensional base."""

    d: int
    k: int

    def jet(self, I: Sequence[int], j: int) -> FieldVariable:
        I = tuple(I)
        if len(I) != self.d:
            raise FieldError("multi-index %r has length %d, expected %d" % (I, len(I), self.d))
        if not 1 <= j <= self.k:
            raise FieldError("field index %d outside 1..%d" % (j, self.k))
        return FieldVariable("jet", I, j)

    def phi(self, j: int = 1, *I: int) -> FieldVariable:
        """Shorthand: phi(j) is the field itself, phi(j, 2) its second jet when d = 1."""
        I = tuple(I) + (0,) * (self.d - len(I))
        return self.jet(I, j)

    def check(self, v: FieldVariable) -> None:
        if v.kind != "hbar" and (len(v.I) != self.d or not 1 <= v.j <= self.k):
            raise FieldError("variable %s not in universe d=%d k=%d" % (v, self.d, self.k))


def _field_degree(m: MultiIndex) -> int:
    return sum(e for v, e in m.items() if not v.is_hbar)


def _min_order(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PhaseSeries:
    """Rational divided power series over field variables.

    ``order`` bounds the field degree (``None``: an exact polynomial);
    ``hbar_order`` bounds the power of hbar.
    """

    __slots__ = ("universe", "terms", "order", "hbar_order")

    def __init__(self, universe: Universe, terms: Optional[Dict[MultiIndex, object]] = None,
                 order: Optional[int] = None, hbar_order: int = 0):
        self.universe = universe
        clean: Dict[MultiIndex, Fraction] = {}
        for m, c in (terms or {}).items():
            for v, _ in m.items():
                universe.check(v)
            if not c:
                continue
            if m[HBAR] > hbar_order or (order is not None and _field_degree(m) > order):
                continue
            clean[m] = Fraction(c)
        self.terms = clean
        self.order = order
        self.hbar_order = hbar_order

    @classmethod
    def monomial(cls, universe: Universe, exps: Dict[FieldVariable, int], coeff=1, **kw) -> "PhaseSeries":
        """Divided monomial coeff * prod v^e / e!."""
        return cls(universe, {MultiIndex(exps): coeff}, **kw)

    @classmethod
    def var(cls, universe: Universe, v: FieldVariable, **kw) -> "PhaseSeries":
        return cls(universe, {MultiIndex.single(v): 1}, **kw)

    @classmethod
    def const(cls, universe: Universe, c=1, **kw) -> "PhaseSeries":
        return cls(universe, {MultiIndex(): c}, **kw)

    def like(self, terms, order="same", hbar_order=None) -> "PhaseSeries":
        return PhaseSeries(self.universe, terms, self.order if order == "same" else order,
                           self.hbar_order if hbar_order is None else hbar_order)

    def _check(self, other: "PhaseSeries") -> None:
        if not isinstance(other, PhaseSeries) or other.universe != self.universe:
            raise FieldError("universe mismatch")

    def variables(self) -> frozenset:
        out = set()
        for m in self.terms:
            out |= m.support()
        return frozenset(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, m: MultiIndex):
        return self.terms.get(m, Fraction(0))

    def __add__(self, other: "PhaseSeries") -> "PhaseSeries":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return PhaseSeries(self.universe, out, _min_order(self.order, other.order),
                           min(self.hbar_order, other.hbar_order))

    def __neg__(self):
        return self.like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PhaseSeries):
            return phase_mul(self, other)
        return self.like({m: c * other for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PhaseSeries):
            return NotImplemented
        return (self.universe == other.universe and self.terms == other.terms
                and self.order == other.order and self.hbar_order == other.hbar_order)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        return "PhaseSeries(%s)" % format_phase(self)


def format_phase(f: PhaseSeries) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m, c in f.sorted_terms():
        mono = "*".join(str(v) if e == 1 else "%s^%d/%d!" % (v, e, e) for v, e in m.items())
        cs = format_coefficient(c)
        parts.append(cs if not mono else (mono if cs == "1" else "(%s)*%s" % (cs, mono)))
    return " + ".join(parts)


def phase_mul(f: PhaseSeries, g: PhaseSeries) -> PhaseSeries:
    """Multinomial convolution (fg)(m) = sum binom(m, m1) f(m1) g(m2)."""
    f._check(g)
    order = _min_order(f.order, g.order)
    H = min(f.hbar_order, g.hbar_order)
    out = {m: c for m, c in divided_convolve(f.terms, g.terms).items()
           if m[HBAR] <= H and (order is None or _field_degree(m) <= order)}
    return PhaseSeries(f.universe, out, order, H)


def partial_derivative(f: PhaseSeries, v: FieldVariable) -> PhaseSeries:
    """(d f / d v)(m) = f(m + e_v)."""
    if v.is_hbar:
        raise FieldError("cannot differentiate by hbar")
    f.universe.check(v)
    out = {}
    for m, c in f.terms.items():
        if m[v]:
            out[m.shift(v, -1)] = c
    return f.like(out, order=None if f.order is None else f.order - 1)


def _configuration_only(f: PhaseSeries) -> None:
    barred = [v for v in f.variables() if v.kind == "bar"]
    if barred:
        raise FieldError("configuration-space series expected, found %s" % barred[0])


def total_derivative(f: PhaseSeries, i: int) -> PhaseSeries:
    """The derivation sending each jet d_I phi^j to d_(I+e_i) phi^j."""
    _configuration_only(f)
    d = f.universe.d
    if not 1 <= i <= d:
        raise FieldError("direction %d outside 1..%d" % (i, d))
    total = f.like({})
    for v in sorted(v for v in f.variables() if v.kind == "jet"):
        I = list(v.I)
        I[i - 1] += 1
        w = PhaseSeries.var(f.universe, FieldVariable("jet", tuple(I), v.j), order=f.order, hbar_order=f.hbar_order)
        total = total + partial_derivative(f, v) * w
    return total.like(total.terms, order=f.order)


def max_jet_order(f: PhaseSeries) -> int:
    return max([sum(v.I) for v in f.variables() if not v.is_hbar] or [0])


def euler_lagrange(l: PhaseSeries, j: int, I_cap: int) -> PhaseSeries:
    """e_j(l) = sum over I of (-1)^|I| d_I (dl / d(d_I phi^j))."""
    _configuration_only(l)
    if l.order is not None:
        raise FieldError("euler_lagrange needs a polynomial Lagrangian (order=None)")
    if I_cap < max_jet_order(l):
        raise FieldError("I_cap %d below the jet order %d of the Lagrangian" % (I_cap, max_jet_order(l)))
    if not 1 <= j <= l.universe.k:
        raise FieldError("field index %d outside 1..%d" % (j, l.universe.k))
    out = l.like({})
    for v in sorted(v for v in l.variables() if v.kind == "jet" and v.j == j and sum(v.I) <= I_cap):
        term = partial_derivative(l, v)
        for direction, times in enumerate(v.I, start=1):
            for _ in range(times):
                term = total_derivative(term, direction)
        out = out + (term if sum(v.I) % 2 == 0 else -term)
    return out.like(out.terms, order=None)


def poisson_bracket(f: PhaseSeries, g: PhaseSeries) -> PhaseSeries:
    """{f, g} = sum over k of df/dk dg/dkbar - df/dkbar dg/dk."""
    f._check(g)
    ks = sorted({v.base() for v in f.variables() | g.variables() if not v.is_hbar})
    out = phase_mul(f, g).like({})
    for k in ks:
        kb = k.bar()
        out = out + partial_derivative(f, k) * partial_derivative(g, kb) \
            - partial_derivative(f, kb) * partial_derivative(g, k)
    return out


def _bidifferential(tensor: Dict[Tuple[MultiIndex, MultiIndex], Fraction]):
    """One application of sum_k d/dk (x) d/dkbar - d/dkbar (x) d/dk."""
    out: Dict[Tuple[MultiIndex, MultiIndex], Fraction] = {}
    for (m1, m2), c in tensor.items():
        for v, _ in m1.items():
            if v.is_hbar:
                continue
            w = v.bar()
            if m2[w]:
                sign = 1 if v.kind == "jet" else -1
                key = (m1.shift(v, -1), m2.shift(w, -1))
                out[key] = out.get(key, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def moyal_star(f: PhaseSeries, g: PhaseSeries, hbar_order: Optional[int] = None) -> PhaseSeries:
    """f * g = sum_{n <= hbar_order} hbar^n/n! m(B^n(f (x) g))."""
    f._check(g)
    H = min(f.hbar_order, g.hbar_order) if hbar_order is None else hbar_order
    order = _min_order(f.order, g.order)
    if order is not None:
        order -= 2 * H
    U = f.universe
    tensor = {(m1, m2): c1 * c2 for m1, c1 in f.terms.items() for m2, c2 in g.terms.items()}
    total: Dict[MultiIndex, Fraction] = {}
    for n in range(H + 1):
        if not tensor:
            break
        flat: Dict[MultiIndex, Fraction] = {}
        for (m1, m2), c in tensor.items():
            m = m1 + m2
            flat[m] = flat.get(m, 0) + m.binom(m1) * c
        # hbar^n / n! is the divided basis element n*e_hbar
        shifted = divided_convolve({MultiIndex.single(HBAR, n) if n else MultiIndex(): 1}, flat)
        for m, c in shifted.items():
            total[m] = total.get(m, 0) + c
        tensor = _bidifferential(tensor)
    return PhaseSeries(U, total, order, H)


def project_J(f: PhaseSeries, J: Iterable[FieldVariable]) -> PhaseSeries:
    """Keep terms whose field variables lie in J and its conjugates; hbar is free."""
    allowed = set()
    for v in J:
        allowed.add(v.base())
        allowed.add(v.base().bar())
    return f.like({m: c for m, c in f.terms.items()
                   if all(v.is_hbar or v in allowed for v in m.support())})


# -- JSON ----------------------------------------------------------------

def phase_to_json(f: PhaseSeries) -> dict:
    return {
        "basis": "divided",
        "trunc": f.order,
        "hbar_order": f.hbar_order,
        "universe": {"d": f.universe.d, "k": f.universe.k},
        "terms": [[[[str(v), e] for v, e in m.items()], format_coefficient(c)] for m, c in f.sorted_terms()],
    }


def phase_from_json(d: dict, universe: Optional[Universe] = None) -> PhaseSeries:
    if universe is None:
        u = d.get("universe")
        if u is None:
            raise FieldError("phase series JSON needs a universe")
        universe = Universe(int(u["d"]), int(u["k"]))
    if d.get("basis", "divided") != "divided":
        raise FieldError("phase series must use the divided basis")
    terms: Dict[MultiIndex, Fraction] = {}
    for idx, cs in d["terms"]:
        m = MultiIndex([(parse_variable(v), int(e)) for v, e in idx])
        if m in terms:
            raise FieldError("duplicate index %r" % (idx,))
        terms[m] = parse_coefficient(str(cs), "rat")
    return PhaseSeries(universe, terms, d.get("trunc"), int(d.get("hbar_order", 0)))


# -- random samples and the P_J check --------------------------------------

def random_phase(rng: random.Random, universe: Universe, variables: Sequence[FieldVariable], max_degree: int,
                 hbar_order: int = 0, density: float = 0.5, hbar_terms: bool = False) -> PhaseSeries:
    vs = list(variables) + ([HBAR] if hbar_terms else [])

    def rec(i, remaining):
        if i == len(vs):
            yield ()
            return
        for e in range(remaining + 1):
            for rest in rec(i + 1, remaining - e):
                yield ((vs[i], e),) + rest

    terms = {}
    for pairs in rec(0, max_degree):
        m = MultiIndex(pairs)
        if m[HBAR] > hbar_order:
            continue
        if rng.random() < density:
            terms[m] = Fraction(rng.randint(-9, 9))
    return PhaseSeries(universe, terms, None, hbar_order)


def _first_diff(a: PhaseSeries, b: PhaseSeries):
    for m in sorted(set(a.terms) | set(b.terms), key=lambda m: m.sort_key()):
        if a[m] != b[m]:
            return [[str(v), e] for v, e in m.items()], format_coefficient(a[m]), format_coefficient(b[m])
    return None


def star_rb_sides(f: PhaseSeries, g: PhaseSeries, J, H: int):
    P = lambda x: project_J(x, J)
    star = lambda x, y: moyal_star(x, y, H)
    lhs = star(P(f), P(g)) + P(star(f, g))
    rhs = P(star(P(f), g)) + P(star(f, P(g)))
    return lhs, rhs


def star_pJ_check(J: Iterable[FieldVariable], samples: int, hbar_order: int, seed=0,
                  universe: Optional[Universe] = None, variables: Optional[Sequence[FieldVariable]] = None,
                  max_degree: int = 2) -> CheckReport:
    """Weight -1 identity for p_J with the star product as multiplication.

    The probe pairs (k, kbar) for k outside J run first, then random pairs.
    """
    U = universe or Universe(1, 2)
    J = [v.base() for v in J]
    if variables is None:
        variables = [U.phi(j) for j in range(1, U.k + 1)]
    variables = [v.base() for v in variables]
    allvars = variables + [v.bar() for v in variables]
    name = "p_J{%s}*star(hbar^%d)" % (",".join(sorted(map(str, J))), hbar_order)
    probes = [(PhaseSeries.var(U, k, hbar_order=hbar_order), PhaseSeries.var(U, k.bar(), hbar_order=hbar_order))
              for k in variables if k not in J]
    pairs = [("probe", f, g) for f, g in probes]
    count = 0
    for label, f, g in pairs + [(i, None, None) for i in range(samples)]:
        if f is None:
            rng = sample_rng(seed, label)
            f = random_phase(rng, U, allvars, max_degree, hbar_order)
            g = random_phase(rng, U, allvars, max_degree, hbar_order)
        count += 1
        lhs, rhs = star_rb_sides(f, g, J, hbar_order)
        d = _first_diff(lhs, rhs)
        if d is not None:
            return CheckReport(name, -1, count, hbar_order, seed, "fails", {
                "sample": label, "f": phase_to_json(f), "g": phase_to_json(g),
                "at": d[0], "lhs": d[1], "rhs": d[2]})
    return CheckReport(name, -1, count, hbar_order, seed, "holds")


def _doubled_variables(U: Universe) -> List[FieldVariable]:
    ks = [U.phi(j) for j in range(1, U.k + 1)]
    return ks + [k.bar() for k in ks]


def moyal_associativity_check(samples: int = 50, hbar_order: int = 2, seed=0, max_degree: int = 3,
                              universe: Optional[Universe] = None) -> CheckReport:
    """(f*g)*h = f*(g*h) through hbar^hbar_order on random triples."""
    U = universe or Universe(1, 2)
    vs = _doubled_variables(U)
    for i in range(samples):
        rng = sample_rng(seed, i)
        f, g, h = (random_phase(rng, U, vs, max_degree, hbar_order, density=0.3) for _ in range(3))
        a = moyal_star(moyal_star(f, g, hbar_order), h, hbar_order)
        b = moyal_star(f, moyal_star(g, h, hbar_order), hbar_order)
        d = _first_diff(a, b)
        if d is not None:
            return CheckReport("moyal_associativity", None, samples, hbar_order, seed, "fails", {
                "sample": i, "f": phase_to_json(f), "g": phase_to_json(g), "h": phase_to_json(h),
                "at": d[0], "lhs": d[1], "rhs": d[2]})
    return CheckReport("moyal_associativity", None, samples, hbar_order, seed, "holds")


def moyal_commutator_check(samples: int = 50, seed=0, max_degree: int = 2,
                           universe: Optional[Universe] = None) -> CheckReport:
    """f*g - g*f = 2 hbar {f, g} through hbar^2, so the hbar^0 and hbar^2 parts vanish."""
    U = universe or Universe(1, 2)
    vs = _doubled_variables(U)
    for i in range(samples):
        rng = sample_rng(seed, i)
        f, g = (random_phase(rng, U, vs, max_degree, 2) for _ in range(2))
        lhs = moyal_star(f, g, 2) - moyal_star(g, f, 2)
        rhs = poisson_bracket(f, g) * PhaseSeries.var(U, HBAR, hbar_order=2) * 2
        d = _first_diff(lhs, rhs)
        if d is not None:
            return CheckReport("moyal_commutator", None, samples, 2, seed, "fails", {
                "sample": i, "f": phase_to_json(f), "g": phase_to_json(g), "at": d[0], "lhs": d[1], "rhs": d[2]})
    return CheckReport("moyal_commutator", None, samples, 2, seed, "holds")
