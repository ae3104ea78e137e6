"""Exact coefficient arithmetic.

Three coefficient variants are used throughout the package:

* ``int`` -- arbitrary precision integers,
* ``fractions.Fraction`` -- rationals, always in lowest terms,
* :class:`QPoly` -- polynomials in a formal variable ``q`` with integer
  coefficients.

Integers promote to either of the other two; rationals and q-polynomials
never mix.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Union


class CoefficientError(TypeError):
    """Raised when two coefficients of incompatible variants are combined."""


class QPoly:
    """Integer polynomial in the formal variable q.

    Stored sparsely as ``{exponent: coefficient}`` without zero entries.
    Instances are immutable and hashable.
    """

    __slots__ = ("_cs", "_hash")

    def __init__(self, cs: Union[Mapping[int, int], Iterable[int], int, None] = None):
        if cs is None:
            items: Dict[int, int] = {}
        elif isinstance(cs, int):
            items = {0: cs} if cs else {}
        elif isinstance(cs, Mapping):
            items = {}
            for e, c in cs.items():
                if e < 0:
                    raise ValueError("negative exponent in QPoly: %r" % e)
                if not isinstance(c, int):
                    raise CoefficientError("QPoly coefficients must be integers, got %r" % (c,))
                if c:
                    items[e] = items.get(e, 0) + c
            items = {e: c for e, c in items.items() if c}
        else:
            items = {e: c for e, c in enumerate(cs) if c}
        self._cs = items
        self._hash = None

    @classmethod
    def q(cls, n: int = 1) -> "QPoly":
        return cls({n: 1})

    @property
    def coeffs(self) -> Dict[int, int]:
        return dict(self._cs)

    def degree(self) -> int:
        return max(self._cs) if self._cs else -1

    def is_zero(self) -> bool:
        return not self._cs

    def __getitem__(self, e: int) -> int:
        return self._cs.get(e, 0)

    def items(self):
        return sorted(self._cs.items())

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> "QPoly":
        if isinstance(other, QPoly):
            return other
        if isinstance(other, bool):
            raise CoefficientError("bool is not a coefficient")
        if isinstance(other, int):
            return QPoly(other)
        if isinstance(other, Fraction):
            raise CoefficientError("cannot mix rational %s with a q-polynomial" % other)
        raise CoefficientError("cannot combine QPoly with %r" % (other,))

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._cs)
        for e, c in o._cs.items():
            out[e] = out.get(e, 0) + c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({e: -c for e, c in self._cs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: Dict[int, int] = {}
        for e1, c1 in self._cs.items():
            for e2, c2 in o._cs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a q-polynomial")
        result = QPoly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod_exact(self, other: "QPoly") -> "QPoly":
        """Exact division by a polynomial with leading coefficient +-1.

        Raises ``ArithmeticError`` if the division leaves a remainder.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        d = other.degree()
        lead = other[d]
        rem = dict(self._cs)
        quot: Dict[int, int] = {}
        while rem:
            top = max(rem)
            if top < d:
                break
            c = rem[top]
            if c % lead:
                raise ArithmeticError("inexact division in Z[q]")
            t = c // lead
            quot[top - d] = t
            for e, oc in other._cs.items():
                k = e + top - d
                v = rem.get(k, 0) - t * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        if rem:
            raise ArithmeticError("inexact division in Z[q]")
        return QPoly(quot)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except CoefficientError:
            return NotImplemented
        return self._cs == o._cs

    def __hash__(self):
        if self._hash is None:
            if not self._cs:
                self._hash = hash(0)
            elif set(self._cs) == {0}:
                self._hash = hash(self._cs[0])
            else:
                self._hash = hash(frozenset(self._cs.items()))
        return self._hash

    def __bool__(self):
        return bool(self._cs)

    def __call__(self, q0: int) -> int:
        return qpoly_eval(self, q0)

    def __str__(self):
        return format_qpoly(self)

    def __repr__(self):
        return "QPoly(%r)" % (self.items(),)


Coefficient = Union[int, Fraction, QPoly]

q = QPoly.q()


def variant(c: Coefficient) -> str:
    if isinstance(c, QPoly):
        return "qpoly"
    if isinstance(c, Fraction):
        return "rat"
    if isinstance(c, int) and not isinstance(c, bool):
        return "int"
    raise CoefficientError("not a coefficient: %r" % (c,))


def promote(c: Coefficient, target: str) -> Coefficient:
    """Promote ``c`` to the variant named ``target`` (int, rat or qpoly)."""
    v = variant(c)
    if v == target:
        return c
    if v == "int" and target == "rat":
        return Fraction(c)
    if v == "int" and target == "qpoly":
        return QPoly(c)
    if target == "int" and v == "rat" and c.denominator == 1:
        return int(c)
    if target == "int" and v == "qpoly" and c.degree() <= 0:
        return c[0]
    raise CoefficientError("cannot promote %s to %s" % (v, target))


def _check_compatible(a: Coefficient, b: Coefficient) -> None:
    va, vb = variant(a), variant(b)
    if {va, vb} == {"rat", "qpoly"}:
        raise CoefficientError("rational and q-polynomial coefficients do not mix")


def ring_arithmetic(a: Coefficient, b: Coefficient, op: str):
    """Dispatch a named ring operation; ``neg`` and ``is_zero`` ignore ``b``."""
    if op == "neg":
        return -a
    if op == "is_zero":
        return is_zero(a)
    _check_compatible(a, b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "eq":
        return a == b
    raise ValueError("unknown ring operation %r" % op)


def is_zero(c: Coefficient) -> bool:
    return not c


def qpoly_eval(p: QPoly, q0: int) -> int:
    """Substitute ``q = q0`` exactly."""
    if not isinstance(p, QPoly):
        p = QPoly._coerce(p)
    total = 0
    for e, c in p.items():
        total += c * q0 ** e
    return total


# -- canonical text form ------------------------------------------------

def format_qpoly(p: QPoly) -> str:
    items = p.items()
    if not items:
        return "0"
    parts = []
    for i, (e, c) in enumerate(items):
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = "q" if e == 1 else "q^%d" % e
            body = mono if mag == 1 else "%d*%s" % (mag, mono)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def format_coefficient(c: Coefficient) -> str:
    if isinstance(c, QPoly):
        return format_qpoly(c)
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return "%d/%d" % (c.numerator, c.denominator)
    return str(c)


_QTERM = re.compile(r"^(?:(\d+)\*)?q(?:\^(\d+))?$|^(\d+)$")


def parse_qpoly(text: str) -> QPoly:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty q-polynomial")
    if s[0] not in "+-":
        s = "+" + s
    out: Dict[int, int] = {}
    for sign, term in re.findall(r"([+-])([^+-]+)", s):
        m = _QTERM.match(term)
        if not m:
            raise ValueError("malformed q-polynomial term %r in %r" % (term, text))
        if m.group(3) is not None:
            e, c = 0, int(m.group(3))
        else:
            c = int(m.group(1)) if m.group(1) else 1
            e = int(m.group(2)) if m.group(2) else 1
        out[e] = out.get(e, 0) + (c if sign == "+" else -c)
    if "".join(sign + term for sign, term in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError("malformed q-polynomial %r" % text)
    return QPoly(out)


def parse_coefficient(text: str, kind: str = "auto") -> Coefficient:
    """Inverse of :func:`format_coefficient`.

    ``kind`` forces a variant (``int``, ``rat``, ``qpoly``); ``auto`` picks
    from the text.
    """
    s = text.strip()
    if kind == "qpoly" or (kind == "auto" and "q" in s):
        return parse_qpoly(s)
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError("zero denominator in %r" % text)
        value: Coefficient = Fraction(int(num), int(den))
    else:
        value = int(s)
    if kind == "rat":
        return Fraction(value)
    if kind == "int":
        return promote(value, "int")
    return value


# -- q-numbers ----------------------------------------------------------
# These are the structure constants of the q-divided power basis; they live
# here so that the series layer can use them without importing the
# q-calculus layer.

_QBINOM_CACHE: Dict[tuple, QPoly] = {}


def q_int(n: int) -> QPoly:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("q_int needs n >= 0")
    return QPoly([1] * n)


def q_factorial(n: int) -> QPoly:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = QPoly(1)
    for i in range(1, n + 1):
        out = out * q_int(i)
    return out


def q_binomial(n: int, k: int) -> QPoly:
    """Gaussian binomial via the division-free q-Pascal recurrence.

    binom(n, k)_q = binom(n-1, k)_q + q^(n-k) binom(n-1, k-1)_q
    """
    if n < 0 or k < 0 or k > n:
        raise ValueError("q_binomial needs 0 <= k <= n, got n=%r k=%r" % (n, k))
    key = (n, k)
    hit = _QBINOM_CACHE.get(key)
    if hit is not None:
        return hit
    if k == 0 or k == n:
        out = QPoly(1)
    else:
        out = q_binomial(n - 1, k) + QPoly.q(n - k) * q_binomial(n - 1, k - 1)
    _QBINOM_CACHE[key] = out
    return out
