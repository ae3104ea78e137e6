"""Small expression language for series.

Grammar (unary minus binds tighter than ``*``, which binds tighter than
``+``/``-``; all binary operators associate to the left)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | atom
    atom   := INT ["/" INT]                      integer or rational literal
            | "q" ["^" INT]
            | NAME ["^" ["-"] INT ["/" INT "!"]]  variable power or divided term
            | FUNC "(" expr ")"                  FUNC in P, Int, Intq, Sq
            | "(" expr ")"

``z`` is the Laurent variable; any other name is a divided-power variable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Union

from .exact_rings import QPoly, q_factorial
from .operators import integrate, laurent_negative_part, q_integrate, q_shift
from .series import DEFAULT_ORDER, MultiIndex, SeriesError, TruncatedSeries

FUNCTIONS = ("P", "Int", "Intq", "Sq")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected: FrozenSet[str] = frozenset()):
        self.line, self.col, self.expected = line, col, frozenset(expected)
        exp = " (expected one of: %s)" % ", ".join(sorted(expected)) if expected else ""
        super().__init__("line %d, column %d: %s%s" % (line, col, message, exp))


class EvalError(ValueError):
    pass


# -- tree -----------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Q:
    power: int = 1


@dataclass(frozen=True)
class Var:
    name: str
    power: int = 1
    divided: bool = False  # written x^n/n!


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Q, Var, Neg, BinOp, Call]


# -- lexer ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()!]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line, line_start = line + 1, pos + 1
            pos += 1
        if pos >= len(text):
            out.append(Token("end", "", line, pos - line_start + 1))
            return out
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character %r" % text[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), line, start - line_start + 1))
        pos = m.end()


# -- parser ---------------------------------------------------------------

_ATOM_START = frozenset({"integer", "name", "q", "(", "-"} | set(FUNCTIONS))


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected, what=None):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(what or "unexpected %s" % found, t.line, t.col, frozenset(expected))

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail({text})
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail({"integer"})
        v = int(self.tok.text)
        self.i += 1
        return v

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "end of input"})
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.at("*"):
            self.i += 1
            e = BinOp("*", e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.at("-"):
            self.i += 1
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            num = int(t.text)
            if self.at("/"):
                self.i += 1
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", t.line, t.col)
                return Num(Fraction(num, den))
            return Num(Fraction(num))
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind != "name":
            self.fail(_ATOM_START)
        self.i += 1
        if t.text in FUNCTIONS:
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Call(t.text, e)
        if t.text == "q":
            if self.at("^"):
                self.i += 1
                return Q(self.integer())
            return Q(1)
        if not self.at("^"):
            return Var(t.text)
        self.i += 1
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        n = sign * self.integer()
        if self.at("/"):
            slash = self.tok
            self.i += 1
            k = self.integer()
            self.expect("!")
            if k != n:
                raise ParseError("divided term %s^%d/%d! needs matching exponents" % (t.text, n, k),
                                 slash.line, slash.col)
            if n < 0:
                raise ParseError("divided term needs a non-negative exponent", slash.line, slash.col)
            return Var(t.text, n, True)
        return Var(t.text, n)


def parse_expression(text: str) -> Expr:
    return _Parser(text).parse()


# -- canonical printer ------------------------------------------------------

def _fmt(e: Expr, level: int) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)
    if isinstance(e, Q):
        return "q" if e.power == 1 else "q^%d" % e.power
    if isinstance(e, Var):
        if e.divided:
            return "%s^%d/%d!" % (e.name, e.power, e.power)
        return e.name if e.power == 1 else "%s^%d" % (e.name, e.power)
    if isinstance(e, Call):
        return "%s(%s)" % (e.func, _fmt(e.arg, 1))
    if isinstance(e, Neg):
        s = "-" + _fmt(e.arg, 3)
        return s if level <= 3 else "(%s)" % s
    if e.op == "*":
        s = "%s*%s" % (_fmt(e.left, 2), _fmt(e.right, 3))
        return s if level <= 2 else "(%s)" % s
    s = "%s %s %s" % (_fmt(e.left, 1), e.op, _fmt(e.right, 2))
    return s if level <= 1 else "(%s)" % s


def format_expression(e: Expr) -> str:
    return _fmt(e, 1)


# -- evaluation -------------------------------------------------------------

def _walk(e: Expr):
    yield e
    for child in (getattr(e, "arg", None), getattr(e, "left", None), getattr(e, "right", None)):
        if child is not None:
            yield from _walk(child)


def infer_basis(e: Expr) -> str:
    nodes = list(_walk(e))
    laurent = any(isinstance(n, Var) and n.name == "z" for n in nodes)
    q_like = any(isinstance(n, Q) or (isinstance(n, Call) and n.func in ("Intq", "Sq")) for n in nodes)
    if laurent and q_like:
        raise EvalError("cannot mix z with q-calculus in one expression")
    if laurent:
        if any(isinstance(n, Var) and n.name != "z" for n in nodes):
            raise EvalError("cannot mix z with divided-power variables")
        return "laurent"
    if q_like:
        names = {n.name for n in nodes if isinstance(n, Var)}
        if len(names) > 1:
            raise EvalError("q-divided series have one variable, got %s" % ", ".join(sorted(names)))
        return "qdivided"
    return "divided"


def evaluate(e: Expr, order: int = DEFAULT_ORDER, basis: Optional[str] = None) -> TruncatedSeries:
    """Evaluate to a series known through degree ``order``.

    ``P`` is the negative-part projection on Laurent series, integration on
    divided series and q-integration on q-divided series.
    """
    basis = basis or infer_basis(e)
    nodes = list(_walk(e))
    if basis == "laurent":
        lo = min([0] + [n.power for n in nodes if isinstance(n, Var)])
        muls = sum(1 for n in nodes if isinstance(n, BinOp) and n.op == "*")
        trunc = (lo, order - lo * muls)
    else:
        trunc = order

    def const(c) -> TruncatedSeries:
        key = {"laurent": 0, "divided": MultiIndex(), "qdivided": 0}[basis]
        return TruncatedSeries(basis, {key: c}, trunc)

    def ev(n: Expr) -> TruncatedSeries:
        if isinstance(n, Num):
            c = n.value
            if c.denominator == 1:
                c = c.numerator
            elif basis == "qdivided":
                raise EvalError("q-divided series take Z[q] coefficients, got %s" % c)
            return const(c)
        if isinstance(n, Q):
            return const(QPoly.q(n.power))
        if isinstance(n, Var):
            if basis == "laurent":
                if n.divided:
                    raise EvalError("divided term %s^%d/%d! in a Laurent expression" % (n.name, n.power, n.power))
                return TruncatedSeries(basis, {n.power: 1}, trunc)
            if n.power < 0:
                raise EvalError("negative power of %s outside the Laurent basis" % n.name)
            if basis == "qdivided":
                scale = 1 if n.divided else q_factorial(n.power)
                return TruncatedSeries(basis, {n.power: scale}, trunc)
            scale = 1 if n.divided else math.factorial(n.power)
            return TruncatedSeries(basis, {MultiIndex.single(n.name, n.power): scale}, trunc)
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Call):
            inner = ev(n.arg)
            if n.func == "P":
                return {"laurent": laurent_negative_part, "divided": integrate, "qdivided": q_integrate}[basis](inner)
            if basis == "laurent" or (n.func in ("Intq", "Sq")) != (basis == "qdivided"):
                raise EvalError("%s does not apply to %s series" % (n.func, basis))
            return {"Int": integrate, "Intq": q_integrate, "Sq": q_shift}[n.func](inner)
        left, right = ev(n.left), ev(n.right)
        return left + right if n.op == "+" else left - right if n.op == "-" else left * right

    try:
        out = ev(e)
    except SeriesError as err:
        raise EvalError(str(err)) from err
    if basis == "laurent":
        out = out.truncate(order)
    return out


def eval_text(text: str, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    return evaluate(parse_expression(text), order)
