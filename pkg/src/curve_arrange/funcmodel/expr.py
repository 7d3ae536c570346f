"""Expression trees for curve equations: parsing and symbolic partials."""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Tuple

FUNCS = ("sin", "cos", "exp")


class ExprSyntaxError(ValueError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.column = position + 1
        self.expected = tuple(expected)
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at column {self.column}{detail}")


class UnknownIdentifier(ExprSyntaxError):
    pass


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __neg__(self):
        return neg(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr

    def __repr__(self):
        return f"Add({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr

    def __repr__(self):
        return f"Sub({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr

    def __repr__(self):
        return f"Mul({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr

    def __repr__(self):
        return f"Div({self.a!r}, {self.b!r})"


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr

    def __repr__(self):
        return f"Neg({self.a!r})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    n: int

    def __repr__(self):
        return f"Pow({self.base!r},{self.n})"


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __repr__(self):
        return f"{self.name}({self.arg!r})"


X = Var("x")
Y = Var("y")
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(Fraction(v))


def _is(e, v):
    return isinstance(e, Const) and e.value == v


# local simplification rules only

def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if _is(a, -1):
        return neg(b)
    if _is(b, -1):
        return neg(a)
    if isinstance(b, Const) and not isinstance(a, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, Mul) and isinstance(b.a, Const):
        return mul(Const(a.value * b.a.value), b.b)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const):
        if b.value == 0:
            raise ZeroDivisionError("division by the constant 0")
        if isinstance(a, Const):
            return Const(a.value / b.value)
        if b.value == 1:
            return a
    if _is(a, 0):
        return ZERO
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.a
    if isinstance(a, Mul) and isinstance(a.a, Const):
        return mul(Const(-a.a.value), a.b)
    return Neg(a)


def power(a: Expr, n: int) -> Expr:
    if n < 0:
        raise ValueError("negative exponents are not in the grammar")
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value ** n)
    return Pow(a, n)


def differentiate(e: Expr, var: str) -> Expr:
    if var not in ("x", "y"):
        raise ValueError(f"can only differentiate by x or y, not {var!r}")
    d = lambda u: differentiate(u, var)
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Add):
        return add(d(e.a), d(e.b))
    if isinstance(e, Sub):
        return sub(d(e.a), d(e.b))
    if isinstance(e, Neg):
        return neg(d(e.a))
    if isinstance(e, Mul):
        return add(mul(d(e.a), e.b), mul(e.a, d(e.b)))
    if isinstance(e, Div):
        num = sub(mul(d(e.a), e.b), mul(e.a, d(e.b)))
        return div(num, power(e.b, 2))
    if isinstance(e, Pow):
        if e.n == 0:
            return Const(Fraction(0))
        return mul(mul(Const(Fraction(e.n)), power(e.base, e.n - 1)), d(e.base))
    if isinstance(e, Func):
        du = d(e.arg)
        if e.name == "sin":
            return mul(Func("cos", e.arg), du)
        if e.name == "cos":
            return neg(mul(Func("sin", e.arg), du))
        return mul(e, du)
    raise TypeError(f"not an expression node: {e!r}")


def is_rational(e: Expr) -> bool:
    """True when the expression needs no transcendental function."""
    if isinstance(e, Func):
        return False
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, (Neg,)):
        return is_rational(e.a)
    if isinstance(e, Pow):
        return is_rational(e.base)
    return is_rational(e.a) and is_rational(e.b)


def has_division(e: Expr) -> bool:
    if isinstance(e, Div):
        return not isinstance(e.b, Const) or has_division(e.a)
    if isinstance(e, (Const, Var)):
        return False
    if isinstance(e, Neg):
        return has_division(e.a)
    if isinstance(e, Pow):
        return has_division(e.base)
    if isinstance(e, Func):
        return has_division(e.arg)
    return has_division(e.a) or has_division(e.b)


def denominators(e: Expr):
    """Non-constant denominators occurring in ``e``."""
    out = []

    def walk(u):
        if isinstance(u, Div):
            if not isinstance(u.b, Const):
                out.append(u.b)
            walk(u.a)
            walk(u.b)
        elif isinstance(u, (Add, Sub, Mul)):
            walk(u.a)
            walk(u.b)
        elif isinstance(u, Neg):
            walk(u.a)
        elif isinstance(u, Pow):
            walk(u.base)
        elif isinstance(u, Func):
            walk(u.arg)

    walk(e)
    return out


def eval_exact(e: Expr, x: Fraction, y: Fraction) -> Fraction:
    """Exact rational value; only for :func:`is_rational` expressions."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Add):
        return eval_exact(e.a, x, y) + eval_exact(e.b, x, y)
    if isinstance(e, Sub):
        return eval_exact(e.a, x, y) - eval_exact(e.b, x, y)
    if isinstance(e, Mul):
        return eval_exact(e.a, x, y) * eval_exact(e.b, x, y)
    if isinstance(e, Div):
        den = eval_exact(e.b, x, y)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes")
        return eval_exact(e.a, x, y) / den
    if isinstance(e, Neg):
        return -eval_exact(e.a, x, y)
    if isinstance(e, Pow):
        return eval_exact(e.base, x, y) ** e.n
    raise TypeError(f"{e!r} is not rational")


def to_infix(e: Expr) -> str:
    if isinstance(e, Const):
        v = e.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f"({s})" if v < 0 or v.denominator != 1 else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        return f"({to_infix(e.a)} + {to_infix(e.b)})"
    if isinstance(e, Sub):
        return f"({to_infix(e.a)} - {to_infix(e.b)})"
    if isinstance(e, Mul):
        return f"{to_infix(e.a)}*{to_infix(e.b)}"
    if isinstance(e, Div):
        return f"{to_infix(e.a)}/({to_infix(e.b)})"
    if isinstance(e, Neg):
        return f"(-{to_infix(e.a)})"
    if isinstance(e, Pow):
        return f"({to_infix(e.base)})^{e.n}"
    return f"{e.name}({to_infix(e.arg)})"


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind == "op" and val == op:
            return self.take()
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos, [repr(op)])

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos, ["'+'", "'-'", "'*'", "'/'", "end of input"])
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = Add(e, rhs) if val == "+" else Sub(e, rhs)
            else:
                return e

    def term(self):
        e = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                if val == "*":
                    e = Mul(e, rhs)
                elif isinstance(e, Const) and isinstance(rhs, Const):
                    if rhs.value == 0:
                        raise ExprSyntaxError("division by zero literal", self.toks[self.i - 1][2])
                    e = Const(e.value / rhs.value)
                else:
                    e = Div(e, rhs)
            else:
                return e

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            inner = self.factor()
            return Const(-inner.value) if isinstance(inner, Const) else Neg(inner)
        b = self.base()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ExprSyntaxError("exponent must be a non-negative integer", pos, ["integer"])
            n = int(val)
            if isinstance(b, Const):
                return Const(b.value ** n)
            return Pow(b, n)
        return b

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            try:
                return Const(Fraction(Decimal(val)))
            except InvalidOperation:  # pragma: no cover - regex guards this
                raise ExprSyntaxError(f"bad number {val!r}", pos)
        if kind == "name":
            if val in ("x", "y"):
                return Var(val)
            if val in FUNCS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Func(val, arg)
            raise UnknownIdentifier(f"unknown identifier {val!r}", pos, ["x", "y", *FUNCS])
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", pos, ["number", "x", "y", "'('", *FUNCS])


def parse(text: str) -> Expr:
    """Parse a curve expression in x and y."""
    return _Parser(text).parse()


def variables_used(e: Expr) -> Tuple[str, ...]:
    seen = set()

    def walk(u):
        if isinstance(u, Var):
            seen.add(u.name)
        elif isinstance(u, (Add, Sub, Mul, Div)):
            walk(u.a)
            walk(u.b)
        elif isinstance(u, Neg):
            walk(u.a)
        elif isinstance(u, Pow):
            walk(u.base)
        elif isinstance(u, Func):
            walk(u.arg)

    walk(e)
    return tuple(sorted(seen))
