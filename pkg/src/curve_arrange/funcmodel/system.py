"""Point, sign and box evaluation of curve expressions."""

from __future__ import annotations

import math
import os
import warnings
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple, Union

import mpmath

from ..numeric import Box2, Dyadic, Interval
from .expr import (Add, Const, Div, Expr, Func, Mul, Neg, Pow, Sub, Var,
                   denominators, differentiate, eval_exact, is_rational, parse)
from .program import DomainError, Program, const_bounds

DEFAULT_PRECISION = 256
PARTIALS = ("fx", "fy", "gx", "gy")
NAMES = ("f", "g") + PARTIALS


class PerturbationWarning(RuntimeWarning):
    """A transcendental sign could not be certified and was taken as +1."""


def precision_bits() -> int:
    raw = os.environ.get("CURVE_ARRANGE_PRECISION")
    if raw:
        bits = int(raw)
        if bits < 53:
            raise ValueError("CURVE_ARRANGE_PRECISION must be at least 53")
        return bits
    return DEFAULT_PRECISION


@lru_cache(maxsize=512)
def compiled(e: Expr) -> Program:
    return Program(e)


def _fraction(v) -> Fraction:
    if isinstance(v, Dyadic):
        return v.to_fraction()
    return Fraction(v)


def _point_bounds(v) -> Tuple[float, float]:
    if isinstance(v, float):
        return v, v
    if isinstance(v, Dyadic):
        return v.float_bounds()
    return const_bounds(Fraction(v))


def _as_fbox(b) -> Tuple[float, float, float, float]:
    if isinstance(b, Box2):
        return b.fbox()
    return tuple(b)


# -- mpmath tier ------------------------------------------------------------

def _mp_const(q: Fraction):
    iv = mpmath.iv
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def eval_mp(e: Expr, x, y):
    """Natural interval extension in ``mpmath.iv`` at its current precision.

    ``x`` and ``y`` are ``mpmath.iv`` intervals.  Powers multiply the
    running interval by itself, matching the float kernels.
    """
    iv = mpmath.iv
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Const):
        return _mp_const(e.value)
    if isinstance(e, Neg):
        return -eval_mp(e.a, x, y)
    if isinstance(e, Pow):
        base = eval_mp(e.base, x, y)
        out, sq, n = None, base, e.n
        if n == 0:
            return iv.mpf(1)
        while n:
            if n & 1:
                out = sq if out is None else out * sq
            n >>= 1
            if n:
                sq = sq * sq
        return out
    if isinstance(e, Func):
        a = eval_mp(e.arg, x, y)
        return {"sin": iv.sin, "cos": iv.cos, "exp": iv.exp}[e.name](a)
    a = eval_mp(e.a, x, y)
    b = eval_mp(e.b, x, y)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    if isinstance(e, Div):
        if b.a <= 0 <= b.b:
            raise DomainError(f"division by an interval containing 0 in {e!r}")
        return a / b
    raise TypeError(f"unknown node {e!r}")


def eval_mp_box(e: Expr, xlo: Fraction, xhi: Fraction, ylo: Fraction, yhi: Fraction,
                bits: int) -> Tuple[float, float]:
    """Evaluate at ``bits`` precision over an exact box; outward float result."""
    iv = mpmath.iv
    with mpmath.workprec(bits):
        x = iv.mpf([_mp_const(xlo).a, _mp_const(xhi).b])
        y = iv.mpf([_mp_const(ylo).a, _mp_const(yhi).b])
        r = eval_mp(e, x, y)
        return _mpf_down(r.a), _mpf_up(r.b)


def _mpf_down(v) -> float:
    f = float(v)
    return f if mpmath.mpf(f) <= v else _nextdown(f)


def _mpf_up(v) -> float:
    f = float(v)
    return f if mpmath.mpf(f) >= v else _nextup(f)


def _nextdown(f):
    return math.nextafter(f, -math.inf)


def _nextup(f):
    return math.nextafter(f, math.inf)


# -- public evaluation API --------------------------------------------------

def eval_box(e: Expr, b) -> Interval:
    """Inclusion of ``e`` over ``b`` (a :class:`Box2` or float 4-tuple)."""
    lo, hi = compiled(e)(*_as_fbox(b))
    return Interval(lo, hi, exact=False)


def eval_point(e: Expr, p: Sequence, exact: bool = False) -> Interval:
    """Enclosure of ``e`` at the point ``p``.

    With ``exact=True`` a rational expression is evaluated in exact
    arithmetic; the result is an exact interval when the value is dyadic.
    """
    if exact:
        if not is_rational(e):
            raise ValueError("exact evaluation needs a rational expression")
        try:
            v = eval_exact(e, _fraction(p[0]), _fraction(p[1]))
        except ZeroDivisionError as err:
            raise DomainError(str(err)) from None
        if v.denominator & (v.denominator - 1) == 0:
            return Interval(Dyadic.from_fraction(v))
        return Interval(*const_bounds(v), exact=False)
    xl, xh = _point_bounds(p[0])
    yl, yh = _point_bounds(p[1])
    lo, hi = compiled(e)(xl, xh, yl, yh)
    return Interval(lo, hi, exact=False)


def eval_sign(e: Expr, p: Sequence, bits: int = None) -> int:
    """Sign of ``e`` at ``p`` with zero counted as +1.

    Rational expressions are decided exactly.  Others escalate the working
    precision up to ``bits``; an undecided sign is taken as +1 and a
    :class:`PerturbationWarning` is issued.
    """
    try:
        iv = eval_point(e, p)
        if iv.lo > 0.0:
            return 1
        if iv.hi < 0.0:
            return -1
    except DomainError:
        pass
    x, y = _fraction(p[0]), _fraction(p[1])
    if is_rational(e):
        try:
            v = eval_exact(e, x, y)
        except ZeroDivisionError as err:
            raise DomainError(str(err)) from None
        return -1 if v < 0 else 1
    bits = bits or precision_bits()
    prec = 106
    while True:
        prec = min(prec, bits)
        lo, hi = eval_mp_box(e, x, x, y, y, prec)
        if lo > 0.0:
            return 1
        if hi < 0.0:
            return -1
        if prec >= bits:
            break
        prec *= 2
    warnings.warn(f"sign of {e!r} at ({x}, {y}) undecided at {bits} bits; using +1",
                  PerturbationWarning, stacklevel=2)
    return 1


# -- the curve pair ---------------------------------------------------------

class CurveSystem:
    """Two curves ``f = 0`` and ``g = 0`` together with their partials.

    Box evaluations run through the compiled interval kernel.  When
    ``escalate_depth`` is set, an inconclusive result on a box of at least
    that depth is recomputed with ``mpmath`` at ``bits`` precision.
    """

    def __init__(self, f: Union[str, Expr], g: Union[str, Expr], *,
                 escalate_depth: int = 30, bits: int = None):
        self.f = parse(f) if isinstance(f, str) else f
        self.g = parse(g) if isinstance(g, str) else g
        self.fx = differentiate(self.f, "x")
        self.fy = differentiate(self.f, "y")
        self.gx = differentiate(self.g, "x")
        self.gy = differentiate(self.g, "y")
        self.escalate_depth = escalate_depth
        self.bits = bits or precision_bits()
        self.programs = {n: compiled(getattr(self, n)) for n in NAMES}
        self.rational = {n: is_rational(getattr(self, n)) for n in ("f", "g")}
        self._sign_cache = {}

    def expr(self, name: str) -> Expr:
        return getattr(self, name)

    def __repr__(self):
        return f"CurveSystem(f={self.f!r}, g={self.g!r})"

    def box(self, name: str, fbox, exact=None, depth: int = 0) -> Tuple[float, float]:
        """Float enclosure of ``name`` over ``fbox``.

        ``exact`` optionally gives the box as exact ``Fraction`` bounds
        ``(xlo, xhi, ylo, yhi)`` for the escalation tier.
        """
        lo, hi = self.programs[name](*fbox)
        if (lo <= 0.0 <= hi and exact is not None and self.escalate_depth is not None
                and depth >= self.escalate_depth):
            mlo, mhi = eval_mp_box(self.expr(name), *exact, self.bits)
            lo, hi = max(lo, mlo), min(hi, mhi)
        return lo, hi

    def sign(self, name: str, x: Fraction, y: Fraction) -> int:
        key = (name, x, y)
        s = self._sign_cache.get(key)
        if s is None:
            s = eval_sign(self.expr(name), (x, y), self.bits)
            self._sign_cache[key] = s
        return s

    def check_denominators(self, fbox) -> None:
        """Raise :class:`DomainError` unless every denominator keeps its sign on ``fbox``."""
        for name in ("f", "g"):
            for den in denominators(self.expr(name)):
                lo, hi = compiled(den)(*fbox)
                if lo <= 0.0 <= hi:
                    raise DomainError(
                        f"denominator {den!r} of {name} is not sign-definite on the region")
