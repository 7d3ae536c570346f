"""Exact dyadic scalars, inclusion interval arithmetic and 2-D boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import total_ordering
from typing import Union

from . import _rounding as R


@total_ordering
class Dyadic:
    """The exact binary rational ``mantissa * 2**exponent``.

    Kept canonical: the mantissa is odd, or zero with exponent 0.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a number")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite float {value!r}")
            return cls.from_fraction(Fraction(value))
        if isinstance(value, Fraction):
            return cls.from_fraction(value)
        if isinstance(value, str):
            return cls.from_fraction(Fraction(Decimal(value.strip())))
        if isinstance(value, Decimal):
            return cls.from_fraction(Fraction(value))
        raise TypeError(f"cannot make a dyadic from {type(value).__name__}")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(d.bit_length() - 1))

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return math.ldexp(float(self.mantissa), self.exponent)

    def float_bounds(self):
        if self.exponent >= 0:
            return R.float_bounds(self.mantissa << self.exponent, 0)
        return R.float_bounds(self.mantissa, -self.exponent)

    def _align(self, other: "Dyadic"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __mul__(self, other):
        other = Dyadic.coerce(other)
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def half(self) -> "Dyadic":
        return Dyadic(self.mantissa, self.exponent - 1)

    def scale2(self, k: int) -> "Dyadic":
        return Dyadic(self.mantissa, self.exponent + k)

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def __eq__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __lt__(self, other):
        other = Dyadic.coerce(other)
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self):
        return hash(self.to_fraction())

    def to_decimal(self) -> str:
        """Exact decimal expansion (dyadics always terminate)."""
        m, e = self.mantissa, self.exponent
        if e >= 0:
            return str(m << e)
        n = -e
        digits = abs(m) * 5 ** n
        s = str(digits).rjust(n + 1, "0")
        intpart, frac = s[:-n], s[-n:].rstrip("0")
        out = intpart + ("." + frac if frac else "")
        return "-" + out if m < 0 else out

    def __repr__(self):
        return f"Dyadic({self.to_decimal()})"

    __str__ = to_decimal


Scalar = Union[Dyadic, float]


class Interval:
    """A closed interval ``[lo, hi]``.

    Exact intervals carry :class:`Dyadic` endpoints and are closed under
    +, -, *.  Float intervals are rounded outward after every operation.
    Mixing the two demotes to float.
    """

    __slots__ = ("lo", "hi", "exact")

    def __init__(self, lo, hi=None, exact=None):
        if hi is None:
            hi = lo
        if exact is None:
            exact = not (isinstance(lo, float) or isinstance(hi, float))
        if exact:
            lo, hi = Dyadic.coerce(lo), Dyadic.coerce(hi)
        else:
            lo = lo.float_bounds()[0] if isinstance(lo, Dyadic) else float(lo)
            hi = hi.float_bounds()[1] if isinstance(hi, Dyadic) else float(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo, self.hi, self.exact = lo, hi, exact

    @classmethod
    def point(cls, v) -> "Interval":
        return cls(v, v)

    def as_float(self) -> "Interval":
        if not self.exact:
            return self
        return Interval(self.lo.float_bounds()[0], self.hi.float_bounds()[1], exact=False)

    def bounds(self):
        """Outward float endpoints."""
        f = self.as_float()
        return f.lo, f.hi

    def width(self):
        return self.hi - self.lo

    def contains(self, v) -> bool:
        if self.exact and not isinstance(v, float):
            v = Dyadic.coerce(v)
            return self.lo <= v <= self.hi
        lo, hi = self.bounds()
        return lo <= float(v) <= hi

    def __contains__(self, v):
        return self.contains(v)

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def issubset(self, other: "Interval") -> bool:
        if self.exact and other.exact:
            return other.lo <= self.lo and self.hi <= other.hi
        a, b = self.bounds()
        c, d = other.bounds()
        return c <= a and b <= d

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.exact == other.exact and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi, self.exact))

    def __repr__(self):
        return f"Interval[{self.lo}, {self.hi}]"

    def __add__(self, other):
        return iv_add(self, _as_interval(other))

    __radd__ = __add__

    def __sub__(self, other):
        return iv_sub(self, _as_interval(other))

    def __rsub__(self, other):
        return iv_sub(_as_interval(other), self)

    def __mul__(self, other):
        return iv_mul(self, _as_interval(other))

    __rmul__ = __mul__

    def __neg__(self):
        return iv_neg(self)


def _as_interval(v) -> Interval:
    return v if isinstance(v, Interval) else Interval.point(v)


def _both_exact(a: Interval, b: Interval) -> bool:
    return a.exact and b.exact


def iv_add(a: Interval, b: Interval) -> Interval:
    if _both_exact(a, b):
        return Interval(a.lo + b.lo, a.hi + b.hi)
    a, b = a.as_float(), b.as_float()
    return Interval(R.add_down(a.lo, b.lo), R.add_up(a.hi, b.hi), exact=False)


def iv_neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo, exact=a.exact)


def iv_sub(a: Interval, b: Interval) -> Interval:
    return iv_add(a, iv_neg(b))


def iv_mul(a: Interval, b: Interval) -> Interval:
    if _both_exact(a, b):
        ps = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
        return Interval(min(ps), max(ps))
    a, b = a.as_float(), b.as_float()
    pairs = ((a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi))
    lo = min(R.mul_down(x, y) for x, y in pairs)
    hi = max(R.mul_up(x, y) for x, y in pairs)
    return Interval(lo, hi, exact=False)


def iv_square(a: Interval) -> Interval:
    """``{x*y : x, y in a}`` -- deliberately not the tight ``{x**2}``."""
    return iv_mul(a, a)


def iv_mag(a: Interval):
    return max(abs(a.lo), abs(a.hi))


# ---------------------------------------------------------------------------
# boxes

ALIGNED = "aligned"
HALF_ALIGNED = "half-aligned"
FREE = "free"



@dataclass(frozen=True)
class Box2:
    ix: Interval
    iy: Interval
    depth: int = 0
    alignment: str = FREE

    def __post_init__(self):
        if not (self.ix.exact and self.iy.exact):
            raise ValueError("box corners must be exact dyadics")
        if self.ix.width() < 0 or self.iy.width() < 0:
            raise ValueError("negative box width")

    @classmethod
    def from_bounds(cls, x0, y0, x1, y1, depth=0, alignment=FREE) -> "Box2":
        return cls(Interval(x0, x1), Interval(y0, y1), depth, alignment)

    @property
    def widths(self):
        return self.ix.width(), self.iy.width()

    def width(self) -> Dyadic:
        return max(self.widths)

    def is_degenerate(self) -> bool:
        wx, wy = self.widths
        return wx.sign() == 0 or wy.sign() == 0

    def aspect_ratio(self) -> Fraction:
        wx, wy = (w.to_fraction() for w in self.widths)
        return max(wx, wy) / min(wx, wy)

    def center(self):
        return (self.ix.lo + self.ix.hi).half(), (self.iy.lo + self.iy.hi).half()

    def corners(self):
        x0, x1, y0, y1 = self.ix.lo, self.ix.hi, self.iy.lo, self.iy.hi
        return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))

    def fbox(self):
        """Outward float bounds ``(xlo, xhi, ylo, yhi)``."""
        xl, xh = self.ix.bounds()
        yl, yh = self.iy.bounds()
        return xl, xh, yl, yh

    def contains_box(self, other: "Box2") -> bool:
        return other.ix.issubset(self.ix) and other.iy.issubset(self.iy)

    def __repr__(self):
        return (f"Box2([{self.ix.lo},{self.ix.hi}]x[{self.iy.lo},{self.iy.hi}],"
                f" depth={self.depth}, {self.alignment})")


def box_scale(b: Box2, lam) -> Box2:
    """Same center, widths scaled by ``lam`` (which must be dyadic)."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("scale factor must be positive")
    if not _is_dyadic(lam):
        raise ValueError(f"scale factor {lam} does not keep corners dyadic")
    lamd = Dyadic.from_fraction(lam)
    cx, cy = b.center()
    hx = (b.ix.width() * lamd).half()
    hy = (b.iy.width() * lamd).half()
    if lam == 1:
        alignment = b.alignment
    elif b.alignment == ALIGNED and lam in (Fraction(1, 2), Fraction(2)):
        alignment = HALF_ALIGNED
    else:
        alignment = FREE
    return Box2(Interval(cx - hx, cx + hx), Interval(cy - hy, cy + hy), b.depth, alignment)


def _is_dyadic(q: Fraction) -> bool:
    return q.denominator & (q.denominator - 1) == 0


def box_face(b: Box2, axis: str, sign: str) -> Box2:
    """The face whose outward normal is ``sign`` along ``axis``."""
    if axis not in ("x", "y") or sign not in ("-", "+"):
        raise ValueError("axis must be 'x'/'y' and sign '-'/'+'")
    if axis == "x":
        v = b.ix.lo if sign == "-" else b.ix.hi
        return Box2(Interval(v, v), b.iy, b.depth, FREE)
    v = b.iy.lo if sign == "-" else b.iy.hi
    return Box2(b.ix, Interval(v, v), b.depth, FREE)


def box_split(b: Box2):
    """Children in SW, SE, NW, NE order."""
    cx, cy = b.center()
    x0, x1, y0, y1 = b.ix.lo, b.ix.hi, b.iy.lo, b.iy.hi
    al = b.alignment if b.alignment == ALIGNED else FREE
    d = b.depth + 1
    return [
        Box2(Interval(x0, cx), Interval(y0, cy), d, al),
        Box2(Interval(cx, x1), Interval(y0, cy), d, al),
        Box2(Interval(x0, cx), Interval(cy, y1), d, al),
        Box2(Interval(cx, x1), Interval(cy, y1), d, al),
    ]
