"""Directed rounding for IEEE doubles without touching the FPU mode.

Sums and products are computed round-to-nearest and then corrected with an
error-free transformation (TwoSum, Dekker TwoProduct).  When the error term
is zero the endpoint is left alone, so exact results stay exact.  Anything
that the transformations cannot handle (overflow, subnormal range) falls
back to a one-ulp step outward.
"""

import math

INF = math.inf
_SPLIT = 134217729.0  # 2**27 + 1
_SMALL = 2.0 ** -960
_LARGE = 2.0 ** 995

nextafter = math.nextafter


def down(x):
    return nextafter(x, -INF)


def up(x):
    return nextafter(x, INF)


def _two_sum_err(a, b, s):
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def add_down(a, b):
    s = a + b
    if s - s != 0.0:  # inf or nan
        return s
    e = _two_sum_err(a, b, s)
    return nextafter(s, -INF) if e < 0.0 else s


def add_up(a, b):
    s = a + b
    if s - s != 0.0:
        return s
    e = _two_sum_err(a, b, s)
    return nextafter(s, INF) if e > 0.0 else s


def sub_down(a, b):
    return add_down(a, -b)


def sub_up(a, b):
    return add_up(a, -b)


def _prod_err(a, b, p):
    """Exact ``a*b - p`` for in-range operands (Dekker)."""
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _prod_safe(a, b, p):
    ap = abs(p)
    if ap - ap != 0.0:
        return False
    return (ap == 0.0 or ap > _SMALL) and abs(a) < _LARGE and abs(b) < _LARGE


def mul_down(a, b):
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not _prod_safe(a, b, p):
        return p if p - p != 0.0 else nextafter(p, -INF)
    if p == 0.0:
        return nextafter(p, -INF)
    return nextafter(p, -INF) if _prod_err(a, b, p) < 0.0 else p


def mul_up(a, b):
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not _prod_safe(a, b, p):
        return p if p - p != 0.0 else nextafter(p, INF)
    if p == 0.0:
        return nextafter(p, INF)
    return nextafter(p, INF) if _prod_err(a, b, p) > 0.0 else p


def div_down(a, b):
    if a == 0.0:
        return 0.0
    return nextafter(a / b, -INF)


def div_up(a, b):
    if a == 0.0:
        return 0.0
    return nextafter(a / b, INF)


def float_bounds(num, shift):
    """Outward float bounds of the dyadic ``num * 2**-shift``."""
    if num == 0:
        return 0.0, 0.0
    try:
        v = math.ldexp(float(num), -shift)
    except OverflowError:
        v = math.copysign(INF, num)
    tz = (num & -num).bit_length() - 1
    if abs(num).bit_length() - tz <= 53 and v != 0.0 and abs(v) >= 2.0 ** -1022 and v - v == 0.0:
        return v, v
    return nextafter(v, -INF), nextafter(v, INF)
