"""Pure-Python interval bytecode interpreter (fallback for ``_kernel``)."""

import math

from .._rounding import (add_down, add_up, div_down, div_up, mul_down, mul_up,
                         nextafter)
from .opcodes import (OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_MUL, OP_NEG,
                      OP_POWI, OP_SIN, OP_SQR, OP_SUB, OP_X, OP_Y)

INF = math.inf
NAN = math.nan
TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi
BACKEND = "python"


def _mul(alo, ahi, blo, bhi):
    lo = min(mul_down(alo, blo), mul_down(alo, bhi), mul_down(ahi, blo), mul_down(ahi, bhi))
    hi = max(mul_up(alo, blo), mul_up(alo, bhi), mul_up(ahi, blo), mul_up(ahi, bhi))
    return lo, hi


def _powi(lo, hi, n):
    if n == 0:
        return 1.0, 1.0
    rlo = rhi = None
    blo, bhi = lo, hi
    while n:
        if n & 1:
            if rlo is None:
                rlo, rhi = blo, bhi
            else:
                rlo, rhi = _mul(rlo, rhi, blo, bhi)
        n >>= 1
        if n:
            blo, bhi = _mul(blo, bhi, blo, bhi)
    return rlo, rhi


def _widen2(lo, hi):
    return nextafter(nextafter(lo, -INF), -INF), nextafter(nextafter(hi, INF), INF)


def _hits(lo, hi, phase):
    k = math.ceil((lo - phase) / TWO_PI - 1e-9)
    c = phase + k * TWO_PI
    return c <= hi + 1e-9 * (1.0 + abs(c))


def _trig(lo, hi, fn, max_phase, min_phase):
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi - lo >= 6.2 or abs(lo) > 1e8 or abs(hi) > 1e8:
        return -1.0, 1.0
    a, b = fn(lo), fn(hi)
    rlo, rhi = _widen2(min(a, b), max(a, b))
    if _hits(lo, hi, max_phase):
        rhi = 1.0
    if _hits(lo, hi, min_phase):
        rlo = -1.0
    return max(rlo, -1.0), min(rhi, 1.0)


def _exp(lo, hi):
    try:
        elo = math.exp(lo)
    except OverflowError:
        elo = 1.7976931348623157e308
    try:
        ehi = math.exp(hi)
    except OverflowError:
        ehi = INF
    rlo, rhi = _widen2(elo, ehi)
    return max(rlo, 0.0), rhi


def eval_iv(code, consts, xlo, xhi, ylo, yhi):
    """Evaluate a compiled program over the box; ``(nan, nan)`` on domain error."""
    st_lo = []
    st_hi = []
    push_lo = st_lo.append
    push_hi = st_hi.append
    pop_lo = st_lo.pop
    pop_hi = st_hi.pop
    n = len(code)
    k = 0
    while k < n:
        op = code[k]
        arg = code[k + 1]
        k += 2
        if op == OP_X:
            push_lo(xlo); push_hi(xhi)
        elif op == OP_Y:
            push_lo(ylo); push_hi(yhi)
        elif op == OP_CONST:
            push_lo(consts[2 * arg]); push_hi(consts[2 * arg + 1])
        elif op == OP_NEG:
            lo = pop_lo(); hi = pop_hi()
            push_lo(-hi); push_hi(-lo)
        elif op == OP_SQR:
            lo = pop_lo(); hi = pop_hi()
            lo, hi = _mul(lo, hi, lo, hi)
            push_lo(lo); push_hi(hi)
        elif op == OP_POWI:
            lo = pop_lo(); hi = pop_hi()
            lo, hi = _powi(lo, hi, arg)
            push_lo(lo); push_hi(hi)
        elif op == OP_SIN:
            lo, hi = _trig(pop_lo(), pop_hi(), math.sin, HALF_PI, -HALF_PI)
            push_lo(lo); push_hi(hi)
        elif op == OP_COS:
            lo, hi = _trig(pop_lo(), pop_hi(), math.cos, 0.0, math.pi)
            push_lo(lo); push_hi(hi)
        elif op == OP_EXP:
            lo, hi = _exp(pop_lo(), pop_hi())
            push_lo(lo); push_hi(hi)
        else:
            blo = pop_lo(); bhi = pop_hi()
            alo = pop_lo(); ahi = pop_hi()
            if op == OP_ADD:
                push_lo(add_down(alo, blo)); push_hi(add_up(ahi, bhi))
            elif op == OP_SUB:
                push_lo(add_down(alo, -bhi)); push_hi(add_up(ahi, -blo))
            elif op == OP_MUL:
                lo, hi = _mul(alo, ahi, blo, bhi)
                push_lo(lo); push_hi(hi)
            elif op == OP_DIV:
                if blo <= 0.0 <= bhi:
                    return NAN, NAN
                lo = min(div_down(alo, blo), div_down(alo, bhi), div_down(ahi, blo), div_down(ahi, bhi))
                hi = max(div_up(alo, blo), div_up(alo, bhi), div_up(ahi, blo), div_up(ahi, bhi))
                push_lo(lo); push_hi(hi)
            else:  # pragma: no cover
                raise ValueError(f"bad opcode {op}")
    return st_lo[-1], st_hi[-1]
