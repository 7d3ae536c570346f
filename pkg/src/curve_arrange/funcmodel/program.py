"""Compile expression trees to postfix interval programs.

The interpreter is the compiled ``_kernel`` extension when it was built,
otherwise ``_pykernel``.  Set ``CURVE_ARRANGE_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
from array import array
from fractions import Fraction

from .. import _rounding as R
from . import _pykernel
from .expr import Add, Const, Div, Expr, Func, Mul, Neg, Pow, Sub, Var
from .opcodes import (OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_MUL, OP_NEG,
                      OP_POWI, OP_SIN, OP_SQR, OP_SUB, OP_X, OP_Y)

MAX_STACK = 256

if os.environ.get("CURVE_ARRANGE_PURE", "") not in ("", "0"):
    _kernel = _pykernel
else:
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _kernel = _pykernel

BACKEND = _kernel.BACKEND


class DomainError(ArithmeticError):
    """Interval evaluation divided by an interval containing zero."""


def const_bounds(q: Fraction):
    v = float(q)
    if Fraction(v) == q:
        return v, v
    return R.down(v), R.up(v)


class Program:
    __slots__ = ("code", "consts", "depth", "expr", "_eval")

    def __init__(self, expr: Expr, kernel=None):
        self.expr = expr
        code = []
        consts = []
        const_index = {}
        depth = 0
        maxdepth = 0

        def emit(op, arg=0, delta=0):
            nonlocal depth, maxdepth
            code.append(op)
            code.append(arg)
            depth += delta
            maxdepth = max(maxdepth, depth)

        def walk(e):
            if isinstance(e, Var):
                emit(OP_X if e.name == "x" else OP_Y, 0, 1)
            elif isinstance(e, Const):
                if e.value not in const_index:
                    const_index[e.value] = len(consts) // 2
                    consts.extend(const_bounds(e.value))
                emit(OP_CONST, const_index[e.value], 1)
            elif isinstance(e, Neg):
                walk(e.a)
                emit(OP_NEG)
            elif isinstance(e, Pow):
                walk(e.base)
                if e.n == 2:
                    emit(OP_SQR)
                else:
                    emit(OP_POWI, e.n)
            elif isinstance(e, Func):
                walk(e.arg)
                emit({"sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP}[e.name])
            else:
                walk(e.a)
                walk(e.b)
                op = {Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL, Div: OP_DIV}[type(e)]
                emit(op, 0, -1)

        walk(expr)
        if maxdepth > MAX_STACK:
            raise ValueError(f"expression too deep ({maxdepth} > {MAX_STACK})")
        self.code = array("q", code)
        self.consts = array("d", consts or [0.0, 0.0])
        self.depth = maxdepth
        k = kernel or _kernel
        self._eval = k.eval_iv

    def __call__(self, xlo, xhi, ylo, yhi):
        lo, hi = self._eval(self.code, self.consts, xlo, xhi, ylo, yhi)
        if lo != lo:
            raise DomainError(f"division by an interval containing 0 in {self.expr!r}")
        return lo, hi

    def at(self, x, y):
        return self(x, x, y, y)


def kernels():
    """Available interpreters, compiled first."""
    out = []
    try:
        from . import _kernel as k  # type: ignore[attr-defined]
        out.append(k)
    except ImportError:
        pass
    out.append(_pykernel)
    return out


__all__ = ["Program", "DomainError", "BACKEND", "kernels", "const_bounds"]
