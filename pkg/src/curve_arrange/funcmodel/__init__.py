"""Curve expressions: parsing, differentiation and interval evaluation."""

from .expr import (Expr, ExprSyntaxError, UnknownIdentifier, differentiate,
                   is_rational, parse, to_infix)
from .program import BACKEND, DomainError, Program
from .system import (CurveSystem, PerturbationWarning, eval_box, eval_point,
                     eval_sign)

__all__ = [
    "BACKEND", "CurveSystem", "DomainError", "Expr", "ExprSyntaxError",
    "PerturbationWarning", "Program", "UnknownIdentifier", "differentiate",
    "eval_box", "eval_point", "eval_sign", "is_rational", "parse", "to_infix",
]
