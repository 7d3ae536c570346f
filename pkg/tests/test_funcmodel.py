import math
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curve_arrange.funcmodel import (CurveSystem, DomainError, ExprSyntaxError,
                                     PerturbationWarning, UnknownIdentifier, differentiate,
                                     eval_box, eval_point, eval_sign, parse, to_infix)
from curve_arrange.funcmodel import _pykernel
from curve_arrange.funcmodel.expr import Const, Pow, Sub, Var, eval_exact
from curve_arrange.funcmodel.program import Program, kernels
from curve_arrange.numeric import Box2


def test_parse_parabola_shape():
    assert parse("y - x^2") == Sub(Var("y"), Pow(Var("x"), 2))


def test_parse_circle_evaluates():
    e = parse("x^2 + y^2 - 1")
    assert eval_exact(e, Fraction(3), Fraction(4)) == 24


def test_parse_reports_column():
    with pytest.raises(ExprSyntaxError) as ei:
        parse("sin(x*y")
    assert ei.value.column == 8
    assert "')'" in ei.value.expected


@pytest.mark.parametrize("text", ["z + 1", "tan(x)", "x +* y", "", "2^x", "x^-1"])
def test_parse_rejects(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_unknown_identifier_type():
    with pytest.raises(UnknownIdentifier):
        parse("q*x")


def test_parse_decimals_and_precedence():
    e = parse("-x^2 + 0.5*y/2")
    assert eval_exact(e, Fraction(3), Fraction(4)) == -9 + 1


def test_infix_round_trip():
    for t in ["y - x^2", "sin(x*y) - 1/3", "exp(-x) + cos(2*y)^3", "(x - y)/(1 + x^2)"]:
        e = parse(t)
        assert parse(to_infix(e)) == e


# -- differentiation

@pytest.mark.parametrize("text,var,expected", [
    ("y - x^2", "x", "-2*x"),
    ("x^2 + y^2 - 1", "y", "2*y"),
    ("sin(x*y)", "x", "cos(x*y)*y"),
    ("x^0 + 3", "x", "0"),
])
def test_derivative_examples(text, var, expected):
    d = differentiate(parse(text), var)
    want = parse(expected)
    rng = random.Random(3)
    for _ in range(20):
        x, y = rng.uniform(-2, 2), rng.uniform(-2, 2)
        a = eval_point(d, (x, y))
        b = eval_point(want, (x, y))
        assert abs(a.lo - b.lo) <= 1e-12 * (1 + abs(b.lo))


def test_derivative_simplifies_constants():
    assert differentiate(parse("3*y + 7"), "x") == Const(Fraction(0))


_EXPRS = ["x^3*y - 2*x*y^2 + y - 1/4", "sin(x*y) + cos(x) - exp(y/3)",
          "(x^2 + 1)/(y^2 + 2)", "exp(sin(x) - y)^2"]


@pytest.mark.parametrize("text", _EXPRS)
def test_derivatives_match_central_differences(text):
    e = parse(text)
    dx, dy = differentiate(e, "x"), differentiate(e, "y")
    rng = random.Random(11)
    h = 1e-6

    def val(u, x, y):
        iv = eval_point(u, (x, y))
        return 0.5 * (iv.lo + iv.hi)

    for _ in range(1000):
        x, y = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)
        fd_x = (val(e, x + h, y) - val(e, x - h, y)) / (2 * h)
        fd_y = (val(e, x, y + h) - val(e, x, y - h)) / (2 * h)
        assert fd_x == pytest.approx(val(dx, x, y), rel=1e-6, abs=1e-6)
        assert fd_y == pytest.approx(val(dy, x, y), rel=1e-6, abs=1e-6)


# -- point and box evaluation

@pytest.mark.parametrize("text,p,v", [("y - x^2", (1, 1), 0), ("x^2 + y^2 - 1", (0, 0), -1),
                                      ("x^2 + y^2 - 1", (3, 4), 24)])
def test_point_examples(text, p, v):
    iv = eval_point(parse(text), p, exact=True)
    assert iv.lo.to_fraction() == iv.hi.to_fraction() == v
    f = eval_point(parse(text), p)
    assert f.lo <= v <= f.hi


def test_point_float_width_is_tight():
    iv = eval_point(parse("x^3 - x*y + 1/3"), (Fraction(5, 8), Fraction(-3, 16)))
    assert iv.lo <= iv.hi <= math.nextafter(math.nextafter(iv.lo, math.inf), math.inf) * (1 + 1e-15)


def test_box_examples():
    a = eval_box(parse("x^2 + y^2 - 1"), (2.0, 3.0, 2.0, 3.0))
    assert a.lo <= 7 and a.hi >= 17
    b = eval_box(parse("y - x^2"), (0.0, 1.0, 0.0, 1.0))
    assert b.lo <= -1 and b.hi >= 1
    c = eval_box(parse("5"), Box2.from_bounds(-3, -3, 9, 9))
    assert (c.lo, c.hi) == (5.0, 5.0)


def test_division_by_zero_interval():
    with pytest.raises(DomainError):
        eval_box(parse("1/x"), (-1.0, 1.0, 0.0, 1.0))


def _rand_expr(rng, depth=3):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["x", "y", str(rng.randint(-3, 3)), "1/3"])
    k = rng.randrange(6)
    a = _rand_expr(rng, depth - 1)
    if k == 0:
        return f"{rng.choice(['sin', 'cos', 'exp'])}({a})"
    if k == 1:
        return f"({a})^{rng.randint(2, 4)}"
    if k == 2:
        return f"-({a})"
    b = _rand_expr(rng, depth - 1)
    return f"({a}) {'+-*'[k - 3]} ({b})"


def test_inclusion_100k_triples():
    rng = random.Random(2024)
    exprs = [parse(_rand_expr(rng)) for _ in range(500)]
    for n in range(100_000):
        e = exprs[n % len(exprs)]
        x0, y0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
        w = rng.choice([1.0, 0.25, 1e-3])
        box = (x0, x0 + w, y0, y0 + w)
        px, py = rng.uniform(x0, x0 + w), rng.uniform(y0, y0 + w)
        b = eval_box(e, box)
        p = eval_point(e, (px, py))
        assert b.lo <= p.lo and p.hi <= b.hi


def test_kernels_agree():
    ks = kernels()
    rng = random.Random(5)
    for _ in range(200):
        e = parse(_rand_expr(rng))
        progs = [Program(e, kernel=k) for k in ks]
        for _ in range(10):
            x0, y0 = rng.uniform(-2, 2), rng.uniform(-2, 2)
            box = (x0, x0 + 0.5, y0, y0 + 0.5)
            outs = {p(*box) for p in progs}
            assert len(outs) == 1


def test_pure_kernel_always_available():
    assert _pykernel in kernels()


@settings(max_examples=200, deadline=None)
@given(st.fractions(-4, 4, max_denominator=64), st.fractions(-4, 4, max_denominator=64))
def test_box_contains_exact_polynomial_value(x, y):
    e = parse("x^3*y - 2*x*y^2 + y - 1/3")
    v = eval_exact(e, x, y)
    b = eval_box(e, (float(x) - 1e-3, float(x) + 1e-3, float(y) - 1e-3, float(y) + 1e-3))
    assert b.lo <= v <= b.hi


# -- signs

@pytest.mark.parametrize("text,p,s", [("x + y - 1", ("0.5", "0.5"), 1), ("x^2 + y^2 - 1", (0, 0), -1),
                                      ("y - x^2", (1, 2), 1)])
def test_sign_examples(text, p, s):
    assert eval_sign(parse(text), tuple(Fraction(v) for v in p)) == s


def test_sign_transcendental_decided_by_escalation():
    # sin(x) - x*(1 - x^2/6) is about x^5/120; tiny near 0
    e = parse("sin(x) - x + x^3/6")
    assert eval_sign(e, (Fraction(1, 2 ** 9), Fraction(0))) == 1
    assert eval_sign(e, (Fraction(-1, 2 ** 9), Fraction(0))) == -1


def test_sign_zero_transcendental_warns():
    e = parse("sin(x)")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert eval_sign(e, (Fraction(0), Fraction(0))) == 1
    assert any(issubclass(w.category, PerturbationWarning) for w in caught)


@given(st.fractions(-2, 2, max_denominator=32), st.fractions(-2, 2, max_denominator=32))
def test_sign_never_zero(x, y):
    assert eval_sign(parse("x*y - x + y^2/4"), (x, y)) in (1, -1)


def test_precision_env_var(monkeypatch):
    from curve_arrange.funcmodel.system import precision_bits
    monkeypatch.setenv("CURVE_ARRANGE_PRECISION", "300")
    assert precision_bits() == 300
    monkeypatch.setenv("CURVE_ARRANGE_PRECISION", "20")
    with pytest.raises(ValueError):
        precision_bits()


def test_escalation_tightens_deep_boxes():
    sysm = CurveSystem("x*x - 2*x*y + y*y", "y", escalate_depth=0, bits=200)
    q = Fraction(1, 3)
    d = Fraction(1, 2 ** 60)
    exact = (q, q + d, q, q + d)
    fbox = (float(q), float(q + d), float(q), float(q + d))
    plain = sysm.programs["f"](*fbox)
    lo, hi = sysm.box("f", fbox, exact=exact, depth=60)
    assert plain[0] <= lo and hi <= plain[1]


def test_system_partials():
    s = CurveSystem("y - x^2", "x^2 + y^2 - 1")
    assert s.fy == Const(Fraction(1))
    assert eval_exact(s.gx, Fraction(3), Fraction(0)) == 6


def test_denominator_check():
    s = CurveSystem("1/(x - 1/2)", "y")
    with pytest.raises(DomainError):
        s.check_denominators((0.0, 1.0, 0.0, 1.0))
    # the loose square of [-1, 1] is [-1, 1], so x^2 + 1 is not provably positive there
    with pytest.raises(DomainError):
        CurveSystem("1/(x^2 + 1)", "y").check_denominators((-1.0, 1.0, -1.0, 1.0))
    CurveSystem("1/(x^2 + 2)", "y").check_denominators((-1.0, 1.0, -1.0, 1.0))
