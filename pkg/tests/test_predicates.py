import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curve_arrange import predicates as P
from curve_arrange.funcmodel import CurveSystem
from curve_arrange.numeric import Box2
from curve_arrange.predicates import BoxClass


def box(x0, y0, x1, y1):
    return (float(x0), float(x1), float(y0), float(y1))


CIRCLE = CurveSystem("x^2 + y^2 - 1", "x^2 + y^2 - 1")
PARABOLA_CIRCLE = CurveSystem("y - x^2", "x^2 + y^2 - 1")


# -- C0

def test_c0_examples():
    assert P.c0(CIRCLE, "f", box(2, 2, 3, 3))
    assert not P.c0(CIRCLE, "f", box(0, 0, 1, 1))
    assert P.c0(CurveSystem("1", "x"), "f", box(-5, -5, 5, 5))


def test_c0_accepts_exact_boxes():
    assert P.c0(CIRCLE, "f", Box2.from_bounds(2, 2, 3, 3))


# -- C1 and squaring

def test_c1_fails_on_large_box_with_loose_square():
    s = CurveSystem("y - x^2", "y")
    assert not P.c1(s, "f", box(-1, -1, 1, 1))


def test_c1_holds_on_small_box():
    s = CurveSystem("y - x^2", "y")
    assert P.c1(s, "f", box(Fraction(-1, 4), 0, Fraction(1, 4), Fraction(1, 2)))


def test_c1_with_unit_partial():
    # h_y = exp(y) is positive, so its loose square is too
    s = CurveSystem("x + exp(y)", "y")
    assert P.c1(s, "f", box(-9, -9, 9, 9))


def test_c1_unit_partial_can_still_fail_loosely():
    # h_y = 2y has a loose square of [-4, 4] on [-1, 1]
    s = CurveSystem("x + y^2", "y")
    assert not P.c1(s, "f", box(-1, -1, 1, 1))


def test_loose_and_tight_squares_differ_on_witness():
    s = CurveSystem("y - x^2", "y")
    b = box(-1, -1, 1, 1)
    assert not P.c1(s, "f", b, square=P.loose_square)
    assert P.c1(s, "f", b, square=P.tight_square)


@pytest.mark.parametrize("a,loose,tight", [((-1.0, 2.0), (-2.0, 4.0), (0.0, 4.0)),
                                           ((1.0, 3.0), (1.0, 9.0), (1.0, 9.0)),
                                           ((-3.0, -2.0), (4.0, 9.0), (4.0, 9.0))])
def test_square_helpers(a, loose, tight):
    assert P.loose_square(a) == loose
    assert P.tight_square(a) == tight


@given(st.floats(-100, 100), st.floats(-100, 100))
def test_tight_inside_loose(a, b):
    iv = (min(a, b), max(a, b))
    lo, hi = P.loose_square(iv)
    tlo, thi = P.tight_square(iv)
    assert lo <= tlo and thi <= hi


# -- classification

def test_classify_excluded():
    assert P.classify(CIRCLE, box(2, 2, 3, 3)) is BoxClass.EXCLUDED


def test_classify_f_candidate():
    s = CurveSystem("y - x", "x^2 + y^2 + 3")
    assert P.classify(s, box(-1, -1, 1, 1)) is BoxClass.F_CANDIDATE


def test_classify_g_candidate():
    s = CurveSystem("x^2 + y^2 + 3", "y - x")
    assert P.classify(s, box(-1, -1, 1, 1)) is BoxClass.G_CANDIDATE


def test_classify_fg_candidate_near_intersection():
    c = (0.786, 0.618)
    b = box(c[0] - 1 / 16, c[1] - 1 / 16, c[0] + 1 / 16, c[1] + 1 / 16)
    assert P.classify(PARABOLA_CIRCLE, b) is BoxClass.FG_CANDIDATE


def test_classify_unresolved_at_singular_point():
    s = CurveSystem("x^2 + y^2", "x - y")
    assert P.classify(s, box(-1, -1, 1, 1)) is BoxClass.UNRESOLVED


def test_monotone_axes():
    s = CurveSystem("y - x^2", "x")
    assert P.monotone_axes(s, "f", box(0.5, -1, 1, 1)) == "xy"
    assert P.monotone_axes(s, "f", box(-1, -1, 1, 1)) == "y"


# -- Jacobian condition

def test_jacobian_determinant_example():
    lo, hi = P.jacobian_det(PARABOLA_CIRCLE, box(0.5, 0.25, 1, 0.75))
    assert lo <= -5 and -1.5 <= hi < 0
    assert P.jc(PARABOLA_CIRCLE, box(0.5, 0.25, 1, 0.75))


def test_jacobian_constant():
    s = CurveSystem("x + y", "x - y")
    assert P.jacobian_det(s, box(-7, -7, 7, 7)) == (-2.0, -2.0)
    assert P.jc(s, box(-7, -7, 7, 7))


def test_jacobian_identical_curves():
    s = CurveSystem("x^3 - y", "x^3 - y")
    assert not P.jc(s, box(0.25, 0.25, 0.5, 0.5))


# -- Miranda and MK

def test_miranda_decoupled():
    assert P.miranda(CurveSystem("x", "y"), box(-1, -1, 1, 1))


def test_miranda_rotated_system_fails():
    assert not P.miranda(CurveSystem("x + y", "x - y"), box(-1, -1, 1, 1))


def test_miranda_no_sign_change():
    assert not P.miranda(CurveSystem("x", "y"), box(1, 1, 2, 2))


def test_mk_rotated_system_certificate():
    cert = P.mk_test(CurveSystem("x + y", "x - y"), box(-1, -1, 1, 1))
    assert cert is not None
    (a, mb), (c, d) = cert.Y
    assert (a, mb, c, d) == (0.5, 0.5, 0.5, -0.5)
    assert cert.face_signs == {("x", "-"): -1, ("x", "+"): 1, ("y", "-"): -1, ("y", "+"): 1}


def test_mk_near_circle_parabola_root():
    x = math.sqrt((math.sqrt(5) - 1) / 2)
    y = (math.sqrt(5) - 1) / 2
    assert P.mk_test(PARABOLA_CIRCLE, box(x - 1 / 16, y - 1 / 16, x + 1 / 16, y + 1 / 16))


def test_mk_without_real_roots():
    s = CurveSystem("x^2 + y^2 + 1", "x - y")
    for b in [box(-1, -1, 1, 1), box(0, 0, 0.5, 0.5), box(-3, 2, 1, 6)]:
        assert P.mk_test(s, b) is None


def test_mk_singular_preconditioner():
    s = CurveSystem("x^2 - y", "x^2 - y + x^3")
    cert, reason = P.mk_check(s, box(-1, -1, 1, 1))
    assert cert is None and reason == P.SINGULAR


def test_component_on_faces():
    cert = P.mk_test(CurveSystem("x + y", "x - y"), box(-1, -1, 1, 1))
    p, q, s = cert.component_on("x", "+")
    # at (1, 0): f = 1, g = 1 and fhat = x
    assert s * (p * 1 + q * 1) > 0
    p, q, s = cert.component_on("y", "-")
    # at (0, -1): f = -1, g = 1 and ghat = y
    assert s * (p * -1 + q * 1) > 0


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(0.01, 0.1))
def test_mk_success_implies_root_inside(cx, cy, h):
    # linear system with root (1/3, -1/5)
    s = CurveSystem("2*x - y - 13/15", "x + 3*y + 4/15")
    b = box(cx - h, cy - h, cx + h, cy + h)
    if P.mk_test(s, b) is not None:
        assert cx - h < 1 / 3 < cx + h and cy - h < -1 / 5 < cy + h
