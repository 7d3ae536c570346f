"""Box predicates: exclusion, monotonicity, Jacobian and Miranda-type tests.

Boxes may be given as :class:`~curve_arrange.numeric.Box2`, as a float
4-tuple ``(xlo, xhi, ylo, yhi)`` already rounded outward, or as any object
with ``fbox()``, ``exact_bounds()`` and ``depth`` (the subdivision boxes).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import _rounding as R
from .funcmodel.system import CurveSystem
from .numeric import Box2

FBox = Tuple[float, float, float, float]


class BoxClass(enum.Enum):
    UNRESOLVED = "unresolved"
    EXCLUDED = "excluded"
    F_CANDIDATE = "f"
    G_CANDIDATE = "g"
    FG_CANDIDATE = "fg"


# Per-curve status of a box.
H_EXCLUDED = 0     # C0 holds
H_INCLUDED = 1     # C0 fails, C1 holds
H_UNRESOLVED = 2   # both fail


def unpack(box):
    """``(fbox, exact_bounds_or_None, depth)`` for any supported box form."""
    if isinstance(box, Box2):
        ex = tuple(v.to_fraction() for v in (box.ix.lo, box.ix.hi, box.iy.lo, box.iy.hi))
        return box.fbox(), ex, box.depth
    if hasattr(box, "fbox"):
        return box.fbox(), box.exact_bounds(), box.depth
    return tuple(box), None, 0


# -- float interval helpers on (lo, hi) pairs ---------------------------------

def iadd(a, b):
    return R.add_down(a[0], b[0]), R.add_up(a[1], b[1])


def isub(a, b):
    return R.add_down(a[0], -b[1]), R.add_up(a[1], -b[0])


def imul(a, b):
    ps_lo = (R.mul_down(a[0], b[0]), R.mul_down(a[0], b[1]),
             R.mul_down(a[1], b[0]), R.mul_down(a[1], b[1]))
    ps_hi = (R.mul_up(a[0], b[0]), R.mul_up(a[0], b[1]),
             R.mul_up(a[1], b[0]), R.mul_up(a[1], b[1]))
    return min(ps_lo), max(ps_hi)


def iscale(s: float, a):
    return imul((s, s), a)


def loose_square(a):
    """``{x*y : x, y in a}``."""
    return imul(a, a)


def tight_square(a):
    """``{x*x : x in a}``; used only to contrast with :func:`loose_square`."""
    lo, hi = a
    if lo >= 0.0:
        return R.mul_down(lo, lo), R.mul_up(hi, hi)
    if hi <= 0.0:
        return R.mul_down(hi, hi), R.mul_up(lo, lo)
    m = max(-lo, hi)
    return 0.0, R.mul_up(m, m)


def has_zero(a) -> bool:
    return a[0] <= 0.0 <= a[1]


def mag(a) -> float:
    return max(abs(a[0]), abs(a[1]))


def mig(a) -> float:
    if has_zero(a):
        return 0.0
    return min(abs(a[0]), abs(a[1]))


def _range(system: CurveSystem, name: str, box):
    fbox, exact, depth = unpack(box)
    return system.box(name, fbox, exact, depth)


# -- C0 / C1 / classification ---------------------------------------------------

def c0(system: CurveSystem, h: str, box) -> bool:
    """True when ``h`` certainly has no zero in ``box``."""
    return not has_zero(_range(system, h, box))


def c1(system: CurveSystem, h: str, box, square=loose_square) -> bool:
    """True when ``0`` is outside ``h_x(B)^2 + h_y(B)^2`` (loose squares by default)."""
    hx = _range(system, h + "x", box)
    hy = _range(system, h + "y", box)
    return not has_zero(iadd(square(hx), square(hy)))


def monotone_axes(system: CurveSystem, h: str, box) -> str:
    """Which partials of ``h`` exclude zero: ``"x"``, ``"y"``, ``"xy"`` or ``""``."""
    out = ""
    if not has_zero(_range(system, h + "x", box)):
        out += "x"
    if not has_zero(_range(system, h + "y", box)):
        out += "y"
    return out


def curve_status(system: CurveSystem, h: str, box) -> int:
    if c0(system, h, box):
        return H_EXCLUDED
    if c1(system, h, box):
        return H_INCLUDED
    return H_UNRESOLVED


def class_from_status(sf: int, sg: int) -> BoxClass:
    if sf == H_UNRESOLVED or sg == H_UNRESOLVED:
        return BoxClass.UNRESOLVED
    if sf == H_EXCLUDED and sg == H_EXCLUDED:
        return BoxClass.EXCLUDED
    if sg == H_EXCLUDED:
        return BoxClass.F_CANDIDATE
    if sf == H_EXCLUDED:
        return BoxClass.G_CANDIDATE
    return BoxClass.FG_CANDIDATE


def classify(system: CurveSystem, box) -> BoxClass:
    return class_from_status(curve_status(system, "f", box), curve_status(system, "g", box))


def is_resolved(system: CurveSystem, box) -> bool:
    return classify(system, box) is not BoxClass.UNRESOLVED


# -- Jacobian condition -----------------------------------------------------------

def jacobian_det(system: CurveSystem, box):
    fx = _range(system, "fx", box)
    fy = _range(system, "fy", box)
    gx = _range(system, "gx", box)
    gy = _range(system, "gy", box)
    return isub(imul(fx, gy), imul(fy, gx))


def jc(system: CurveSystem, box) -> bool:
    """At most one common root in ``box`` when true."""
    return not has_zero(jacobian_det(system, box))


# -- Miranda / MK -----------------------------------------------------------------

SIDES = (("x", "-"), ("x", "+"), ("y", "-"), ("y", "+"))


@dataclass(frozen=True)
class MKCertificate:
    """Outcome of a successful preconditioned Miranda test.

    The preconditioned components are ``fhat = a*f - b*g`` (definite and of
    opposite signs on the two x-faces) and ``ghat = c*f + d*g`` (same for
    the y-faces).  ``face_signs`` maps ``(axis, side)`` to the sign of the
    component owning that face.
    """

    center: Tuple[float, float]
    a: float
    b: float
    c: float
    d: float
    face_signs: Dict[Tuple[str, str], int]

    @property
    def Y(self):
        return ((self.a, -self.b), (self.c, self.d))

    def component_on(self, axis: str, side: str):
        """``(p, q, s)``: on that face ``s * (p*f + q*g) > 0``."""
        s = self.face_signs[(axis, side)]
        if axis == "x":
            return self.a, -self.b, s
        return self.c, self.d, s


def _point_range(system, name, x, y):
    return system.programs[name](x, x, y, y)


def _combo(p: float, q: float, u, v):
    return iadd(iscale(p, u), iscale(q, v))


def _face_check(system, Y, row: int, axis: str, fbox: FBox):
    """Strict Miranda conditions for one preconditioned component; face signs or None."""
    xlo, xhi, ylo, yhi = fbox
    p, q = Y[row]
    signs = {}
    if axis == "x":
        cross = "y"
        width = R.add_up(yhi, -ylo)
        ym = 0.5 * (ylo + yhi)
        faces = (("-", (xlo, xlo, ylo, yhi), (xlo, ym)), ("+", (xhi, xhi, ylo, yhi), (xhi, ym)))
    else:
        cross = "x"
        width = R.add_up(xhi, -xlo)
        xm = 0.5 * (xlo + xhi)
        faces = (("-", (xlo, xhi, ylo, ylo), (xm, ylo)), ("+", (xlo, xhi, yhi, yhi), (xm, yhi)))
    for side, face, (cx, cy) in faces:
        val = _combo(p, q, _point_range(system, "f", cx, cy), _point_range(system, "g", cx, cy))
        if has_zero(val):
            return None
        dpart = _combo(p, q, system.programs["f" + cross](*face), system.programs["g" + cross](*face))
        if not mig(val) > R.mul_up(mag(dpart), width):
            return None
        signs[(axis, side)] = 1 if val[0] > 0.0 else -1
    if signs[(axis, "-")] == signs[(axis, "+")]:
        return None
    return signs


def _miranda_with(system: CurveSystem, Y, fbox: FBox):
    s0 = _face_check(system, Y, 0, "x", fbox)
    if s0 is None:
        return None
    s1 = _face_check(system, Y, 1, "y", fbox)
    if s1 is None:
        return None
    s0.update(s1)
    return s0


def miranda(system: CurveSystem, box) -> bool:
    """Plain Miranda test (identity preconditioner): a root in the interior when true."""
    fbox, _, _ = unpack(box)
    return _miranda_with(system, ((1.0, 0.0), (0.0, 1.0)), fbox) is not None


SINGULAR = "singular preconditioner"
FAILED = "miranda conditions fail"


def _inverse(J):
    (j00, j01), (j10, j11) = J
    det = j00 * j11 - j01 * j10
    scale = abs(j00 * j11) + abs(j01 * j10)
    if not (det == det) or det == 0.0 or abs(det) <= 2.0 ** -50 * scale or abs(det) < 1e-300:
        return None
    Y = ((j11 / det, -j01 / det), (-j10 / det, j00 / det))
    res = max(abs(Y[i][0] * J[0][k] + Y[i][1] * J[1][k] - (1.0 if i == k else 0.0))
              for i in range(2) for k in range(2))
    if not res < 1e-8:
        F = [[Fraction(v) for v in r] for r in J]
        dq = F[0][0] * F[1][1] - F[0][1] * F[1][0]
        if dq == 0:
            return None
        Y = ((float(F[1][1] / dq), float(-F[0][1] / dq)),
             (float(-F[1][0] / dq), float(F[0][0] / dq)))
    return Y


def mk_check(system: CurveSystem, box):
    """``(certificate or None, reason)`` for the preconditioned Miranda test."""
    fbox, _, _ = unpack(box)
    xlo, xhi, ylo, yhi = fbox
    mx, my = 0.5 * (xlo + xhi), 0.5 * (ylo + yhi)

    def mid(name):
        lo, hi = _point_range(system, name, mx, my)
        return 0.5 * (lo + hi)

    J = ((mid("fx"), mid("fy")), (mid("gx"), mid("gy")))
    Y = _inverse(J)
    if Y is None:
        return None, SINGULAR
    signs = _miranda_with(system, Y, fbox)
    if signs is None:
        return None, FAILED
    cert = MKCertificate((mx, my), Y[0][0], -Y[0][1], Y[1][0], Y[1][1], signs)
    return cert, "ok"


def mk_test(system: CurveSystem, box) -> Optional[MKCertificate]:
    """Certificate when the preconditioned test proves a root interior to ``box``."""
    return mk_check(system, box)[0]
