"""Independent floating-point reference: marching squares on a fine grid for
the curves, Newton's method for their common roots."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree
from skimage import measure

from curve_arrange.funcmodel import differentiate, parse
from curve_arrange.funcmodel.expr import (Add, Const, Div, Func, Mul, Neg, Pow,
                                          Sub, Var)


def np_eval(e, x, y):
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Neg):
        return -np_eval(e.a, x, y)
    if isinstance(e, Pow):
        return np_eval(e.base, x, y) ** e.n
    if isinstance(e, Func):
        return {"sin": np.sin, "cos": np.cos, "exp": np.exp}[e.name](np_eval(e.arg, x, y))
    a, b = np_eval(e.a, x, y), np_eval(e.b, x, y)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    if isinstance(e, Div):
        return a / b
    raise TypeError(e)


def poly_coeffs(e):
    """``{(i, j): coefficient}`` of a polynomial expression, else ``None``."""
    if isinstance(e, Const):
        return {(0, 0): e.value}
    if isinstance(e, Var):
        return {(1, 0) if e.name == "x" else (0, 1): Fraction(1)}
    if isinstance(e, Neg):
        a = poly_coeffs(e.a)
        return None if a is None else {k: -v for k, v in a.items()}
    if isinstance(e, Pow):
        a = poly_coeffs(e.base)
        if a is None:
            return None
        out = {(0, 0): Fraction(1)}
        for _ in range(e.n):
            out = _pmul(out, a)
        return out
    if isinstance(e, (Add, Sub, Mul)):
        a, b = poly_coeffs(e.a), poly_coeffs(e.b)
        if a is None or b is None:
            return None
        if isinstance(e, Mul):
            return _pmul(a, b)
        sgn = 1 if isinstance(e, Add) else -1
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) + sgn * v
        return out
    return None


def _pmul(a, b):
    out = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            out[(i + k, j + l)] = out.get((i + k, j + l), 0) + u * v
    return out


class Curve:
    def __init__(self, text: str):
        self.e = parse(text)
        self.ex = differentiate(self.e, "x")
        self.ey = differentiate(self.e, "y")
        self.coeffs = [poly_coeffs(t) for t in (self.e, self.ex, self.ey)]

    def __call__(self, x, y):
        return np_eval(self.e, x, y)

    def grad(self, x, y):
        return np_eval(self.ex, x, y), np_eval(self.ey, x, y)

    def grid(self, xs, ys, which: int = 0):
        """Values on the grid ``ys x xs`` (rows index y)."""
        c = self.coeffs[which]
        if c is None:
            X, Y = np.meshgrid(xs, ys)
            e = (self.e, self.ex, self.ey)[which]
            return np.broadcast_to(np.asarray(np_eval(e, X, Y), float), X.shape)
        deg = max([i for i, _ in c] + [j for _, j in c] + [0])
        C = np.zeros((deg + 1, deg + 1))
        for (i, j), v in c.items():
            C[j, i] += float(v)
        Px = np.vander(xs, deg + 1, increasing=True)
        Py = np.vander(ys, deg + 1, increasing=True)
        return Py @ C @ Px.T


@dataclass
class OracleResult:
    roots: List[Tuple[float, float]]
    contours: dict                       # "f"/"g" -> list of (n, 2) arrays in xy
    closed: dict = field(default_factory=dict)
    reason: Optional[str] = None         # why the pair is not simple, else None

    @property
    def simple(self) -> bool:
        return self.reason is None

    def components(self, h: str) -> int:
        return len(self.contours[h])


def _contours(vals, roi, n):
    x0, y0, x1, y1 = roi
    out, closed = [], []
    for c in measure.find_contours(vals, 0.0):
        # rows index y, columns index x
        xy = np.column_stack((x0 + c[:, 1] * (x1 - x0) / (n - 1), y0 + c[:, 0] * (y1 - y0) / (n - 1)))
        out.append(xy)
        closed.append(bool(np.allclose(c[0], c[-1])))
    return out, closed


def newton(f: Curve, g: Curve, p, steps: int = 60):
    x, y = p
    for _ in range(steps):
        fv, gv = f(x, y), g(x, y)
        fx, fy = f.grad(x, y)
        gx, gy = g.grad(x, y)
        det = fx * gy - fy * gx
        if det == 0:
            return None
        dx = (fv * gy - fy * gv) / det
        dy = (fx * gv - fv * gx) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) < 1e-15:
            break
    if not (abs(f(x, y)) < 1e-10 and abs(g(x, y)) < 1e-10):
        return None
    return x, y


def segment_crossings(a: np.ndarray, b: np.ndarray):
    """Approximate crossing points of two polylines (vectorised per segment of ``a``)."""
    pts = []
    if len(a) < 2 or len(b) < 2:
        return pts
    b0, b1 = b[:-1], b[1:]
    lo = np.minimum(b0, b1)
    hi = np.maximum(b0, b1)
    for p, q in zip(a[:-1], a[1:]):
        m = ((np.maximum(p, q)[0] >= lo[:, 0]) & (np.minimum(p, q)[0] <= hi[:, 0])
             & (np.maximum(p, q)[1] >= lo[:, 1]) & (np.minimum(p, q)[1] <= hi[:, 1]))
        if not m.any():
            continue
        c0, c1 = b0[m], b1[m]
        r = q - p
        s = c1 - c0
        den = r[0] * s[:, 1] - r[1] * s[:, 0]
        ok = den != 0
        w = c0 - p
        t = np.where(ok, (w[:, 0] * s[:, 1] - w[:, 1] * s[:, 0]) / np.where(ok, den, 1), -1)
        u = np.where(ok, (w[:, 0] * r[1] - w[:, 1] * r[0]) / np.where(ok, den, 1), -1)
        hit = ok & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        for tt in t[hit]:
            pts.append(p + tt * r)
    return pts


def _change_mask(V: np.ndarray) -> np.ndarray:
    """Grid cells whose corner values change sign, dilated by one cell."""
    s = V >= 0
    m = (s[:-1, :-1] != s[1:, :-1]) | (s[:-1, :-1] != s[:-1, 1:]) | (s[1:, 1:] != s[1:, :-1]) \
        | (s[1:, 1:] != s[:-1, 1:])
    d = m.copy()
    d[1:] |= m[:-1]
    d[:-1] |= m[1:]
    d[:, 1:] |= d[:, :-1].copy()
    d[:, :-1] |= d[:, 1:].copy()
    return d


def _seeds(mf: np.ndarray, mg: np.ndarray, xs, ys):
    """Cell centers near both curves, thinned to one per cluster."""
    rows, cols = np.nonzero(mf & mg)
    out, taken = [], set()
    for r, c in zip(rows.tolist(), cols.tolist()):
        key = (r // 4, c // 4)
        if key in taken:
            continue
        taken.add(key)
        out.append((0.5 * (xs[c] + xs[c + 1]), 0.5 * (ys[r] + ys[r + 1])))
    return out


def analyse(f_text: str, g_text: str, roi=(-1.0, -1.0, 1.0, 1.0), n: int = 2048,
            margin: float = 1e-3) -> OracleResult:
    """Reference topology of the pair on ``roi`` plus a simplicity verdict."""
    x0, y0, x1, y1 = map(float, roi)
    f, g = Curve(f_text), Curve(g_text)
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    h = max(x1 - x0, y1 - y0) / (n - 1)
    res = OracleResult([], {}, {})
    masks = {}
    for name, c in (("f", f), ("g", g)):
        V = np.ascontiguousarray(c.grid(xs, ys))
        G = np.hypot(c.grid(xs, ys, 1), c.grid(xs, ys, 2))
        near = np.abs(V) < 4 * h * G.max()
        if near.any() and G[near].min() < 1e-2 * max(G.max(), 1e-300):
            res.reason = f"{name} nearly singular"
        masks[name] = _change_mask(V)
        cs, closed = _contours(V, roi, n)
        res.contours[name] = cs
        res.closed[name] = closed
        # tangency with the region boundary
        for arr, tvals in ((V[0, :], xs), (V[-1, :], xs), (V[:, 0], ys), (V[:, -1], ys)):
            d = np.gradient(arr, tvals)
            if np.any((np.abs(arr) < 1e-3) & (np.abs(d) < 1e-2)):
                res.reason = res.reason or f"{name} tangent to the boundary"
        for cc in cs:
            if len(cc) < 8:
                res.reason = res.reason or f"tiny {name} component"
    roots = []
    for p in _seeds(masks["f"], masks["g"], xs, ys):
        r = newton(f, g, p)
        if r is None or not (x0 <= r[0] <= x1 and y0 <= r[1] <= y1):
            continue
        if not any(abs(r[0] - q[0]) + abs(r[1] - q[1]) < 1e-9 for q in roots):
            roots.append(r)
    for r in roots:
        if min(r[0] - x0, x1 - r[0], r[1] - y0, y1 - r[1]) < margin:
            res.reason = res.reason or "root near the boundary"
        fx, fy = f.grad(*r)
        gx, gy = g.grad(*r)
        nf, ng = math.hypot(fx, fy), math.hypot(gx, gy)
        if abs(fx * gy - fy * gx) < 1e-2 * nf * ng:
            res.reason = res.reason or "nearly tangential intersection"
    res.roots = sorted(roots, key=lambda r: (r[1], r[0]))
    return res


MONOMIALS = [(i, j) for i in range(4) for j in range(4) if i + j <= 3]


def random_poly(rng: random.Random, degree: int = 3, den: int = 32) -> str:
    """Random polynomial of total degree at most ``degree`` with dyadic
    coefficients in ``[-2, 2]``."""
    terms = []
    for i, j in MONOMIALS:
        if i + j > degree:
            continue
        c = Fraction(rng.randint(-2 * den, 2 * den), den)
        if c == 0:
            continue
        mono = "*".join(["x"] * i + ["y"] * j)
        terms.append(f"({c.numerator}/{c.denominator})" + (f"*{mono}" if mono else ""))
    return " + ".join(terms) if terms else "1"


def bisect(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = fn(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def resample(lines: List[np.ndarray], count: int) -> np.ndarray:
    """``count`` points spread evenly by arc length over a set of polylines."""
    segs = [(a, b) for ln in lines for a, b in zip(ln[:-1], ln[1:])]
    if not segs:
        return np.zeros((0, 2))
    A = np.array([s[0] for s in segs], float)
    B = np.array([s[1] for s in segs], float)
    L = np.hypot(*(B - A).T)
    cum = np.concatenate(([0.0], np.cumsum(L)))
    t = np.linspace(0, cum[-1], count)
    k = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(segs) - 1)
    w = np.where(L[k] > 0, (t - cum[k]) / np.where(L[k] > 0, L[k], 1), 0.0)
    return A[k] + (B[k] - A[k]) * w[:, None]


def hausdorff(lines_a: List[np.ndarray], lines_b: List[np.ndarray], count: int = 1000,
              fine: float = 1e-4) -> float:
    """Symmetric sampled Hausdorff distance between two polyline sets.

    ``count`` points are spread over each set and measured against a dense
    resampling (spacing about ``fine``) of the other one.
    """
    if not lines_a and not lines_b:
        return 0.0
    if not lines_a or not lines_b:
        return math.inf

    def dense(lines):
        total = sum(float(np.hypot(*np.diff(np.asarray(ln, float), axis=0).T).sum()) for ln in lines)
        return resample(lines, max(count, int(total / fine)))

    d1 = cKDTree(dense(lines_b)).query(resample(lines_a, count))[0].max()
    d2 = cKDTree(dense(lines_a)).query(resample(lines_b, count))[0].max()
    return float(max(d1, d2)) + fine
