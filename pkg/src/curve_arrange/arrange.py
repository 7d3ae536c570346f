"""Stages V-IX: conforming subdivision, vertices on bichromatic segments,
edges inside each box, and the labeled planar straight-line graph."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import predicates as P
from .errors import InternalError, ResolutionLimit
from .funcmodel.system import CurveSystem
from .isolate import Isolator, RootRecord
from .predicates import BoxClass, MKCertificate
from .subdiv import Cell, Frame, SubdivTree

log = logging.getLogger(__name__)

LABEL = {"f": "S", "g": "T"}
KIND = {"f": "f-vertex", "g": "g-vertex"}
CLAMP_LO, CLAMP_HI = Fraction(1, 4), Fraction(3, 4)
# dyadic stand-ins for 1/3 and 2/3 when the order overrides interpolation
FIRST, SECOND = Fraction(11, 32), Fraction(21, 32)
QUANTUM = 64


# -- output graph ------------------------------------------------------------------------

@dataclass
class Pslg:
    """Vertices ``(x, y, kind)`` with exact dyadic coordinates and edges
    ``(u, v, label, owner)`` where ``owner`` is the lattice square of the box."""

    vertices: List[Tuple[Fraction, Fraction, str]] = field(default_factory=list)
    edges: List[Tuple[int, int, str, tuple]] = field(default_factory=list)

    def add_vertex(self, x: Fraction, y: Fraction, kind: str) -> int:
        self.vertices.append((x, y, kind))
        return len(self.vertices) - 1

    def add_edge(self, u: int, v: int, label: str, owner=None) -> None:
        if u == v:
            raise InternalError("degenerate edge")
        self.edges.append((u, v, label, owner))

    def point(self, v: int) -> Tuple[Fraction, Fraction]:
        x, y, _ = self.vertices[v]
        return x, y

    def root_vertices(self) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if v[2] == "root-vertex"]

    def degree(self, v: int, label: Optional[str] = None) -> int:
        return sum(1 for e in self.edges if v in e[:2] and (label is None or e[2] == label))

    def adjacency(self, label: str) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {}
        for u, v, lab, _ in self.edges:
            if lab == label:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        return adj

    def components(self, label: str) -> List[dict]:
        """Connected components of one label: vertex set and whether it is closed."""
        adj = self.adjacency(label)
        seen, out = set(), []
        for start in sorted(adj):
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(adj[v])
            seen |= comp
            ends = sorted(v for v in comp if len(adj[v]) == 1)
            out.append({"vertices": comp, "ends": ends, "closed": not ends})
        return out

    def canonical(self) -> "Pslg":
        """Copy with vertices ordered by ``(y, x)`` and edges by ids and label."""
        order = sorted(range(len(self.vertices)),
                       key=lambda i: (self.vertices[i][1], self.vertices[i][0], self.vertices[i][2]))
        new_id = {old: n for n, old in enumerate(order)}
        out = Pslg([self.vertices[i] for i in order])
        edges = []
        for u, v, lab, owner in self.edges:
            a, b = sorted((new_id[u], new_id[v]))
            edges.append((a, b, lab, owner))
        out.edges = sorted(edges, key=lambda e: (e[0], e[1], e[2]))
        return out

    def simplified(self) -> "Pslg":
        """Drop degree-2 curve vertices lying on the straight line between
        their two neighbors.  The drawing is unchanged."""
        inc: Dict[int, List[int]] = {}
        edges = {n: e for n, e in enumerate(self.edges)}
        for n, (u, v, _, _) in edges.items():
            inc.setdefault(u, []).append(n)
            inc.setdefault(v, []).append(n)
        present = {(min(u, v), max(u, v)) for u, v, _, _ in self.edges}
        for w in range(len(self.vertices)):
            if self.vertices[w][2] == "root-vertex" or len(inc.get(w, ())) != 2:
                continue
            e1, e2 = inc[w]
            u1, v1, lab1, own1 = edges[e1]
            u2, v2, lab2, own2 = edges[e2]
            if lab1 != lab2:
                continue
            a = u1 if v1 == w else v1
            b = u2 if v2 == w else v2
            if a == b or (min(a, b), max(a, b)) in present:
                continue
            pa, pw, pb = self.point(a), self.point(w), self.point(b)
            if _orient(pa, pw, pb) != 0:
                continue
            del edges[e1], edges[e2]
            n = len(self.edges) + w
            edges[n] = (a, b, lab1, own1)
            present.discard((min(a, w), max(a, w)))
            present.discard((min(b, w), max(b, w)))
            present.add((min(a, b), max(a, b)))
            for x, old in ((a, e1), (b, e2)):
                inc[x] = [n if m == old else m for m in inc[x]]
            inc[w] = []
        keep = sorted({x for u, v, _, _ in edges.values() for x in (u, v)}
                      | {i for i, v in enumerate(self.vertices) if v[2] == "root-vertex"})
        new_id = {old: k for k, old in enumerate(keep)}
        out = Pslg([self.vertices[i] for i in keep])
        out.edges = [(new_id[u], new_id[v], lab, own) for u, v, lab, own in edges.values()]
        return out.canonical()

    def polylines(self, label: str) -> List[List[Tuple[float, float]]]:
        """Edges of one label as float point pairs."""
        return [[tuple(map(float, self.point(u))), tuple(map(float, self.point(v)))]
                for u, v, lab, _ in self.edges if lab == label]


# -- exact segment geometry -----------------------------------------------------------------

def _orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(a, b, c) -> bool:
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segments_cross(p1, p2, q1, q2) -> bool:
    """Closed segments meet somewhere other than at a shared endpoint."""
    shared = {p1, p2} & {q1, q2}
    if shared:
        if len(shared) == 2:
            return True
        s = shared.pop()
        a = p2 if p1 == s else p1
        b = q2 if q1 == s else q1
        # only overlap along a common line counts
        return _orient(s, a, b) == 0 and (_on_segment(s, a, b) or _on_segment(s, b, a))
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return ((o1 == 0 and _on_segment(p1, p2, q1)) or (o2 == 0 and _on_segment(p1, p2, q2))
            or (o3 == 0 and _on_segment(q1, q2, p1)) or (o4 == 0 and _on_segment(q1, q2, p2)))


def polylines_cross(a: Sequence, b: Sequence) -> bool:
    for i in range(len(a) - 1):
        for j in range(len(b) - 1):
            if segments_cross(a[i], a[i + 1], b[j], b[j + 1]):
                return True
    return False


# -- ordering on root boxes ------------------------------------------------------------------

def order_on_edge(cert: MKCertificate, axis: str, side: str, f_start: int, g_start: int) -> str:
    """Which of the two curve crossings comes first along a face segment.

    ``f_start`` and ``g_start`` are the signs at the segment's start.  On
    the face the certificate's component ``p*f + q*g`` has constant sign
    ``s``; where ``f`` vanishes ``g`` therefore has sign ``s*sgn(q)``.
    Returns ``"fg"`` when the f-crossing precedes the g-crossing.
    """
    p, q, s = cert.component_on(axis, side)
    if p == 0.0 or q == 0.0:
        raise InternalError("certificate component misses a curve on a doubly bichromatic edge")
    g_at_f = s * (1 if q > 0 else -1)
    f_at_g = s * (1 if p > 0 else -1)
    by_g = "fg" if g_at_f == g_start else "gf"
    by_f = "gf" if f_at_g == f_start else "fg"
    if by_f != by_g:
        raise InternalError("certificate gives contradictory edge order")
    return by_g


@dataclass(frozen=True)
class PatternCase:
    group: str
    variant: str
    orders: Tuple[Tuple[tuple, str], ...] = ()


def classify_pattern(fs: Sequence[int], gs: Sequence[int], f_sides, g_sides) -> Tuple[str, str]:
    """Group and variant from corner signs (SW, SE, NE, NW) and the sides
    carrying each curve's vertices."""
    same = all(a == b for a, b in zip(fs, gs)) or all(a == -b for a, b in zip(fs, gs))
    opposite = {frozenset("SN"), frozenset("EW")}
    if same:
        return "II", "a" if frozenset(f_sides) in opposite else "b"
    shared = set(f_sides) & set(g_sides)
    if not shared:
        return "III", "a"
    rest = (set(f_sides) | set(g_sides)) - shared
    return "III", "b" if frozenset(rest) in opposite else "c"


# -- segments --------------------------------------------------------------------------------

class Seg:
    """A maximal piece of a box side between breakpoints of the subdivision."""

    __slots__ = ("p0", "p1", "signs", "verts", "t", "order", "origin", "horizontal")

    def __init__(self, p0, p1, signs):
        self.p0, self.p1 = p0, p1
        self.horizontal = p0[1] == p1[1]
        self.signs = signs  # {"f": (s0, s1), "g": (s0, s1)}
        self.verts: Dict[str, int] = {}
        self.t: Dict[str, Fraction] = {}
        self.order: Optional[str] = None
        self.origin: Optional[str] = None

    def bichromatic(self, h: str) -> bool:
        a, b = self.signs[h]
        return a != b

    @property
    def doubly(self) -> bool:
        return self.bichromatic("f") and self.bichromatic("g")

    @property
    def length(self) -> int:
        return (self.p1[0] - self.p0[0]) + (self.p1[1] - self.p0[1])


_SIDE_FACE = {"S": ("y", "-"), "N": ("y", "+"), "W": ("x", "-"), "E": ("x", "+")}


@dataclass
class Arrangement:
    """Result of a run.  ``raw`` keeps every box-level vertex and edge;
    ``pslg`` merges collinear chains of it."""

    raw: Pslg
    roots: List[RootRecord]
    tree: SubdivTree
    frame: Frame
    patterns: List[PatternCase] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pslg = self.raw.simplified()

    def boxes(self) -> List[dict]:
        out = []
        for c in self.tree.leaves():
            b = c.box2()
            out.append({"rect": [b.ix.lo, b.iy.lo, b.ix.hi, b.iy.hi], "depth": c.depth,
                        "class": c.cls.value if c.cls is not None else "unresolved",
                        "sq": c.square})
        out.sort(key=lambda r: (r["sq"][1], r["sq"][0], r["sq"][2]))
        for r in out:
            del r["sq"]
        return out

    def root_reports(self) -> List[dict]:
        return [r.report() for r in self.roots]


class ArrangementBuilder:
    """Carries the subdivision from isolated roots to the final graph."""

    def __init__(self, system: CurveSystem, frame: Frame, eps: float = math.inf,
                 max_depth: int = 40):
        self.system = system
        self.frame = frame
        self.eps = eps
        self.max_depth = max_depth
        self.iso = Isolator(system, frame, eps, max_depth)
        self.tree = self.iso.tree
        self.pslg = Pslg()
        self.segs: Dict[tuple, Seg] = {}
        self.boundary: Dict[int, List[Tuple[str, Seg]]] = {}
        self._signs: Dict[tuple, int] = {}
        self.patterns: List[PatternCase] = []
        self.roots: List[RootRecord] = []
        self.stats: Dict[str, object] = {}

    # -- helpers
    def sign(self, h: str, pt) -> int:
        key = (h, pt)
        s = self._signs.get(key)
        if s is None:
            s = self.system.sign(h, self.frame.x_exact(pt[0]), self.frame.y_exact(pt[1]))
            self._signs[key] = s
        return s

    def real(self, pt) -> Tuple[Fraction, Fraction]:
        return self.frame.x_exact(pt[0]), self.frame.y_exact(pt[1])

    def value(self, h: str, pt) -> float:
        x0, x1 = self.frame.xf(pt[0])
        y0, y1 = self.frame.yf(pt[1])
        lo, hi = self.system.programs[h](x0, x1, y0, y1)
        return 0.5 * (lo + hi)

    # -- Stages V-VII
    def conform(self) -> None:
        tree = self.tree
        for rec in self.roots:
            reg = tree.add_region(rec.bsq, rec)
            reg.inherit = self.iso.inherit_for(rec)
            rec.region = reg
            tree.prune_extended_root(reg)
        log.info("stage V: %d extended root box(es) blacked out", len(self.roots))

        def relevant(a: Cell, n: Cell) -> bool:
            return a.is_candidate() and n.is_candidate()

        ks = tree.external_conform(relevant)
        log.info("stage VI-VII: external conforming, k = %s", sorted(ks.values()))
        for reg in tree.regions:
            tree.internal_conform(reg)
        self.stats["k"] = sorted(ks.values())

    # -- segments and vertices
    def _side_points(self, cell: Cell, side: str) -> List[tuple]:
        i, j, s = cell.square
        if side in ("S", "N"):
            y = j if side == "S" else j + s
            cuts = {i, i + s}
            for n in self.tree.side_neighbors(cell, side):
                for t in (n.i, n.i + n.s):
                    if i < t < i + s:
                        cuts.add(t)
            pts = [(t, y) for t in sorted(cuts)]
        else:
            x = i + s if side == "E" else i
            cuts = {j, j + s}
            for n in self.tree.side_neighbors(cell, side):
                for t in (n.j, n.j + n.s):
                    if j < t < j + s:
                        cuts.add(t)
            pts = [(x, t) for t in sorted(cuts)]
        return pts

    def _seg(self, p0, p1) -> Seg:
        key = (p0, p1)
        seg = self.segs.get(key)
        if seg is None:
            signs = {h: (self.sign(h, p0), self.sign(h, p1)) for h in "fg"}
            seg = self.segs[key] = Seg(p0, p1, signs)
        return seg

    def _boundary(self, cell: Cell) -> List[Tuple[str, Seg, bool]]:
        """Segments of the cell boundary in counter-clockwise order with the
        side letter and whether traversal runs from ``p0`` to ``p1``."""
        out = []
        for side in ("S", "E", "N", "W"):
            pts = self._side_points(cell, side)
            segs = [(side, self._seg(a, b)) for a, b in zip(pts, pts[1:])]
            forward = side in ("S", "E")
            if not forward:
                segs.reverse()
            out.extend((sd, sg, forward) for sd, sg in segs)
        return out

    def place_vertices(self, cells: List[Cell]) -> None:
        """One h-vertex per h-bichromatic segment at the clamped linear
        interpolation of the endpoint values."""
        for c in cells:
            bd = self._boundary(c)
            self.boundary[id(c)] = bd
            for side, seg, _ in bd:
                for h in "fg":
                    if not seg.bichromatic(h) or h in seg.t:
                        continue
                    if getattr(c, h + "st") == P.H_EXCLUDED:
                        raise InternalError(f"{h} changes sign on the side of a box excluding it",
                                            self._rect(c.square))
                    v0, v1 = self.value(h, seg.p0), self.value(h, seg.p1)
                    t = Fraction(1, 2)
                    if v0 != v1 and (v0 < 0) != (v1 < 0):
                        t = Fraction(round(v0 / (v0 - v1) * QUANTUM), QUANTUM)
                    seg.t[h] = min(max(t, CLAMP_LO), CLAMP_HI)

    def _rect(self, sq):
        b = self.frame.box2(*sq)
        return (b.ix.lo, b.iy.lo, b.ix.hi, b.iy.hi)

    # -- Stage IX ordering
    def _bisect_order(self, seg: Seg) -> str:
        a, b = seg.p0, seg.p1
        fa, ga = seg.signs["f"][0], seg.signs["g"][0]
        while True:
            n = (b[0] - a[0]) + (b[1] - a[1])
            if n < 2:
                raise ResolutionLimit("curves cross a segment at the same lattice point",
                                      self._rect((a[0], a[1], 1)))
            m = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
            fm, gm = self.sign("f", m), self.sign("g", m)
            f_left, g_left = fa != fm, ga != gm
            if f_left != g_left:
                return "fg" if f_left else "gf"
            if f_left:
                b = m
            else:
                a, fa, ga = m, fm, gm

    def resolve_ambiguous(self) -> None:
        """Fix the order of the two vertices on every doubly bichromatic
        segment: certificates on root boxes, bisection elsewhere."""
        counts = {"root": 0, "bisect": 0}
        for rec in self.roots:
            cell = rec.region.root_cell
            for side, seg, _ in self.boundary[id(cell)]:
                if not seg.doubly:
                    continue
                axis, face = _SIDE_FACE[side]
                seg.order = order_on_edge(rec.cert, axis, face, seg.signs["f"][0], seg.signs["g"][0])
                seg.origin = "root"
                counts["root"] += 1
        for key in sorted(self.segs):
            seg = self.segs[key]
            if seg.doubly and seg.order is None and "f" in seg.t:
                seg.order = self._bisect_order(seg)
                seg.origin = "bisect"
                counts["bisect"] += 1
        self.stats["orders"] = counts

    def _materialise(self) -> None:
        """Final positions and graph vertices for every placed crossing."""
        for key in sorted(self.segs):
            seg = self.segs[key]
            if not seg.t:
                continue
            if seg.order is not None:
                first, second = seg.order[0], seg.order[1]
                if not seg.t[first] < seg.t[second]:
                    seg.t[first], seg.t[second] = FIRST, SECOND
            (x0, y0), (x1, y1) = self.real(seg.p0), self.real(seg.p1)
            for h in sorted(seg.t):
                t = seg.t[h]
                seg.verts[h] = self.pslg.add_vertex(x0 + t * (x1 - x0), y0 + t * (y1 - y0), KIND[h])

    # -- connecting
    def _cyclic(self, cell: Cell):
        """``(vertex, curve, side)`` around the cell, counter-clockwise."""
        out = []
        for side, seg, forward in self.boundary[id(cell)]:
            items = sorted(seg.verts.items(), key=lambda kv: seg.t[kv[0]], reverse=not forward)
            out.extend((v, h, side) for h, v in items)
        return out

    def root_box_connect(self, rec: RootRecord) -> PatternCase:
        cell = rec.region.root_cell
        seq = self._cyclic(cell)
        per = {h: [v for v, hh, _ in seq if hh == h] for h in "fg"}
        if len(per["f"]) != 2 or len(per["g"]) != 2:
            raise InternalError("root box boundary must carry two vertices of each curve",
                                self._rect(cell.square))
        pattern = "".join(h for _, h, _ in seq)
        if pattern not in ("fgfg", "gfgf"):
            raise InternalError(f"curves do not alternate around the root box ({pattern})",
                                self._rect(cell.square))
        i, j, s = cell.square
        corners = [(i, j), (i + s, j), (i + s, j + s), (i, j + s)]
        fs = [self.sign("f", c) for c in corners]
        gs = [self.sign("g", c) for c in corners]
        f_sides = {sd for _, h, sd in seq if h == "f"}
        g_sides = {sd for _, h, sd in seq if h == "g"}
        group, variant = classify_pattern(fs, gs, f_sides, g_sides)
        lo, hi = self.real((i, j)), self.real((i + s, j + s))
        cx, cy = (lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2
        rv = self.pslg.add_vertex(cx, cy, "root-vertex")
        for v, h, _ in seq:
            self.pslg.add_edge(rv, v, LABEL[h], cell.square)
        orders = tuple(sorted((seg.p0 + seg.p1, seg.order) for _, seg, _ in self.boundary[id(cell)]
                              if seg.order is not None))
        case = PatternCase(group, variant, orders)
        return case

    def pv_connect(self, cell: Cell) -> None:
        """Pair the vertices of each curve inside a non-root box and add the
        edges, bending pairs that share a side into the box interior."""
        seq = self._cyclic(cell)
        if not seq:
            return
        pos = {v: n for n, (v, _, _) in enumerate(seq)}
        side_of = {v: sd for v, _, sd in seq}
        pairs = []
        for h in "fg":
            vs = [v for v, hh, _ in seq if hh == h]
            if not vs:
                continue
            if len(vs) % 2:
                raise InternalError(f"odd number of {h}-vertices on a box", self._rect(cell.square))
            if len(vs) > 2:
                ax = getattr(cell, h + "ax")
                if not ax:
                    raise InternalError(f"no monotone direction for {h}", self._rect(cell.square))
                k = 0 if "y" in ax else 1
                vs.sort(key=lambda v: self.pslg.point(v)[k])
            pairs.extend((h, a, b) for a, b in zip(vs[0::2], vs[1::2]))
        if len(pairs) > 1:
            chords = [tuple(sorted((pos[a], pos[b]))) for _, a, b in pairs]
            for x in range(len(chords)):
                for y in range(x + 1, len(chords)):
                    (a1, b1), (a2, b2) = chords[x], chords[y]
                    if (a1 < a2 < b1) != (a1 < b2 < b1):
                        raise InternalError("vertex order forces crossing edges in a box",
                                            self._rect(cell.square))
        straight = [(h, a, b) for h, a, b in pairs if side_of[a] != side_of[b]]
        bent = [(h, a, b) for h, a, b in pairs if side_of[a] == side_of[b]]
        drawn = [[self.pslg.point(a), self.pslg.point(b)] for _, a, b in straight]
        for h, a, b in straight:
            self.pslg.add_edge(a, b, LABEL[h], cell.square)
        bent.sort(key=lambda p: -abs(pos[p[1]] - pos[p[2]]))
        lo, hi = self.real((cell.i, cell.j)), self.real((cell.i + cell.s, cell.j + cell.s))
        for h, a, b in bent:
            pa, pb = self.pslg.point(a), self.pslg.point(b)
            mx, my = (pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2
            side = side_of[a]
            span = (hi[1] - lo[1]) if side in ("S", "N") else (hi[0] - lo[0])
            delta = span / 4
            for _ in range(40):
                d = {"S": (0, delta), "N": (0, -delta), "W": (delta, 0), "E": (-delta, 0)}[side]
                bend = (mx + d[0], my + d[1])
                line = [pa, bend, pb]
                if not any(polylines_cross(line, other) for other in drawn):
                    break
                delta /= 2
            else:
                raise InternalError("no crossing-free bend inside a box", self._rect(cell.square))
            bv = self.pslg.add_vertex(bend[0], bend[1], KIND[h])
            self.pslg.add_edge(a, bv, LABEL[h], cell.square)
            self.pslg.add_edge(bv, b, LABEL[h], cell.square)
            drawn.append(line)

    # -- driver
    def run(self) -> Arrangement:
        self.roots = self.iso.run()
        self.stats["queues"] = self.iso.queues.sizes()
        self.conform()
        root_cells = {id(r.region.root_cell) for r in self.roots}
        active = [c for c in self.tree.leaves()
                  if c.cls is not BoxClass.EXCLUDED or id(c) in root_cells]
        self.place_vertices(active)
        log.info("stage VIII: %d segment(s), %d active box(es)", len(self.segs), len(active))
        self.resolve_ambiguous()
        self._materialise()
        for rec in self.roots:
            self.patterns.append(self.root_box_connect(rec))
        for c in active:
            if id(c) not in root_cells:
                self.pv_connect(c)
        log.info("stage IX: %d vertices, %d edges", len(self.pslg.vertices), len(self.pslg.edges))
        self.stats["leaves"] = sum(1 for _ in self.tree.leaves())
        return Arrangement(self.pslg.canonical(), self.roots, self.tree, self.frame,
                           self.patterns, self.stats)


def lattice_bits_for(max_depth: int) -> int:
    return max_depth + 48


def build_arrangement(f_text, g_text, roi, eps: float = math.inf, *, max_depth: int = 40,
                      escalate_depth: Optional[int] = 30, bits: Optional[int] = None) -> Arrangement:
    """Certified piecewise-linear arrangement of ``f = 0`` and ``g = 0`` in ``roi``.

    ``roi`` is ``(x0, y0, x1, y1)`` with entries that are exact dyadics
    (ints, floats, decimal strings).  Raises ``ResolutionLimit``,
    ``BoundaryRoot``, ``AspectRatioError`` or ``DomainError``.
    """
    if not (eps > 0):
        raise ValueError("eps must be positive")
    system = CurveSystem(f_text, g_text, escalate_depth=escalate_depth, bits=bits)
    frame = Frame(*roi, lattice_bits=lattice_bits_for(max_depth))
    system.check_denominators(frame.fbox(0, 0, frame.size))
    return ArrangementBuilder(system, frame, eps, max_depth).run()
