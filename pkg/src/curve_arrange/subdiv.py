"""Quadtree subdivision of the region of interest.

Geometry lives on an integer lattice: the region of interest ``B0`` is
``[0, 2**N]**2`` in lattice units, so every aligned box is a lattice square
``(i, j, s)`` with ``s`` a power of two.  Extended root boxes ``8B`` and
the boxes of their standard subdivision are half-aligned lattice squares.

Neighbors are found by point location from the nearest common ancestor,
which always reflects the current leaves.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from . import _rounding as R
from .errors import AspectRatioError, InternalError, ResolutionLimit
from .numeric import ALIGNED, FREE, HALF_ALIGNED, Box2, Dyadic, Interval

SIDES = ("S", "E", "N", "W")


# -- lattice frame ------------------------------------------------------------------

class Frame:
    """Maps lattice squares onto the region of interest."""

    def __init__(self, x0, y0, x1, y1, lattice_bits: int = 80):
        x0, y0, x1, y1 = (Dyadic.coerce(v) for v in (x0, y0, x1, y1))
        if not (x0 < x1 and y0 < y1):
            raise ValueError("region of interest must be nonempty")
        w, h = (x1 - x0).to_fraction(), (y1 - y0).to_fraction()
        if max(w, h) > 2 * min(w, h):
            raise AspectRatioError(f"aspect ratio {max(w, h) / min(w, h)} exceeds 2")
        self.bounds = (x0, y0, x1, y1)
        self.N = lattice_bits
        self.size = 1 << lattice_bits
        shift = max(0, -min(v.exponent for v in (x0, y0, x1, y1)))
        self.shift = shift + lattice_bits
        as_int = [(v.mantissa << (v.exponent + shift)) for v in (x0, y0, x1, y1)]
        self._x0n = as_int[0] << lattice_bits
        self._y0n = as_int[1] << lattice_bits
        self._wn = as_int[2] - as_int[0]
        self._hn = as_int[3] - as_int[1]
        self._xcache: Dict[int, Tuple[float, float]] = {}
        self._ycache: Dict[int, Tuple[float, float]] = {}

    def x_num(self, i: int) -> int:
        return self._x0n + self._wn * i

    def y_num(self, j: int) -> int:
        return self._y0n + self._hn * j

    def xf(self, i: int) -> Tuple[float, float]:
        v = self._xcache.get(i)
        if v is None:
            v = self._xcache[i] = R.float_bounds(self.x_num(i), self.shift)
        return v

    def yf(self, j: int) -> Tuple[float, float]:
        v = self._ycache.get(j)
        if v is None:
            v = self._ycache[j] = R.float_bounds(self.y_num(j), self.shift)
        return v

    def x_exact(self, i) -> Fraction:
        return Fraction(self._x0n, 1 << self.shift) + Fraction(self._wn, 1 << self.shift) * i

    def y_exact(self, j) -> Fraction:
        return Fraction(self._y0n, 1 << self.shift) + Fraction(self._hn, 1 << self.shift) * j

    def x_dyadic(self, i: int) -> Dyadic:
        return Dyadic(self.x_num(i), -self.shift)

    def y_dyadic(self, j: int) -> Dyadic:
        return Dyadic(self.y_num(j), -self.shift)

    def point_float(self, i, j) -> Tuple[float, float]:
        return float(self.x_exact(i)), float(self.y_exact(j))

    def fbox(self, i: int, j: int, s: int):
        return self.xf(i)[0], self.xf(i + s)[1], self.yf(j)[0], self.yf(j + s)[1]

    def exact_bounds(self, i: int, j: int, s: int):
        return self.x_exact(i), self.x_exact(i + s), self.y_exact(j), self.y_exact(j + s)

    def depth_of(self, s: int) -> int:
        return self.N - (s.bit_length() - 1)

    def side(self, depth: int) -> int:
        return 1 << (self.N - depth)

    def alignment(self, i: int, j: int, s: int) -> str:
        inside = 0 <= i and 0 <= j and i + s <= self.size and j + s <= self.size
        if inside and i % s == 0 and j % s == 0:
            return ALIGNED
        h = s >> 1
        if h and i % h == 0 and j % h == 0:
            return HALF_ALIGNED
        return FREE

    def box2(self, i: int, j: int, s: int) -> Box2:
        return Box2(Interval(self.x_dyadic(i), self.x_dyadic(i + s)),
                    Interval(self.y_dyadic(j), self.y_dyadic(j + s)),
                    self.depth_of(s), self.alignment(i, j, s))

    def diameter(self, s: int) -> float:
        """Upper bound on the Euclidean diameter of a lattice square of side ``s``."""
        wx = float(Fraction(self._wn * s, 1 << self.shift))
        wy = float(Fraction(self._hn * s, 1 << self.shift))
        return (wx * wx + wy * wy) ** 0.5 * (1 + 1e-12)

    def real_width(self, s: int) -> float:
        return float(Fraction(max(self._wn, self._hn) * s, 1 << self.shift))


# -- cells -----------------------------------------------------------------------------

class Cell:
    """A lattice square in the subdivision: a tree node, a standard-subdivision
    box, or the conceptual leaf standing in for an extended root box."""

    __slots__ = ("i", "j", "s", "depth", "parent", "children", "on", "region",
                 "kind", "frame", "cls", "fst", "gst", "fax", "gax", "tag")

    def __init__(self, frame: Frame, i: int, j: int, s: int, parent=None,
                 kind: str = "main", region=None, depth: int = None):
        self.frame = frame
        self.i, self.j, self.s = i, j, s
        self.depth = frame.depth_of(s) if depth is None else depth
        self.parent = parent
        self.children: Optional[List["Cell"]] = None
        self.on = True
        self.region = region
        self.kind = kind
        self.cls = None
        self.fst = self.gst = None
        self.fax = self.gax = ""
        self.tag = None

    # box protocol used by the predicates
    def fbox(self):
        return self.frame.fbox(self.i, self.j, self.s)

    def exact_bounds(self):
        return self.frame.exact_bounds(self.i, self.j, self.s)

    def box2(self) -> Box2:
        return self.frame.box2(self.i, self.j, self.s)

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def conceptual(self) -> bool:
        return self.kind == "conceptual"

    @property
    def square(self):
        return self.i, self.j, self.s

    def contains_point(self, i: int, j: int) -> bool:
        return self.i <= i < self.i + self.s and self.j <= j < self.j + self.s

    def is_candidate(self) -> bool:
        return self.cls is not None and self.cls.value != "excluded"

    def __repr__(self):
        extra = "" if self.on else " off"
        return f"Cell({self.i}, {self.j}, {self.s}; d={self.depth}, {self.kind}{extra}, {self.cls and self.cls.value})"


def scaled_square(i: int, j: int, s: int, num: int, den: int = 1):
    """The lattice square with the same center and side ``s*num/den``."""
    side = s * num
    if side % den:
        raise ValueError("scaled side is off the lattice")
    side //= den
    twice_c_i = 2 * i + s
    twice_c_j = 2 * j + s
    if (twice_c_i - side) % 2 or (twice_c_j - side) % 2:
        raise ValueError("scaled corner is off the lattice")
    return (twice_c_i - side) // 2, (twice_c_j - side) // 2, side


def squares_overlap(a, b) -> bool:
    """Closed squares ``(i, j, s)`` intersect."""
    return (a[0] <= b[0] + b[2] and b[0] <= a[0] + a[2]
            and a[1] <= b[1] + b[2] and b[1] <= a[1] + a[2])


def squares_interiors_overlap(a, b) -> bool:
    return (a[0] < b[0] + b[2] and b[0] < a[0] + a[2]
            and a[1] < b[1] + b[2] and b[1] < a[1] + a[2])


def square_inside(inner, outer) -> bool:
    return (outer[0] <= inner[0] and inner[0] + inner[2] <= outer[0] + outer[2]
            and outer[1] <= inner[1] and inner[1] + inner[2] <= outer[1] + outer[2])


# -- standard subdivision ----------------------------------------------------------------

@dataclass
class StdSubdivision:
    """Nine boxes congruent to ``2B`` tiling ``6B`` and 28 boxes congruent to
    ``B`` tiling ``8B \\ 6B``; squares are ``(x, y, side)`` triples."""

    root: tuple
    inner: List[tuple]
    ring: List[tuple]

    @property
    def boxes(self) -> List[tuple]:
        return self.inner + self.ring


def std_squares(x, y, w) -> StdSubdivision:
    """Standard subdivision of ``8B`` for ``B = [x, x+w] x [y, y+w]``.

    Works for any numeric type with exact halving (lattice ints with even
    ``w``, Fractions, Dyadics).
    """
    half = w // 2 if isinstance(w, int) else w / 2
    ox = x - 3 * w - half
    oy = y - 3 * w - half
    inner = []
    for b in range(3):
        for a in range(3):
            inner.append((ox + w + 2 * w * a, oy + w + 2 * w * b, 2 * w))
    ring = []
    for b in range(8):
        for a in range(8):
            if 1 <= a <= 6 and 1 <= b <= 6:
                continue
            ring.append((ox + w * a, oy + w * b, w))
    return StdSubdivision(inner[4], inner, ring)


def std_subdivision(b: Box2) -> StdSubdivision:
    """Standard subdivision of ``8B`` as :class:`Box2` squares."""
    w = b.ix.width().to_fraction()
    if w != b.iy.width().to_fraction():
        raise ValueError("standard subdivision needs a square box")
    st = std_squares(b.ix.lo.to_fraction(), b.iy.lo.to_fraction(), w)

    def mk(t, depth, align):
        x, y, s = t
        return Box2(Interval(x, x + s), Interval(y, y + s), depth, align)

    d = b.depth
    inner_align = HALF_ALIGNED if b.alignment == ALIGNED else FREE
    return StdSubdivision(mk(st.root, d - 1, inner_align),
                          [mk(t, d - 1, inner_align) for t in st.inner],
                          [mk(t, d, inner_align) for t in st.ring])


# -- extended root regions ---------------------------------------------------------------

class Region:
    """An extended root box ``8B`` cut out of the main tree."""

    def __init__(self, tree: "SubdivTree", bsq, payload=None):
        self.tree = tree
        self.bsq = bsq
        self.payload = payload
        self.depth = tree.frame.depth_of(bsq[2])
        self.outer = scaled_square(*bsq, 8)
        self.six = scaled_square(*bsq, 6)
        self.two = scaled_square(*bsq, 2)
        self.conceptual: Optional[Cell] = None
        self.tops: Optional[Dict[Tuple[int, int], Cell]] = None
        self.root_cell: Optional[Cell] = None
        self.inherit = None  # statuses the standard boxes inherit from 8B

    @property
    def k(self) -> Optional[int]:
        if self.conceptual is None:
            return None
        return self.conceptual.depth - 1 - self.depth

    def top_at(self, i: int, j: int) -> Cell:
        w = self.bsq[2]
        a = (i - self.outer[0]) // w
        b = (j - self.outer[1]) // w
        if 1 <= a <= 6 and 1 <= b <= 6:
            return self.tops[("in", (a - 1) // 2, (b - 1) // 2)]
        return self.tops[("ring", a, b)]

    def cells(self) -> Iterator[Cell]:
        if self.tops is None:
            return
        stack = list(self.tops.values())
        while stack:
            c = stack.pop()
            yield c
            if c.children:
                stack.extend(c.children)

    def leaves(self) -> Iterator[Cell]:
        for c in self.cells():
            if c.children is None:
                yield c


# -- the tree ----------------------------------------------------------------------------

Classifier = Callable[[Cell, object], None]


class SubdivTree:
    """Quadtree over the region of interest plus standard subdivisions of the
    extended root boxes attached to its blacked-out leaves."""

    def __init__(self, frame: Frame, classifier: Optional[Classifier] = None,
                 max_depth: int = 40):
        self.frame = frame
        self.classifier = classifier
        self.max_depth = max_depth
        self.root = Cell(frame, 0, 0, frame.size)
        self.regions: List[Region] = []
        self.splits = 0
        if classifier is not None:
            classifier(self.root, None)

    # -- structure
    def expand(self, cell: Cell) -> List[Cell]:
        """Split an ON leaf into its four congruent children (SW, SE, NW, NE)."""
        if cell.conceptual:
            raise InternalError("a conceptual leaf is never split", cell.square)
        if cell.children is not None or not cell.on:
            raise InternalError("only ON leaves can be expanded", cell.square)
        if cell.s < 2:
            raise ResolutionLimit("lattice resolution exhausted", cell.square)
        h = cell.s >> 1
        i, j = cell.i, cell.j
        kids = [Cell(self.frame, i + dx, j + dy, h, cell, cell.kind, cell.region)
                for dx, dy in ((0, 0), (h, 0), (0, h), (h, h))]
        cell.children = kids
        self.splits += 1
        if self.classifier is not None:
            for k in kids:
                self.classifier(k, cell)
        return kids

    def _descend(self, cell: Cell, i: int, j: int) -> Cell:
        while True:
            kids = cell.children
            if kids is not None:
                h = cell.s >> 1
                cell = kids[(1 if i >= cell.i + h else 0) + (2 if j >= cell.j + h else 0)]
                continue
            if not cell.on and cell.kind == "main" and cell.region is not None:
                reg = cell.region
                if reg.tops is None:
                    return reg.conceptual if reg.conceptual is not None else cell
                cell = reg.top_at(i, j)
                continue
            return cell

    def locate(self, i: int, j: int) -> Optional[Cell]:
        """Leaf containing the lattice unit square at ``(i, j)``."""
        if not (0 <= i < self.frame.size and 0 <= j < self.frame.size):
            return None
        return self._descend(self.root, i, j)

    def locate_from(self, cell: Cell, i: int, j: int) -> Optional[Cell]:
        c = cell
        while c is not None and not c.contains_point(i, j):
            c = c.parent
        if c is None:
            return self.locate(i, j)
        return self._descend(c, i, j)

    def side_neighbors(self, cell: Cell, side: str) -> List[Cell]:
        out = []
        i, j, s = cell.i, cell.j, cell.s
        if side in ("E", "W"):
            x = i + s if side == "E" else i - 1
            t = j
            while t < j + s:
                n = self.locate_from(cell, x, t)
                if n is None:
                    break
                out.append(n)
                t = n.j + n.s
        else:
            y = j + s if side == "N" else j - 1
            t = i
            while t < i + s:
                n = self.locate_from(cell, t, y)
                if n is None:
                    break
                out.append(n)
                t = n.i + n.s
        return out

    def neighbors(self, cell: Cell) -> List[Cell]:
        """Leaves sharing a side portion with ``cell``."""
        out = []
        for side in SIDES:
            out.extend(self.side_neighbors(cell, side))
        return out

    def main_leaves(self, cell: Cell = None) -> Iterator[Cell]:
        stack = [cell or self.root]
        while stack:
            c = stack.pop()
            if c.children is None:
                yield c
            else:
                stack.extend(c.children)

    def leaves(self) -> Iterator[Cell]:
        """Leaves of the current subdivision: ON tree leaves and standard boxes."""
        for c in self.main_leaves():
            if c.on:
                yield c
        for reg in self.regions:
            yield from reg.leaves()

    # -- balancing
    def balance(self, queue: Iterable[Cell], splittable: Callable[[Cell], bool],
                relevant: Callable[[Cell, Cell], bool] = None,
                on_split: Callable[[Cell, List[Cell]], None] = None) -> int:
        """Standard balancing: deeper boxes first; a neighbor two or more
        levels shallower than the popped box is split when allowed.

        Returns the number of splits.
        """
        heap = []
        for c in queue:
            heapq.heappush(heap, (-c.depth, c.j, c.i, id(c), c))
        count = 0
        while heap:
            _, _, _, _, a = heapq.heappop(heap)
            if a.conceptual:
                self._refresh_conceptual(a)
            elif a.children is not None or not a.on:
                continue
            changed = True
            while changed:
                changed = False
                for n in self.neighbors(a):
                    if n.depth >= a.depth - 1 or n.conceptual:
                        continue
                    if relevant is not None and not relevant(a, n):
                        continue
                    if not splittable(n):
                        continue
                    if n.depth >= self.max_depth + 8:
                        raise ResolutionLimit("balancing exceeded the depth limit", n.square)
                    kids = self.expand(n)
                    count += 1
                    if on_split is not None:
                        on_split(n, kids)
                    for k in kids:
                        heapq.heappush(heap, (-k.depth, k.j, k.i, id(k), k))
                    changed = True
                    break
        return count

    # -- extended root boxes
    def add_region(self, bsq, payload=None) -> Region:
        reg = Region(self, bsq, payload)
        if not square_inside(reg.outer, (0, 0, self.frame.size)):
            raise InternalError("extended root box leaves the region of interest", bsq)
        for other in self.regions:
            if squares_overlap(other.outer, reg.outer):
                raise InternalError("extended root boxes overlap", bsq)
        self.regions.append(reg)
        return reg

    def prune_extended_root(self, reg: Region) -> List[Cell]:
        """Black out ``8B``: leaves inside turn OFF, leaves across its boundary
        are split until inside or outside.  Returns the new ON leaves."""
        outer = reg.outer
        new = []
        stack = [self.root]
        while stack:
            c = stack.pop()
            sq = c.square
            if not squares_interiors_overlap(sq, outer):
                continue
            if c.children is not None:
                stack.extend(c.children)
                continue
            if not c.on:
                if c.region is not reg:
                    raise InternalError("extended root boxes overlap", reg.bsq)
                continue
            if square_inside(sq, outer):
                c.on = False
                c.region = reg
                continue
            kids = self.expand(c)
            new.extend(kids)
            stack.extend(kids)
        return [c for c in new if c.children is None and c.on]

    def _conceptual_neighbors(self, reg: Region) -> List[Cell]:
        return [n for n in self.neighbors(reg.conceptual) if not n.conceptual]

    def _refresh_conceptual(self, con: Cell) -> None:
        reg = con.region
        nbrs = self._conceptual_neighbors(reg)
        deepest = max((n.depth for n in nbrs), default=con.depth - 1)
        if deepest + 1 > con.depth:
            con.depth = deepest + 1

    def external_conform(self, relevant: Callable[[Cell, Cell], bool] = None,
                         min_k: int = 1,
                         on_split: Callable[[Cell, List[Cell]], None] = None) -> Dict[Region, int]:
        """Balance the tree with each ``8B`` acting as an unsplittable leaf so
        that all boxes bordering it end up with one common width ``w(B)/2**k``.
        Returns ``k`` per region."""
        for reg in self.regions:
            if reg.conceptual is None:
                o = reg.outer
                reg.conceptual = Cell(self.frame, o[0], o[1], o[2], None, "conceptual", reg,
                                      depth=reg.depth + 1 + min_k)
                nb = self._conceptual_neighbors(reg)
                if nb:
                    reg.conceptual.depth = max(reg.conceptual.depth, max(n.depth for n in nb) + 1)

        def rel(a: Cell, n: Cell) -> bool:
            if a.conceptual:
                return True
            return relevant is None or relevant(a, n)

        def splittable(n: Cell) -> bool:
            return n.kind == "main" and n.on

        queue = [c for c in self.main_leaves() if c.on] + [r.conceptual for r in self.regions]
        for _ in range(64):
            self.balance(queue, splittable, rel, on_split)
            stale = [r.conceptual for r in self.regions
                     if any(n.depth != r.conceptual.depth - 1 for n in self._conceptual_neighbors(r))]
            if not stale:
                break
            queue = stale
        else:  # pragma: no cover
            raise InternalError("external conforming did not stabilise")
        return {r: r.k for r in self.regions}

    def attach_std(self, reg: Region) -> List[Cell]:
        """Replace the conceptual leaf of ``reg`` by its 37 standard boxes."""
        bi, bj, bs = reg.bsq
        st = std_squares(bi, bj, bs)
        tops = {}
        for n, (i, j, s) in enumerate(st.inner):
            tops[("in", n % 3, n // 3)] = Cell(self.frame, i, j, s, None, "std", reg)
        for (i, j, s) in st.ring:
            a = (i - reg.outer[0]) // bs
            b = (j - reg.outer[1]) // bs
            tops[("ring", a, b)] = Cell(self.frame, i, j, s, None, "std", reg)
        reg.tops = tops
        reg.root_cell = tops[("in", 1, 1)]
        if self.classifier is not None:
            for c in tops.values():
                self.classifier(c, reg.inherit)
        return list(tops.values())

    def internal_conform(self, reg: Region,
                         on_split: Callable[[Cell, List[Cell]], None] = None) -> int:
        """Balance the standard subdivision of ``reg`` against its exterior
        neighbors; only boxes inside ``8B`` are split.  Returns ``k``."""
        if reg.conceptual is None:
            raise InternalError("external conforming must precede internal conforming")
        exterior = self._conceptual_neighbors(reg)
        k = reg.k
        tops = self.attach_std(reg) if reg.tops is None else list(reg.leaves())

        def splittable(n: Cell) -> bool:
            return n.kind == "std" and n.region is reg

        self.balance(exterior + tops, splittable, None, on_split)
        if reg.root_cell.children is not None:
            raise InternalError("internal conforming split the root box", reg.bsq)
        return k

    def dump(self) -> List[dict]:
        """One record per leaf: lattice square, depth, class and ON flag."""
        out = []
        for c in self.main_leaves():
            out.append({"square": c.square, "depth": c.depth,
                        "class": c.cls.value if c.cls is not None else None, "on": c.on})
        for reg in self.regions:
            for c in reg.leaves():
                out.append({"square": c.square, "depth": c.depth,
                            "class": c.cls.value if c.cls is not None else None, "on": True})
        return out


def adjacent_pairs(tree: SubdivTree) -> Iterator[Tuple[Cell, Cell]]:
    """Each adjacent pair of current leaves once (E and N sides)."""
    for c in tree.leaves():
        for side in ("E", "N"):
            for n in tree.side_neighbors(c, side):
                if not n.conceptual:
                    yield c, n
