"""Root isolation: resolution subdivision, Jacobian and MK stages, root
refinement and strong isolation of the common roots of ``f`` and ``g``."""

from __future__ import annotations

import heapq
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import List, Optional

from . import predicates as P
from .errors import BoundaryRoot, ResolutionLimit
from .funcmodel.system import CurveSystem
from .numeric import Box2
from .predicates import BoxClass, MKCertificate
from .subdiv import (Cell, Frame, SubdivTree, scaled_square, square_inside,
                     squares_overlap)

log = logging.getLogger(__name__)


@dataclass
class QueueSet:
    q0: List[Cell] = field(default_factory=list)
    qf: List[Cell] = field(default_factory=list)
    qg: List[Cell] = field(default_factory=list)
    qfg: List[Cell] = field(default_factory=list)
    qjc: List[Cell] = field(default_factory=list)
    qmk: List[tuple] = field(default_factory=list)
    qroot: List["RootRecord"] = field(default_factory=list)

    def put(self, cell: Cell) -> None:
        """File a resolved leaf under its class."""
        {BoxClass.EXCLUDED: self.q0, BoxClass.F_CANDIDATE: self.qf,
         BoxClass.G_CANDIDATE: self.qg, BoxClass.FG_CANDIDATE: self.qfg}[cell.cls].append(cell)

    def sizes(self) -> dict:
        return {k: len(getattr(self, k)) for k in ("q0", "qf", "qg", "qfg", "qjc", "qmk", "qroot")}


@dataclass
class RootRecord:
    """A strongly isolated root: aligned ``B`` with root box ``2B``."""

    bsq: tuple
    cert: MKCertificate
    frame: Frame
    fax: str = ""
    gax: str = ""
    region: object = None

    @property
    def two(self):
        return scaled_square(*self.bsq, 2)

    @property
    def six(self):
        return scaled_square(*self.bsq, 6)

    @property
    def eight(self):
        return scaled_square(*self.bsq, 8)

    def box(self, which: str = "B") -> Box2:
        sq = {"B": self.bsq, "2B": self.two, "6B": self.six, "8B": self.eight}[which]
        return self.frame.box2(*sq)

    def report(self) -> dict:
        b = self.box("2B")
        return {"rect": [b.ix.lo, b.iy.lo, b.ix.hi, b.iy.hi], "certified": True,
                "certificate": {"Y": [[self.cert.a, -self.cert.b], [self.cert.c, self.cert.d]],
                                "face_signs": {f"{a}{s}": v for (a, s), v in
                                               sorted(self.cert.face_signs.items())}}}


class Isolator:
    """Runs Stages I-IV on a fresh subdivision tree of the region of interest."""

    def __init__(self, system: CurveSystem, frame: Frame, eps: float = math.inf,
                 max_depth: int = 40):
        self.system = system
        self.frame = frame
        self.eps = eps
        self.max_depth = max_depth
        self.tree = SubdivTree(frame, self.classify_cell, max_depth)
        self.queues = QueueSet()

    # -- classification with inheritance from the parent box
    def _status(self, cell, h: str, parent):
        pst = getattr(parent, h + "st", None) if parent is not None else None
        if pst == P.H_EXCLUDED:
            return P.H_EXCLUDED, ""
        if pst == P.H_INCLUDED:
            if P.c0(self.system, h, cell):
                return P.H_EXCLUDED, ""
            return P.H_INCLUDED, getattr(parent, h + "ax")
        st = P.curve_status(self.system, h, cell)
        ax = P.monotone_axes(self.system, h, cell) if st == P.H_INCLUDED else ""
        return st, ax

    def classify_cell(self, cell: Cell, parent=None) -> None:
        cell.fst, cell.fax = self._status(cell, "f", parent)
        cell.gst, cell.gax = self._status(cell, "g", parent)
        cell.cls = P.class_from_status(cell.fst, cell.gst)

    def _too_big(self, s: int) -> bool:
        return self.eps != math.inf and self.frame.diameter(s) > self.eps / 2

    def _guard(self, cell: Cell, what: str) -> None:
        if cell.depth >= self.max_depth:
            raise ResolutionLimit(f"{what}: depth limit {self.max_depth} reached",
                                  self._rect(cell.square))

    def _rect(self, sq):
        b = self.frame.box2(*sq)
        return (b.ix.lo, b.iy.lo, b.ix.hi, b.iy.hi)

    # -- Stage I
    def stage1_resolve(self) -> QueueSet:
        """Expand until every leaf is resolved; candidates also until their
        diameter is at most ``eps/2``."""
        work = deque([self.tree.root])
        while work:
            c = work.popleft()
            if c.cls is BoxClass.UNRESOLVED or (c.cls is not BoxClass.EXCLUDED and self._too_big(c.s)):
                if c.cls is BoxClass.UNRESOLVED:
                    self._guard(c, "unresolved box")
                elif c.depth >= self.max_depth:
                    raise ResolutionLimit("eps refinement reached the depth limit", self._rect(c.square))
                work.extend(self.tree.expand(c))
            else:
                self.queues.put(c)
        return self.queues

    # -- Stage II
    def stage2_jacobian(self) -> None:
        q = self.queues
        work = deque(q.qfg)
        q.qfg = []
        while work:
            c = work.popleft()
            if P.jc(self.system, self.probe_sq(scaled_square(*c.square, 6))):
                q.qjc.append(c)
                continue
            self._guard(c, "Jacobian condition never holds")
            for k in self.tree.expand(c):
                if k.cls is BoxClass.FG_CANDIDATE:
                    work.append(k)
                else:
                    q.put(k)

    def probe_sq(self, sq) -> Cell:
        """A detached cell for evaluating predicates on an arbitrary square."""
        return Cell(self.frame, *sq)

    def mk(self, sq) -> Optional[MKCertificate]:
        return P.mk_test(self.system, self.probe_sq(sq))

    # -- Stage III
    def stage3_mk(self) -> None:
        q = self.queues
        found = []
        for a in sorted(q.qjc, key=lambda c: (-c.s, c.j, c.i)):
            tmp = deque([a])
            hit = None
            while tmp:
                b = tmp.popleft()
                cert = self.mk(scaled_square(*b.square, 2))
                if cert is not None:
                    hit = (b, cert)
                    break
                self._guard(b, "MK test never succeeds")
                for k in self.tree.expand(b):
                    if k.cls is BoxClass.FG_CANDIDATE:
                        tmp.append(k)
                    else:
                        q.put(k)
            if hit is None:
                continue
            q.qfg.extend(tmp)
            found.append(hit)
        q.qjc = []
        kept: List[tuple] = []
        for b, cert in found:
            two = scaled_square(*b.square, 2)
            clash = [i for i, (k, _) in enumerate(kept)
                     if squares_overlap(two, scaled_square(*k.square, 2))]
            if not clash:
                kept.append((b, cert))
                continue
            # overlapping root boxes hold the same root; keep the larger one
            i = clash[0]
            if b.s > kept[i][0].s:
                q.qfg.append(kept[i][0])
                kept[i] = (b, cert)
            else:
                q.qfg.append(b)
        q.qmk = [(b.square, cert) for b, cert in kept]

    # -- RefineRoot
    def refine_root(self, bsq) -> Optional[tuple]:
        """An aligned half-width box ``B*`` whose doubled box certifies the
        root of ``2B``; ``None`` when no aligned box inside the region does
        (the root lies outside it)."""
        i, j, s = bsq
        h = s // 2
        size = self.frame.size
        start = []
        for b in range(4):
            for a in range(4):
                sq = (i - h + a * h, j - h + b * h, h)
                if square_inside(sq, (0, 0, size)):
                    start.append(sq)
        tmp = deque(sq for sq in start if self._may_hold_root(sq))
        while tmp:
            sq = tmp.popleft()
            cert = self.mk(scaled_square(*sq, 2))
            if cert is not None:
                return sq, cert
            if self.frame.depth_of(sq[2]) >= self.max_depth:
                err = BoundaryRoot if not square_inside(scaled_square(*sq, 8), (0, 0, size)) \
                    else ResolutionLimit
                raise err("root refinement reached the depth limit", self._rect(sq))
            ci, cj, cs = sq
            hh = cs // 2
            for dx, dy in ((0, 0), (hh, 0), (0, hh), (hh, hh)):
                kid = (ci + dx, cj + dy, hh)
                if self._may_hold_root(kid):
                    tmp.append(kid)
        return None

    def _may_hold_root(self, sq) -> bool:
        c = self.probe_sq(sq)
        return not (P.c0(self.system, "f", c) or P.c0(self.system, "g", c))

    # -- Stage IV
    def _locally_isolated(self, bsq):
        """``(ok, fax, gax)`` for the conditions on ``6B`` and ``8B``."""
        eight = scaled_square(*bsq, 8)
        if not square_inside(eight, (0, 0, self.frame.size)):
            return False, "", ""
        if self._too_big(2 * bsq[2]):
            return False, "", ""
        e8 = self.probe_sq(eight)
        if not (P.c1(self.system, "f", e8) and P.c1(self.system, "g", e8)):
            return False, "", ""
        if not P.jc(self.system, self.probe_sq(scaled_square(*bsq, 6))):
            return False, "", ""
        return True, P.monotone_axes(self.system, "f", e8), P.monotone_axes(self.system, "g", e8)

    def stage4_strong_isolation(self) -> List[RootRecord]:
        q = self.queues
        pending = []
        for sq, cert in q.qmk:
            heapq.heappush(pending, (-sq[2], sq[1], sq[0], sq, cert))
        accepted: List[RootRecord] = []
        refinements = 0
        while pending:
            _, _, _, sq, cert = heapq.heappop(pending)
            eight = scaled_square(*sq, 8)
            others = [p[3] for p in pending] + [r.bsq for r in accepted]
            conflict = any(squares_overlap(eight, scaled_square(*o, 8)) for o in others)
            ok, fax, gax = (False, "", "") if conflict else self._locally_isolated(sq)
            if ok:
                accepted.append(RootRecord(sq, cert, self.frame, fax, gax))
                continue
            if self.frame.depth_of(sq[2]) >= self.max_depth:
                err = BoundaryRoot if not square_inside(eight, (0, 0, self.frame.size)) \
                    else ResolutionLimit
                raise err("strong isolation reached the depth limit", self._rect(sq))
            refinements += 1
            nxt = self.refine_root(sq)
            if nxt is None:
                log.debug("root near %s lies outside the region; dropped", sq)
                continue
            nsq, ncert = nxt
            heapq.heappush(pending, (-nsq[2], nsq[1], nsq[0], nsq, ncert))
        accepted.sort(key=lambda r: (r.bsq[1], r.bsq[0]))
        q.qmk = []
        q.qroot = accepted
        self.refinements = refinements
        return accepted

    def run(self) -> List[RootRecord]:
        self.stage1_resolve()
        log.info("stage I: %s", self.queues.sizes())
        self.stage2_jacobian()
        log.info("stage II: %s", self.queues.sizes())
        self.stage3_mk()
        log.info("stage III: %s", self.queues.sizes())
        roots = self.stage4_strong_isolation()
        log.info("stage IV: %d root(s)", len(roots))
        return roots

    def inherit_for(self, rec: RootRecord):
        """Statuses the standard boxes of ``8B`` inherit (C1 holds on ``8B``)."""
        return SimpleNamespace(fst=P.H_INCLUDED, gst=P.H_INCLUDED, fax=rec.fax, gax=rec.gax)
