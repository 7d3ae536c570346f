"""Command line front end and the JSON / SVG emitters."""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .arrange import Arrangement, Pslg, build_arrangement
from .errors import ArrangementError, AspectRatioError, BoundaryRoot, ResolutionLimit
from .funcmodel import DomainError, ExprSyntaxError
from .numeric import Dyadic

FORMATS = ("json", "svg", "roots")


def dyadic_str(v) -> str:
    """Exact decimal expansion of a dyadic rational."""
    if isinstance(v, Dyadic):
        v = v.to_fraction()
    q = Fraction(v)
    d = q.denominator
    if d & (d - 1):
        raise ValueError(f"{q} is not dyadic")
    k = d.bit_length() - 1
    n = abs(q.numerator) * 5 ** k
    digits = str(n).rjust(k + 1, "0")
    head, tail = digits[: len(digits) - k], digits[len(digits) - k:]
    out = head + ("." + tail if k else "")
    return ("-" if q < 0 else "") + out


@dataclass
class RunConfig:
    f: str
    g: str
    roi: tuple
    eps: float = math.inf
    max_depth: int = 40
    formats: tuple = ("json",)
    boxes: bool = False
    escalate_depth: Optional[int] = 30
    prefix: str = "arrangement"


# -- documents ---------------------------------------------------------------------------

def to_document(arr: Arrangement, boxes: bool = False) -> dict:
    """The JSON wire document; keys and lists in a fixed order."""
    p = arr.pslg
    doc = {
        "vertices": [{"id": i, "x": dyadic_str(x), "y": dyadic_str(y), "kind": k}
                     for i, (x, y, k) in enumerate(p.vertices)],
        "edges": [{"u": u, "v": v, "label": lab} for u, v, lab, _ in p.edges],
        "roots": [{"rect": [dyadic_str(c) for c in r.report()["rect"]]} for r in arr.roots],
    }
    if boxes:
        doc["boxes"] = [{"rect": [dyadic_str(c) for c in b["rect"]], "depth": b["depth"],
                         "class": b["class"]} for b in arr.boxes()]
    return doc


def emit_json(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True) + "\n"


def roots_document(arr: Arrangement) -> dict:
    out = []
    for r in arr.roots:
        rep = r.report()
        out.append({"rect": [dyadic_str(c) for c in rep["rect"]], "certified": True,
                    "certificate": {"Y": [[repr(v) for v in row] for row in rep["certificate"]["Y"]],
                                    "face_signs": rep["certificate"]["face_signs"]}})
    return {"roots": out}


_FILL = {"excluded": "#f4f4f4", "f": "#dce8f7", "g": "#f7e3d4", "fg": "#e6d9f2",
         "unresolved": "#ffffff"}
_STROKE = {"S": "#1f5fbf", "T": "#c8501e"}


def emit_svg(doc: dict, roi, size: int = 800) -> str:
    """SVG picture of a JSON document: boxes (if present), edges, vertices."""
    x0, y0, x1, y1 = (float(Dyadic.coerce(v).to_fraction()) for v in roi)
    w, h = x1 - x0, y1 - y0
    scale = size / max(w, h)
    lw = 1.5 / scale

    def pt(x, y):
        return float(Fraction(x)), float(Fraction(y))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * scale:.0f}" height="{h * scale:.0f}" '
           f'viewBox="{x0!r} {-y1!r} {w!r} {h!r}">',
           f'<rect x="{x0!r}" y="{-y1!r}" width="{w!r}" height="{h!r}" fill="white" '
           f'stroke="black" stroke-width="{lw!r}"/>',
           '<g transform="scale(1,-1)">']
    for b in doc.get("boxes", ()):
        bx0, by0, bx1, by1 = (float(Fraction(v)) for v in b["rect"])
        out.append(f'<rect x="{bx0!r}" y="{by0!r}" width="{bx1 - bx0!r}" height="{by1 - by0!r}" '
                   f'fill="{_FILL[b["class"]]}" stroke="#bbbbbb" stroke-width="{lw / 3!r}"/>')
    verts = doc["vertices"]
    for e in doc["edges"]:
        a, b = verts[e["u"]], verts[e["v"]]
        (ax, ay), (bx, by) = pt(a["x"], a["y"]), pt(b["x"], b["y"])
        out.append(f'<line x1="{ax!r}" y1="{ay!r}" x2="{bx!r}" y2="{by!r}" '
                   f'stroke="{_STROKE[e["label"]]}" stroke-width="{lw!r}"/>')
    for v in verts:
        x, y = pt(v["x"], v["y"])
        if v["kind"] == "root-vertex":
            out.append(f'<circle cx="{x!r}" cy="{y!r}" r="{4 * lw!r}" fill="black"/>')
        else:
            out.append(f'<circle cx="{x!r}" cy="{y!r}" r="{lw!r}" fill="{_STROKE["S" if v["kind"] == "f-vertex" else "T"]}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- command line --------------------------------------------------------------------------

class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _roi(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("ROI needs four comma separated numbers x0,y0,x1,y1")
    try:
        return tuple(Dyadic.coerce(p) for p in parts)
    except (ValueError, ArithmeticError) as err:
        raise argparse.ArgumentTypeError(f"ROI corners must be dyadic decimals: {err}") from None


def _eps(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return v


def _formats(text: str):
    fs = tuple(p.strip() for p in text.split(",") if p.strip())
    bad = [f for f in fs if f not in FORMATS]
    if bad or not fs:
        raise argparse.ArgumentTypeError(f"output formats are {', '.join(FORMATS)}")
    return fs


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="curve-arrange",
                description="Certified piecewise-linear arrangement of two implicit curves.")
    p.add_argument("--f", required=True, help="first curve, f(x, y) = 0")
    p.add_argument("--g", required=True, help="second curve, g(x, y) = 0")
    p.add_argument("--roi", required=True, type=_roi, help="region x0,y0,x1,y1 (dyadic decimals)")
    p.add_argument("--eps", type=_eps, default=math.inf, help="Hausdorff tolerance or 'inf'")
    p.add_argument("--max-depth", type=int, default=40)
    p.add_argument("--out", type=_formats, default=("json",), help="comma list of json,svg,roots")
    p.add_argument("--boxes", action="store_true", help="include subdivision boxes")
    p.add_argument("--escalate-depth", type=int, default=30,
                   help="depth from which inconclusive box evaluations use extended precision")
    p.add_argument("-o", "--output", default="arrangement", help="output path prefix")
    p.add_argument("-v", "--verbose", action="store_true", help="log stage progress")
    return p


_VALUED = ("--f", "--g", "--roi", "--eps", "--max-depth", "--out", "--escalate-depth",
           "-o", "--output")


def _bind_values(argv: Sequence[str]) -> List[str]:
    """Attach the token after a valued flag to it, so values such as
    ``-2,-2,2,2`` or ``-x + y`` are not read as options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUED:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
                break
            out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def parse_config(argv: Sequence[str]) -> RunConfig:
    a = make_parser().parse_args(_bind_values(argv))
    if a.max_depth < 1:
        raise _UsageError("--max-depth must be positive")
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    return RunConfig(a.f, a.g, a.roi, a.eps, a.max_depth, a.out, a.boxes, a.escalate_depth, a.output)


def _diagnostic(err: ArrangementError) -> str:
    d = err.diagnostic()
    if err.box is not None:
        d["box"] = [dyadic_str(c) if isinstance(c, (Dyadic, Fraction, int)) else str(c)
                    for c in err.box]
    return json.dumps(d, sort_keys=True)


def run(cfg: RunConfig) -> List[str]:
    """Compute and write the requested artifacts; returns the written paths."""
    arr = build_arrangement(cfg.f, cfg.g, cfg.roi, cfg.eps, max_depth=cfg.max_depth,
                            escalate_depth=cfg.escalate_depth)
    doc = to_document(arr, cfg.boxes)
    written = []
    for fmt in cfg.formats:
        if fmt == "json":
            path, text = cfg.prefix + ".json", emit_json(doc)
        elif fmt == "svg":
            path, text = cfg.prefix + ".svg", emit_svg(doc, cfg.roi)
        else:
            path, text = cfg.prefix + ".roots.json", emit_json(roots_document(arr))
        d = os.path.dirname(path)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        written.append(path)
    return written


def run_cli(argv: Sequence[str] = None) -> int:
    """Exit status 0 on success, 1 on bad input, 2 when certification fails."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        paths = run(cfg)
    except _UsageError as err:
        print(f"curve-arrange: error: {err}", file=sys.stderr)
        return 1
    except (AspectRatioError, ExprSyntaxError, DomainError, ValueError) as err:
        print(f"curve-arrange: error: {err}", file=sys.stderr)
        return 1
    except (ResolutionLimit, BoundaryRoot) as err:
        print(_diagnostic(err), file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


def main() -> None:
    sys.exit(run_cli())


__all__ = ["FORMATS", "RunConfig", "dyadic_str", "emit_json", "emit_svg", "main", "make_parser",
           "parse_config", "roots_document", "run", "run_cli", "to_document", "Pslg"]
