"""Compiled interval kernel versus the pure-Python interpreter.

Part one times raw box evaluations of the partial derivatives used by the
predicates.  Part two times a whole arrangement with each backend (run in
a subprocess so the backend is chosen at import).

    python benchmarks/bench_kernel.py [--evals N] [--skip-e2e]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from curve_arrange.funcmodel import CurveSystem
from curve_arrange.funcmodel.program import Program, kernels

CASES = [
    ("y - x^2", "x^2 + y^2 - 1"),
    ("x^3 - 2*x*y + y^2/3 - 1/5", "y^3 + x^2*y - x/2"),
    ("sin(3*x) - y", "exp(x*y) - 3/2"),
]

E2E = ("y - x^2", "x^2 + y^2 - 1", "-2,-2,2,2", "0.05")


def boxes(n, seed=1):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
        w = 2.0 ** -rng.randint(1, 20)
        out.append((x, x + w, y, y + w))
    return out


def time_kernel(kernel, progs, bxs):
    ps = [Program(p.expr, kernel) for p in progs]
    t = time.perf_counter()
    for b in bxs:
        for p in ps:
            p._eval(p.code, p.consts, *b)
    return time.perf_counter() - t


def e2e(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["CURVE_ARRANGE_PURE"] = "1"
    code = ("import time, curve_arrange as c; t=time.perf_counter(); "
            f"c.build_arrangement({E2E[0]!r}, {E2E[1]!r}, tuple({E2E[2]!r}.split(',')), {E2E[3]}); "
            "print(time.perf_counter()-t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--evals", type=int, default=20000)
    ap.add_argument("--skip-e2e", action="store_true")
    a = ap.parse_args()
    ks = kernels()
    if len(ks) < 2:
        print("compiled kernel not built; only the Python interpreter is available")
    bxs = boxes(a.evals)
    print(f"{'case':<40} " + " ".join(f"{k.BACKEND:>10}" for k in ks) + "   speedup")
    for f, g in CASES:
        s = CurveSystem(f, g)
        progs = list(s.programs.values())
        ts = [time_kernel(k, progs, bxs) for k in ks]
        sp = ts[-1] / ts[0] if len(ts) > 1 else 1.0
        print(f"{f + ' ; ' + g:<40.40} " + " ".join(f"{t:10.3f}" for t in ts) + f"   {sp:6.1f}x")
    if not a.skip_e2e:
        fast, slow = e2e(False), e2e(True)
        print(f"end to end (circle/parabola, eps 0.05): default {fast:.2f}s, pure {slow:.2f}s, "
              f"{slow / fast:.1f}x")


if __name__ == "__main__":
    main()
