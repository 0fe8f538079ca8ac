#!/usr/bin/env python3
"""Run the benchmark audits over their standard parameter grids.

Usage: python scripts/run_audits.py [c1|c2|all]
Prints one line per configuration: verdict, key facts and the smallest margin.
"""

import sys
import time
from fractions import Fraction

from kgsing import bench

C1_CASES = [(2, 1, None), (3, 1, None), (3, 2, None), (4, 1, None),
            (4, 1, (Fraction(1, 4), Fraction(2, 3)))]


def _line(res, elapsed):
    smallest = min((v for _, v in res.margins), default=None)
    margin = "n/a" if smallest is None else f"{smallest:.3g}"
    facts = ", ".join(f"{k}={v}" for k, v in res.facts.items())
    return (f"{res.name} {res.params}: verdict={res.verdict} ok={res.ok} "
            f"min_margin={margin} ({elapsed:.2f}s)\n    {facts}")


def run_c2():
    for M in (2, 3, 4):
        for ell in range(1, M + 1):
            for k in (1, 2):
                t0 = time.perf_counter()
                res = bench.audit_c2(M, k, ell)
                print(_line(res, time.perf_counter() - t0))


def run_c1():
    for M, k, y in C1_CASES:
        t0 = time.perf_counter()
        res = bench.audit_c1(M, k, y)
        print(_line(res, time.perf_counter() - t0))


def main():
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which not in ("c1", "c2", "all"):
        print(__doc__, file=sys.stderr)
        return 1
    if which in ("c2", "all"):
        run_c2()
    if which in ("c1", "all"):
        run_c1()
    return 0


if __name__ == "__main__":
    sys.exit(main())
