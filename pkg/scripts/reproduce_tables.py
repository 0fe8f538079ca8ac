#!/usr/bin/env python3
"""Recompute the classification tables and print one line per check.

Usage: python scripts/reproduce_tables.py [--seed N] [--max-degree M]
Exit status is 0 when every check passes, 1 otherwise.
"""

import argparse
import sys
import time

from kgsing.verify import verify_all


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[1])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-degree", type=int, default=8)
    args = ap.parse_args()
    t0 = time.perf_counter()
    checks = verify_all(args.seed, args.max_degree)
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name}: {c.detail}")
    bad = sum(not c.ok for c in checks)
    print(f"{len(checks) - bad}/{len(checks)} checks passed in {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
