"""Print the n(g) table for g = 2..22 and time it.

    python scripts/reproduce_table.py [--threads 4] [--markdown]
"""

import argparse
import time

from k3lattice.borcherds import paper_table
from k3lattice.cli import _markdown_table
from k3lattice.selftest import GOLDEN_N


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--markdown", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = paper_table(threads=args.threads)
    dt = time.perf_counter() - t0

    if args.markdown:
        print(_markdown_table(reports))
    else:
        print(f"{'g':>3} {'r':>4} {'k':>4} {'n':>4}  {'type':<10} {'|A|':>4}  check")
        for r in reports:
            ok = "ok" if r.crosscheck.passed and r.n == GOLDEN_N[r.g] else "MISMATCH"
            print(f"{r.g:>3} {r.r:>4} {r.k:>4} {r.n:>4}  {str(r.root_type):<10} {r.disc_order:>4}  {ok}")
    bad = [r.g for r in reports if r.n != GOLDEN_N[r.g]]
    print(f"\n{21 - len(bad)}/21 rows match, {dt:.2f} s")


if __name__ == "__main__":
    main()
