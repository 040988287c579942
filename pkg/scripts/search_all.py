"""Run the v-search for a range of g and compare the best r with the tabulated one.

    python scripts/search_all.py --gmin 2 --gmax 26
"""

import argparse
import time

from k3lattice.borcherds import tabulated_vectors, quasi_pullback, search_v


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gmin", type=int, default=2)
    ap.add_argument("--gmax", type=int, default=22)
    ap.add_argument("--top", type=int, default=3, help="candidates shown per g")
    args = ap.parse_args()

    tabulated = tabulated_vectors()
    for g in range(args.gmin, args.gmax + 1):
        t0 = time.perf_counter()
        res = search_v(g)
        dt = time.perf_counter() - t0
        best = res.candidates[0]
        ref = ""
        if g in tabulated:
            rep = quasi_pullback(g, tabulated[g])
            ref = f"  tabulated r={rep.r} ({rep.root_type})"
            if best.r < rep.r:
                ref += "  <- smaller r exists"
        head = ", ".join(f"{c.r}:{c.root_type}" for c in res.candidates[: args.top])
        print(f"g={g:>2}  reps={res.representatives:>3}  classes={len(res.candidates):>3}  min r: {head}{ref}  [{dt:.1f}s]")


if __name__ == "__main__":
    main()
