"""List, for each g, the divisibilities of (-2)-vectors in Lambda_g with an explicit witness."""

import argparse

from k3lattice.borcherds import divisibility, divisibility_two_witness, eichler_minus2_orbits, polarized_k3_lattice
from k3lattice.lattice import inner


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gmax", type=int, default=62)
    args = ap.parse_args()
    for g in range(2, args.gmax + 1):
        oc = eichler_minus2_orbits(g)
        w = divisibility_two_witness(g)
        line = f"g={g:>2}  divisibilities={list(oc.divisibilities)}"
        if w is not None:
            L = polarized_k3_lattice(g)
            nz = {i: c for i, c in enumerate(w) if c}
            line += f"  witness coords {nz}: norm {inner(L, w, w)}, div {divisibility(L, w)}"
        print(line)


if __name__ == "__main__":
    main()
