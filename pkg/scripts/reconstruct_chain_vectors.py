"""Recover v_g from a set of 7 simple roots of E8: v spans the orthogonal line.

Used to produce the chart vectors for the g where only the generating
simple roots are listed. Prints the raw generator and the W(D8)-normal
form (sorted absolute values, one sign fixed to keep the sum even).
"""

from fractions import Fraction

from k3lattice.borcherds import e8, tabulated_vector_sources, quasi_pullback
from k3lattice.lattice import orthogonal_complement


def normal_form(x):
    a = sorted((abs(c) for c in x), reverse=True)
    if sum(a) % 2:
        a[-1] = -a[-1]
    return tuple(a)


def main():
    E = e8()
    for g, src in sorted(tabulated_vector_sources().items()):
        if "K_generated_by" not in src:
            continue
        simple = [[int(j == i - 1) for j in range(8)] for i in src["K_generated_by"]]
        line = orthogonal_complement(E, simple)
        w = E.basis_to_chart(line.basis[0])
        nf = normal_form(w)
        rep = quasi_pullback(g, nf)
        fmt = lambda v: "(" + ", ".join(str(Fraction(c)) for c in v) + ")"
        print(f"g={g:>2}  roots {src['K_generated_by']}  norm {line.gram[0][0]}  v={fmt(w)}  nf={fmt(nf)}  r={rep.r} {rep.root_type}")


if __name__ == "__main__":
    main()
