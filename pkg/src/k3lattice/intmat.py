"""Exact integer matrix routines: Hermite and Smith normal forms, kernels.

Matrices are plain lists of lists of Python ints (row-major). Nothing here
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def hnf_rows(m: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, t)`` with ``h == t @ m``, ``t`` unimodular, ``h`` in row
    echelon form with positive pivots and the entries above each pivot
    reduced into ``[0, pivot)``. Zero rows sit at the bottom.
    """
    h = [list(map(int, row)) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    t = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # gcd-eliminate column c below row r
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(h[i][c]), i))
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                t[r], t[piv] = t[piv], t[r]
            done = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    t[i] = [x - q * y for x, y in zip(t[i], t[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            t[r] = [-x for x in t[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                t[i] = [x - q * y for x, y in zip(t[i], t[r])]
        r += 1
    return h, t


def hnf_columns(a: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """Column-style HNF: ``(h, u)`` with ``h == a @ u`` and ``u`` unimodular."""
    ht, ut = hnf_rows(transpose(a))
    return transpose(ht), transpose(ut)


def rank(a: Sequence[Sequence[int]]) -> int:
    h, _ = hnf_rows(a)
    return sum(1 for row in h if any(row))


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of ``{x in Z^n : a x = 0}`` as rows, in row HNF.

    The kernel of an integer map is saturated, so the returned rows span a
    primitive sublattice of ``Z^n``.
    """
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return identity(n)
    h, t = hnf_rows(transpose(a))
    basis = [t[i] for i in range(len(h)) if not any(h[i])]
    if not basis:
        return []
    hb, _ = hnf_rows(basis)
    return [row for row in hb if any(row)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(d, u, v)`` with ``d == u @ a @ v``, ``u`` and ``v`` unimodular,
    ``d`` diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    d = [list(map(int, row)) for row in a]
    m = len(d)
    n = len(d[0]) if m else 0
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for k in range(min(m, n)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(k, m) for j in range(k, n) if d[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            clean = True
            for i in range(k + 1, m):
                if d[i][k]:
                    add_row(i, k, d[i][k] // d[k][k])
                    clean = clean and d[i][k] == 0
            for j in range(k + 1, n):
                if d[k][j]:
                    add_col(j, k, d[k][j] // d[k][k])
                    clean = clean and d[k][j] == 0
            if not clean:
                continue
            # divisibility: pull in any entry the pivot does not divide
            bad = next(
                ((i, j) for i in range(k + 1, m) for j in range(k + 1, n) if d[i][j] % d[k][k]),
                None,
            )
            if bad is None:
                break
            i, _ = bad
            d[k] = [x + y for x, y in zip(d[k], d[i])]
            u[k] = [x + y for x, y in zip(u[k], u[i])]
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return d, u, v


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises ``ZeroDivisionError`` if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]
