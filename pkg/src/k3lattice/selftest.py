"""Randomised enumeration-vs-oracle agreement plus the golden table rows."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import BudgetExceeded, IndefiniteLatticeError
from .lattice import Lattice, discriminant, inner
from .shortvec import brute_force_oracle, count_of_norm, definite_sign

GOLDEN_N = {
    2: 56, 3: 35, 4: 30, 5: 21, 6: 23, 7: 16, 8: 15, 9: 14, 10: 14, 11: 9, 12: 14,
    13: 9, 14: 9, 15: 8, 16: 7, 17: 6, 18: 8, 19: 5, 20: 6, 21: 5, 22: 6,
}
GOLDEN_R = {g: 2 * (n + 7) for g, n in GOLDEN_N.items()}


def random_negative_definite(rng: random.Random, rank: int, bound: int = 6, tries: int = 10_000) -> Lattice:
    """Rejection-sample a negative definite Gram with entries in [-bound, bound]."""
    for _ in range(tries):
        g = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            g[i][i] = -rng.randint(1, bound)
            for j in range(i):
                g[i][j] = g[j][i] = rng.randint(-bound, bound) // rng.choice((1, 2, 3))
        L = Lattice(tuple(map(tuple, g)))
        try:
            if L.det != 0 and definite_sign(L.gram) == -1:
                return L
        except IndefiniteLatticeError:
            continue
    raise RuntimeError("could not sample a definite lattice")


def random_dual_shift(rng: random.Random, L: Lattice) -> Optional[Tuple[Fraction, ...]]:
    D = discriminant(L)
    if D.order == 1:
        return None
    a = tuple(rng.randrange(d) for d in D.invariant_factors)
    lam = D.lift(a)
    return tuple(x + rng.randint(-2, 2) for x in lam)


def oracle_cases(seed: int = 0, cases: int = 200, max_rank: int = 5):
    """Yield (lattice, norm, shift, fast_count, oracle_count) for ``cases`` distinct lattices.

    Each lattice contributes its trivial-coset shells at norms -2, -4, -6
    and, when the discriminant group is nontrivial, one random coset at
    the three largest norms below zero that the coset can attain.
    """
    rng = random.Random(seed)
    done = 0
    seen = set()
    while done < cases:
        L = random_negative_definite(rng, rng.randint(1, max_rank))
        if L.gram in seen:
            continue
        seen.add(L.gram)
        batch = []
        try:
            for n in (-2, -4, -6):
                batch.append((L, n, None, count_of_norm(L, n), brute_force_oracle(L, n)))
            shift = random_dual_shift(rng, L)
            if shift is not None:
                frac = inner(L, shift, shift) % 1  # coset norms are congruent to this mod 1
                for m in (1, 2, 3):
                    n = frac - m
                    batch.append((L, n, shift, count_of_norm(L, n, shift), brute_force_oracle(L, n, shift)))
        except BudgetExceeded:
            continue  # oracle box too large for this Gram; draw another
        done += 1
        yield from batch


def run_selftest(seed: int = 0, cases: int = 200) -> dict:
    from .borcherds import paper_table

    agree = disagree = 0
    failures: List[str] = []
    for L, n, shift, fast, slow in oracle_cases(seed, cases):
        if fast == slow:
            agree += 1
        else:
            disagree += 1
            failures.append(f"gram={L.gram} n={n} shift={shift}: {fast} != {slow}")
    golden_ok = golden_bad = 0
    for rep in paper_table():
        ok = rep.n == GOLDEN_N[rep.g] and rep.r == GOLDEN_R[rep.g] and rep.crosscheck.passed
        golden_ok += ok
        golden_bad += not ok
        if not ok:
            failures.append(f"g={rep.g}: r={rep.r} n={rep.n}")
    return {
        "oracle_lattices": cases,
        "oracle_shells_agree": agree,
        "oracle_shells_disagree": disagree,
        "golden_rows_pass": golden_ok,
        "golden_rows_fail": golden_bad,
        "passed": agree + golden_ok,
        "failed": disagree + golden_bad,
        "failures": failures,
    }
