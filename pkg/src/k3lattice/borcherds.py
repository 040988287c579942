"""Quasi-pullback bookkeeping for polarized K3 lattices.

For a primitive v in E8 of norm 2 - 2g the complement K = v^perp in E8 is
negative definite of rank 7. Its root count r fixes the weight 12 + r/2 of
the quasi-pullback of Phi_12 and n(g) = r/2 - 7. This module builds the
lattices involved, evaluates those quantities for the tabulated choices of
v, tallies the Heegner multiplicities c_lambda, counts (-2)-vector orbits
by divisibility, and searches E8 for alternative choices of v.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from . import intmat
from .errors import BudgetExceeded, ConsistencyError, InvalidVectorError, LatticeError
from .lattice import (
    EmbeddedSublattice,
    Lattice,
    chart_dot,
    direct_sum,
    discriminant,
    inner,
    is_primitive,
    make_named,
    orthogonal_complement,
)
from .qseries import delta_series, divide, theta_series
from .rootsys import RootSystemType, classify
from .shortvec import DEFAULT_BUDGET, count_of_norm, vectors_of_norm

WEIGHT_OFFSET = 12  # weight of Phi_12
CANONICAL_OFFSET = 19  # n = k - 19 on the 19-dimensional moduli space


@lru_cache(maxsize=None)
def e8() -> Lattice:
    return make_named("E8")


@lru_cache(maxsize=None)
def _fixture() -> dict:
    text = resources.files("k3lattice").joinpath("data/tabulated_vectors.json").read_text()
    return json.loads(text)


def tabulated_vectors() -> Dict[int, Tuple[Fraction, ...]]:
    """The tabulated choice of v_g for g = 2..22, in chart coordinates."""
    return {e["g"]: tuple(Fraction(c) for c in e["v"]) for e in _fixture()["vectors"]}


def tabulated_vector_sources() -> Dict[int, dict]:
    return {e["g"]: e for e in _fixture()["vectors"]}


def dim_vg() -> Dict[int, int]:
    return {int(k): v for k, v in _fixture()["dim_Vg"].items()}


def polarized_k3_lattice(g: int) -> Lattice:
    """U + U + E8 + E8 + <2 - 2g>."""
    if g < 2:
        raise LatticeError("genus must be at least 2")
    U, E = make_named("U"), e8()
    return direct_sum([U, U, E, E, make_named("rank1", 2 - 2 * g)])


def k3_lattice() -> Lattice:
    U, E = make_named("U"), e8()
    return direct_sum([U, U, U, E, E])


def borcherds_lattice() -> Lattice:
    """II_{2,26} = 2U + 3E8."""
    U, E = make_named("U"), e8()
    return direct_sum([U, U, E, E, E])


def parse_chart_vector(items: Sequence) -> Tuple[Fraction, ...]:
    try:
        x = tuple(Fraction(str(c)) for c in items)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidVectorError(f"cannot parse vector entries: {exc}") from None
    if len(x) != 8:
        raise InvalidVectorError(f"E8 chart vectors have 8 entries, got {len(x)}")
    return x


def validate_chart_vector(x: Sequence, g: int) -> Tuple[int, ...]:
    """Check that ``x`` is a primitive E8 vector of norm 2 - 2g; return basis coordinates."""
    x = parse_chart_vector(x)
    if g < 2:
        raise InvalidVectorError("genus must be at least 2")
    if not any(x):
        raise InvalidVectorError("v is the zero vector")
    dens = {c.denominator for c in x}
    if not (dens == {1} or dens == {2}):
        raise InvalidVectorError("not in E8: entries must be all integers or all half-integers")
    if sum(x) % 2 != 0:
        raise InvalidVectorError(f"not in E8: coordinate sum {sum(x)} is not even")
    sq = sum(c * c for c in x)
    if sq != 2 * g - 2:
        raise InvalidVectorError(f"wrong norm: sum of squares is {sq}, expected 2g-2 = {2 * g - 2}")
    v = e8().chart_to_basis(x)
    if not is_primitive(e8(), v):
        raise InvalidVectorError(f"not primitive: v is {math.gcd(*v)} times a lattice vector")
    return v


@dataclass(frozen=True)
class CrossCheck:
    """Constant term of Theta_{K(-1)} / Delta against 2k = 24 + r."""

    theta_over_delta_q0: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.theta_over_delta_q0 == self.expected


@dataclass(frozen=True)
class QuasiPullbackReport:
    g: int
    v_chart: Tuple[Fraction, ...]
    v_basis: Tuple[int, ...]
    K: EmbeddedSublattice
    r: int
    k: int
    n: int
    root_type: RootSystemType
    is_cusp: bool
    disc_order: int
    crosscheck: CrossCheck
    dim_Vg: Optional[int] = None

    @property
    def weight_crosscheck_passed(self) -> bool:
        return self.crosscheck.passed

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "v_chart": [_q(c) for c in self.v_chart],
            "v_basis": list(self.v_basis),
            "gram_K": [list(row) for row in self.K.gram],
            "r": self.r,
            "k": self.k,
            "n": self.n,
            "root_type": str(self.root_type),
            "is_cusp": self.is_cusp,
            "disc_order": self.disc_order,
            "crosscheck": {
                "theta_over_delta_q0": self.crosscheck.theta_over_delta_q0,
                "two_k": self.crosscheck.expected,
                "passed": self.crosscheck.passed,
            },
        }


def _q(c: Fraction):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else str(c)


def complement_of(v_basis: Sequence[int]) -> EmbeddedSublattice:
    return orthogonal_complement(e8(), [list(v_basis)])


def weight_crosscheck(K: Lattice, r: int, precision: int = 2) -> CrossCheck:
    """q^0 coefficient of Theta_{K(-1)}/Delta; it equals 24 + (#roots of K)."""
    quotient = divide(theta_series(K, precision), delta_series(precision), precision)
    return CrossCheck(int(quotient[0]), 24 + r)


def quasi_pullback(g: int, v, crosscheck_precision: int = 2, budget: int = DEFAULT_BUDGET) -> QuasiPullbackReport:
    v_basis = validate_chart_vector(v, g)
    x = parse_chart_vector(v)
    K = complement_of(v_basis)
    shell = vectors_of_norm(K.lattice, -2, budget=budget)
    r = shell.count
    if count_of_norm(K.lattice, -2, budget=budget) != r:
        raise ConsistencyError("counting and listing paths disagree on the root count")
    if r % 2:
        raise ConsistencyError(f"odd root count {r}")
    root_type = classify(shell)
    if root_type.total_roots != r:
        raise ConsistencyError(f"type {root_type} predicts {root_type.total_roots} roots, found {r}")
    disc_order = abs(K.lattice.det)
    if discriminant(K.lattice).order != disc_order or disc_order != 2 * g - 2:
        raise ConsistencyError(f"|K^v/K| = {disc_order}, expected {2 * g - 2}")
    k = WEIGHT_OFFSET + r // 2
    return QuasiPullbackReport(
        g=g,
        v_chart=x,
        v_basis=v_basis,
        K=K,
        r=r,
        k=k,
        n=k - CANONICAL_OFFSET,
        root_type=root_type,
        is_cusp=r > 0,
        disc_order=disc_order,
        crosscheck=weight_crosscheck(K.lattice, r, crosscheck_precision),
        dim_Vg=dim_vg().get(g),
    )


def paper_table(threads: int = 1, budget: int = DEFAULT_BUDGET) -> List[QuasiPullbackReport]:
    vecs = tabulated_vectors()
    gs = sorted(vecs)
    if threads <= 1:
        return [quasi_pullback(g, vecs[g], budget=budget) for g in gs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda g: quasi_pullback(g, vecs[g], budget=budget), gs))


def roots_in_chart(report: QuasiPullbackReport) -> List[Tuple[Fraction, ...]]:
    """Roots of K as chart vectors of E8, sorted."""
    shell = vectors_of_norm(report.K.lattice, -2)
    return sorted(e8().basis_to_chart(report.K.to_ambient(r)) for r in shell.vectors)


# Heegner ledger ------------------------------------------------------------


@dataclass(frozen=True)
class LedgerEntry:
    lam: Tuple[int, ...]
    q_lambda: Fraction
    x: Fraction
    multiplicity: int


@dataclass(frozen=True)
class HeegnerLedger:
    """Multiplicities c_lambda(-1 - x) over nonzero lambda in A/+-1, -1 < x < 0.

    ``side`` selects the quadratic form on A: ``"K"`` uses q of K^v/K
    directly; ``"Lambda"`` uses the form of Lambda_g^v/Lambda_g, which the
    gluing inside E8 matches to K^v/K with the opposite sign.
    """

    g: int
    v_chart: Tuple[Fraction, ...]
    side: str
    invariant_factors: Tuple[int, ...]
    entries: Tuple[LedgerEntry, ...]
    root_count: int  # c_0(-1)

    @property
    def f_divisor_entries(self) -> List[dict]:
        """Divisor of F(g): H with multiplicity 1, then c_lambda(-x) H(lambda, x - 1) for 0 < x < 1."""
        zero = [0] * len(self.invariant_factors)
        out = [{"lambda": zero, "x": 0, "heegner_x": -1, "multiplicity": 1}]
        for e in self.entries:
            out.append({"lambda": list(e.lam), "x": _q(e.x + 1), "heegner_x": _q(e.x), "multiplicity": e.multiplicity})
        return out

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "v_chart": [_q(c) for c in self.v_chart],
            "entries": [
                {"lambda": list(e.lam), "q_lambda": _q(e.q_lambda), "x": _q(e.x), "multiplicity": e.multiplicity}
                for e in self.entries
            ],
            "f_divisor_entries": self.f_divisor_entries,
        }


def _glue_cosets(v_basis: Sequence[int], K: EmbeddedSublattice) -> Tuple[int, List[Tuple[Fraction, ...]]]:
    """For a = 0..N-1 the K^v-coset glued to a*v/(v,v); N = |(v,v)|.

    Every e in E8 splits as (e,v)/(v,v) v + mu with mu in K^v; since E8 is
    unimodular and v primitive there is e with (e,v) = 1, and a*e gives the
    coset for a.
    """
    E = e8()
    vv = int(inner(E, v_basis, v_basis))
    row = intmat.matvec(E.gram, v_basis)
    # solve row . e = 1 over Z
    h, t = intmat.hnf_rows(intmat.transpose([row]))
    if h[0][0] != 1:
        raise ConsistencyError("v is not primitive in a unimodular lattice")
    e = t[0]
    B = K.basis
    gram_inv = intmat.rational_inverse(K.gram)
    cosets = []
    for a in range(abs(vv)):
        ea = [a * c for c in e]
        mu = [Fraction(c) - Fraction(a, vv) * vb for c, vb in zip(ea, v_basis)]
        rhs = [inner(E, b, mu) for b in B]
        coords = tuple(sum((gi * r for gi, r in zip(row_, rhs)), Fraction(0)) for row_ in gram_inv)
        cosets.append(coords)
    return abs(vv), cosets


def _pm_representatives(elements, neg) -> List[tuple]:
    seen = set()
    reps = []
    for a in sorted(elements):
        if not any(a) or a in seen:
            continue
        b = neg(a)
        seen.update((a, b))
        reps.append(min(a, b))
    return reps


def heegner_ledger(g: int, v, side: str = "K", budget: int = DEFAULT_BUDGET, negate_representatives: bool = False) -> HeegnerLedger:
    """Ledger of Heegner multiplicities for the quasi-pullback along ``v``.

    With ``negate_representatives`` each class is counted from its
    ``-lambda`` representative instead; the result must not change.
    """
    if side not in ("K", "Lambda"):
        raise ValueError("side must be 'K' or 'Lambda'")
    v_basis = validate_chart_vector(v, g)
    x_chart = parse_chart_vector(v)
    K = complement_of(v_basis)
    KL = K.lattice
    r = count_of_norm(KL, -2, budget=budget)
    if side == "K":
        D = discriminant(KL)
        factors = D.invariant_factors
        reps = _pm_representatives(D.elements(), D.neg)

        def coset(a):
            return D.lift(D.neg(a) if negate_representatives else a)

        def q(a):
            return D.q(a)

    else:
        N, cosets = _glue_cosets(v_basis, K)
        factors = (N,)
        reps = _pm_representatives([(a,) for a in range(N)], lambda a: ((-a[0]) % N,))

        def coset(a):
            return cosets[(-a[0]) % N if negate_representatives else a[0]]

        def q(a):
            return Fraction(a[0] * a[0], 2 * (2 - 2 * g)) % 1

    entries = []
    for a in reps:
        qa = q(a)
        if qa == 0:
            continue  # no x with x = 0 mod 1 in (-1, 0)
        x = qa - 1
        c = count_of_norm(KL, 2 * (-1 - x), shift=coset(a), budget=budget)
        if c:
            entries.append(LedgerEntry(tuple(a), qa, x, c))
    return HeegnerLedger(g, x_chart, side, tuple(factors), tuple(entries), r)


# (-2)-vector orbits -------------------------------------------------------


@dataclass(frozen=True)
class OrbitCount:
    g: int
    divisibilities: Tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.divisibilities)

    def to_dict(self) -> dict:
        return {"g": self.g, "divisibilities": list(self.divisibilities), "count": self.count}


def eichler_minus2_orbits(g: int) -> OrbitCount:
    """Classes of (-2)-vectors in Lambda_g, told apart by divisibility.

    Divisibility 1 always occurs (inside U). Divisibility 2 occurs iff the
    discriminant group has an element of order 2 with q = -1/4 mod 1, the
    class of delta/2.
    """
    L = polarized_k3_lattice(g)
    D = discriminant(L)
    divs = [1]
    if any(D.element_order(a) == 2 and D.q(a) == Fraction(3, 4) for a in D.elements()):
        divs.append(2)
    return OrbitCount(g, tuple(divs))


def divisibility(L: Lattice, v: Sequence[int]) -> int:
    """Positive generator of (v, L)."""
    return math.gcd(*intmat.matvec(L.gram, v))


def divisibility_two_witness(g: int) -> Optional[Tuple[int, ...]]:
    """An explicit (-2)-vector of divisibility 2 in Lambda_g, or None.

    Tries delta = l + 2(e + k f) with l spanning <2 - 2g> and e, f the first
    hyperbolic plane; this has norm 2 - 2g + 8k and divisibility 2.
    """
    if (g - 2) % 4:
        return None
    k = (g - 2) // 4
    L = polarized_k3_lattice(g)
    delta = [0] * L.rank
    delta[0], delta[1] = 2, 2 * k
    delta[-1] = 1
    return tuple(delta)


# search over v -------------------------------------------------------------


@dataclass(frozen=True)
class SearchCandidate:
    r: int
    root_type: RootSystemType
    v_chart: Tuple[Fraction, ...]
    orbits: int  # W(D8)-orbit representatives sharing (r, type)

    @property
    def n(self) -> int:
        return self.r // 2 - 7

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "root_type": str(self.root_type),
            "v_chart": [_q(c) for c in self.v_chart],
            "orbits": self.orbits,
        }


@dataclass(frozen=True)
class SearchResult:
    g: int
    objective: str
    candidates: Tuple[SearchCandidate, ...]
    representatives: int  # primitive W(D8)-orbit representatives examined
    shell_size: int  # vectors of norm 2g-2 covered by all representatives, primitive or not

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "objective": self.objective,
            "representatives": self.representatives,
            "shell_size": self.shell_size,
            "candidates": [c.to_dict() for c in self.candidates],
        }


@lru_cache(maxsize=None)
def e8_roots_chart() -> Tuple[Tuple[Fraction, ...], ...]:
    E = e8()
    return tuple(E.basis_to_chart(r) for r in vectors_of_norm(E, -2).vectors)


def _nonincreasing(parts: int, total: int, choices: Sequence[int]):
    """Nonincreasing tuples from ``choices`` (descending) with squares summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for i, c in enumerate(choices):
        if c * c > total or c * c * parts < total:
            continue
        for rest in _nonincreasing(parts - 1, total - c * c, choices[i:]):
            yield (c,) + rest


def _orbit_size(abs_vals: Sequence[int]) -> int:
    """Size of a W(D8)-orbit of a vector with these absolute values (doubled for half-integers)."""
    perms = math.factorial(8)
    for m in itertools.groupby(abs_vals):
        perms //= math.factorial(len(list(m[1])))
    nonzero = sum(1 for a in abs_vals if a)
    signs = 2**nonzero if nonzero < 8 else 2**7
    return perms * signs


def w_d8_representatives(norm: int):
    """Chart vectors of E8 with sum of squares ``norm``, one per W(D8)-orbit.

    Yields ``(vector, orbit_size)``. W(D8) (permutations and even sign
    changes) sits inside W(E8), so every orbit is a set of vectors with the
    same complement up to isometry.
    """
    # integer vectors: any sign pattern is in E8 since sum = sum of squares mod 2
    bound = math.isqrt(norm)
    for a in _nonincreasing(8, norm, list(range(bound, -1, -1))):
        x = tuple(Fraction(c) for c in a)
        size = _orbit_size(a)
        if a[-1] == 0:
            yield x, size
        else:
            yield x, size
            yield x[:-1] + (-x[-1],), size
    # half-integer vectors, doubled: odd b_i with sum b_i^2 = 4 norm
    bound = math.isqrt(4 * norm)
    odd = [b for b in range(bound, 0, -1) if b % 2]
    for b in _nonincreasing(8, 4 * norm, odd):
        x = [Fraction(c, 2) for c in b]
        if sum(x) % 2:
            x[-1] = -x[-1]  # one sign flip fixes the parity of the sum
        yield tuple(x), _orbit_size(b)


def orthogonal_roots(x: Sequence[Fraction]) -> List[Tuple[Fraction, ...]]:
    return [r for r in e8_roots_chart() if chart_dot(r, x) == 0]


def search_v(g: int, objective: str = "minimize", max_norm: int = 50, budget: int = 200_000) -> SearchResult:
    """Rank the (r, root type) classes over all primitive v of norm 2 - 2g.

    ``max_norm`` bounds 2g - 2 and ``budget`` the number of orbit
    representatives examined. Classes are deduplicated by (r, type), which
    is coarser than O(E8)-orbits.
    """
    if objective not in ("minimize", "maximize"):
        raise ValueError("objective must be 'minimize' or 'maximize'")
    if g < 2:
        raise LatticeError("genus must be at least 2")
    norm = 2 * g - 2
    if norm > max_norm:
        raise BudgetExceeded(f"norm {norm} exceeds the search limit {max_norm}")
    E = e8()
    classes: Dict[Tuple[int, RootSystemType], List[Tuple[Fraction, ...]]] = {}
    seen = 0
    covered = 0
    for x, size in w_d8_representatives(norm):
        covered += size
        if not is_primitive(E, E.chart_to_basis(x)):
            continue
        seen += 1
        if seen > budget:
            raise BudgetExceeded(f"search examined more than {budget} representatives")
        roots = [E.chart_to_basis(r) for r in orthogonal_roots(x)]
        t = classify(roots, E)
        classes.setdefault((len(roots), t), []).append(x)
    cands = [
        SearchCandidate(r, t, max(vs, key=lambda v: (tuple(abs(c) for c in v), v)), len(vs)) for (r, t), vs in classes.items()
    ]
    sign = 1 if objective == "minimize" else -1
    cands.sort(key=lambda c: (sign * c.r, str(c.root_type)))
    return SearchResult(g, objective, tuple(cands), seen, covered)
