import math
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3lattice import borcherds as bc
from k3lattice.errors import InvalidVectorError
from k3lattice.lattice import EmbeddedSublattice, discriminant, inner, orthogonal_complement, signature
from k3lattice.shortvec import count_of_norm
from k3lattice.rootsys import RootSystemType
from k3lattice.selftest import GOLDEN_N, GOLDEN_R

H = Fraction(1, 2)


# root families written in the chart notation: coordinates are 1-indexed
def pm_pair(j, k):
    """The four roots +-e_j +- e_k."""
    out = []
    for a, b in product((1, -1), repeat=2):
        x = [Fraction(0)] * 8
        x[j - 1], x[k - 1] = Fraction(a), Fraction(b)
        out.append(tuple(x))
    return out


def diff(i, j):
    """e_i - e_j."""
    x = [Fraction(0)] * 8
    x[i - 1], x[j - 1] = Fraction(1), Fraction(-1)
    return tuple(x)


def half(S):
    """+1/2 on S, -1/2 elsewhere."""
    return tuple(H if i in S else -H for i in range(1, 9))


def pm(x):
    return [x, tuple(-c for c in x)]


def listed_families(g):
    if g == 6:
        return [sum((pm_pair(i, j) for i, j in combinations(range(3, 9), 2)), [])]
    if g == 9:
        return [[diff(i, j) for i in range(2, 9) for j in range(2, 9) if i != j]]
    if g == 10:
        return [sum((pm_pair(i, j) for i, j in combinations(range(4, 9), 2)), []), pm(diff(2, 3))]
    if g == 12:
        return [
            [diff(i, j) for i in range(2, 8) for j in range(2, 8) if i != j],
            sum((pm(half({1, i})) for i in range(2, 8)), []),
        ]
    if g == 13:
        return [
            pm_pair(7, 8),
            [diff(i, j) for i in range(3, 7) for j in range(3, 7) if i != j],
            sum((pm(half({1, i})) for i in range(3, 7)), []),
            sum((pm(half({1, i, 7, 8})) for i in range(3, 7)), []),
        ]
    if g == 20:
        return [
            [diff(i, j) for i in range(2, 5) for j in range(2, 5) if i != j],
            sum((pm_pair(i, j) for i, j in combinations(range(6, 9), 2)), []),
            pm(half({1, 5})),
            sum((pm(half({1, 5, i, j})) for i, j in combinations(range(6, 9), 2)), []),
        ]
    raise KeyError(g)


FAMILY_SIZES = {6: [60], 9: [42], 10: [40, 2], 12: [30, 12], 13: [4, 12, 8, 8], 20: [6, 12, 2, 6]}


@pytest.fixture(scope="module")
def table():
    return {r.g: r for r in bc.paper_table()}


@pytest.mark.parametrize("g", sorted(FAMILY_SIZES))
def test_listed_root_families_partition_the_roots(table, g):
    fams = listed_families(g)
    assert [len(f) for f in fams] == FAMILY_SIZES[g]
    union = [r for f in fams for r in f]
    assert len(set(union)) == len(union)
    assert sorted(union) == bc.roots_in_chart(table[g])


def test_e8_roots_are_112_plus_128():
    roots = bc.e8_roots_chart()
    integral = [r for r in roots if all(c.denominator == 1 for c in r)]
    assert (len(integral), len(roots) - len(integral)) == (112, 128)
    built = sum((pm_pair(j, k) for j, k in combinations(range(1, 9), 2)), [])
    built += [half(set(S)) for n in range(0, 9, 2) for S in combinations(range(1, 9), n)]
    assert sorted(built) == sorted(roots)


def simple_roots_chart():
    E = bc.e8()
    return [E.basis_to_chart([int(i == j) for j in range(8)]) for i in range(8)]


def test_simple_roots_form_the_dynkin_diagram():
    d = simple_roots_chart()
    edges = {(i + 1, j + 1) for i, j in combinations(range(8), 2) if sum(a * b for a, b in zip(d[i], d[j])) != 0}
    assert edges == {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)}


@pytest.mark.parametrize("g", [g for g, e in bc.tabulated_vector_sources().items() if e["source"] == "reconstructed"])
def test_reconstructed_vectors_match_the_listed_simple_roots(g):
    # the line orthogonal to the 7 listed simple roots has norm 2 - 2g; the stored
    # vector is the same up to permutation and sign changes (W(D8)), so the complements agree
    E = bc.e8()
    src = bc.tabulated_vector_sources()[g]
    listed = [[int(j == i - 1) for j in range(8)] for i in src["K_generated_by"]]
    line = orthogonal_complement(E, listed)
    assert line.rank == 1 and line.gram == ((2 - 2 * g,),)
    w = E.basis_to_chart(line.basis[0])
    v = bc.tabulated_vectors()[g]
    assert sorted(abs(c) for c in w) == sorted(abs(c) for c in v)
    rep = bc.quasi_pullback(g, v)
    rep_w = bc.quasi_pullback(g, w)
    assert (rep.r, rep.root_type) == (rep_w.r, rep_w.root_type)
    assert rep_w.r == count_of_norm(EmbeddedSublattice(E, tuple(map(tuple, listed))).lattice, -2)


def test_table_against_golden(table):
    for g, rep in table.items():
        assert rep.r == GOLDEN_R[g] and rep.n == GOLDEN_N[g]
        assert rep.k == 12 + rep.r // 2
        assert rep.n == rep.k - 19
        assert rep.disc_order == 2 * g - 2
        assert rep.crosscheck.passed
        assert rep.is_cusp == (rep.r > 0)
        assert RootSystemType.parse(str(rep.root_type)).total_roots == rep.r


def test_dim_vg_from_representation_dimensions():
    C = math.comb
    want = {
        3: C(4 + 3, 4),  # Sym^4 of C^4
        4: C(5 + 2, 3) - 5,  # Sym^3 of C^5 mod C^5
        5: C(6 + 1, 2),  # Sym^2 of C^6
        6: 1 + 9 + 13,  # Sym^0 + Sym^8 + Sym^12 of C^2
        7: 2 ** (5 - 1),  # half spin of SO(10)
        8: C(6, 2),
        9: C(6, 3) - 6,
        10: 14,  # adjoint of G2
    }
    assert bc.dim_vg() == want
    n = {r.g: r.n for r in bc.paper_table() if r.g in want}
    assert n == want


def test_lattice_constructors():
    for g in (2, 5, 22):
        L = bc.polarized_k3_lattice(g)
        assert L.rank == 21 and abs(L.det) == 2 * g - 2 and signature(L) == (2, 19)
    assert signature(bc.k3_lattice()) == (3, 19) and abs(bc.k3_lattice().det) == 1
    assert signature(bc.borcherds_lattice()) == (2, 26)


@pytest.mark.parametrize("x,g,msg", [
    (["0"] * 8, 2, "zero"),
    (["1/2"] + ["0"] * 7, 2, "integers or all half"),
    (["1", "0", "0", "0", "0", "0", "0", "0"], 2, "not even"),
    (["2"] + ["0"] * 7, 6, "wrong norm"),
    (["2", "2"] + ["0"] * 6, 5, "not primitive"),
    (["1"] * 7, 2, "8 entries"),
    (["x"] * 8, 2, "parse"),
])
def test_validation_errors(x, g, msg):
    with pytest.raises(InvalidVectorError, match=msg):
        bc.validate_chart_vector(x, g)


# Heegner ledger -----------------------------------------------------------


def test_ledger_g2_is_empty():
    led = bc.heegner_ledger(2, bc.tabulated_vectors()[2])
    assert led.entries == ()
    assert led.root_count == 126
    assert led.f_divisor_entries == [{"lambda": [0], "x": 0, "heegner_x": -1, "multiplicity": 1}]


def test_ledger_g3():
    led = bc.heegner_ledger(3, bc.tabulated_vectors()[3])
    assert [(e.q_lambda, e.x, e.multiplicity) for e in led.entries] == [(H, -H, 14)]
    # independently: D7 glue vectors of norm -1 are the 14 vectors +-e_i
    assert led.root_count == 84


@pytest.mark.parametrize("g", [2, 3, 5, 9, 13])
def test_ledger_symmetric_under_negation(g):
    v = bc.tabulated_vectors()[g]
    for side in ("K", "Lambda"):
        a = bc.heegner_ledger(g, v, side=side)
        b = bc.heegner_ledger(g, v, side=side, negate_representatives=True)
        assert a.to_dict() == b.to_dict()


@pytest.mark.parametrize("g", [2, 3, 4, 5, 6, 10])
def test_glue_is_anti_isometric(g):
    # the coset glued to a*v/(v,v) has q equal to -q(a) on <2 - 2g>
    E = bc.e8()
    v = E.chart_to_basis(bc.tabulated_vectors()[g])
    K = bc.complement_of(v)
    N, cosets = bc._glue_cosets(v, K)
    D = discriminant(K.lattice)
    assert N == 2 * g - 2 == D.order
    classes = set()
    for a, mu in enumerate(cosets):
        q_line = Fraction(a * a, 2 * (2 - 2 * g)) % 1
        assert (inner(K.lattice, mu, mu) / 2) % 1 == (-q_line) % 1
        classes.add(D.class_of(mu))
    assert len(classes) == N


def test_ledger_entries_have_x_in_range():
    for g in (4, 7, 11):
        led = bc.heegner_ledger(g, bc.tabulated_vectors()[g])
        for e in led.entries:
            assert -1 < e.x < 0 and (e.x - e.q_lambda) % 1 == 0 and e.multiplicity > 0


def test_ledger_rejects_bad_side():
    with pytest.raises(ValueError):
        bc.heegner_ledger(2, bc.tabulated_vectors()[2], side="M")


# orbits -------------------------------------------------------------------


@pytest.mark.parametrize("g", range(2, 40))
def test_divisibility_two_witness(g):
    w = bc.divisibility_two_witness(g)
    orbits = bc.eichler_minus2_orbits(g)
    assert (w is not None) == (orbits.count == 2)
    if w is not None:
        L = bc.polarized_k3_lattice(g)
        assert inner(L, w, w) == -2
        assert bc.divisibility(L, w) == 2
        assert math.gcd(*w) == 1


def test_orbits_g2():
    assert bc.eichler_minus2_orbits(2).to_dict() == {"g": 2, "divisibilities": [1, 2], "count": 2}


# search -------------------------------------------------------------------


def sigma3(m):
    return sum(d**3 for d in range(1, m + 1) if m % d == 0)


@pytest.mark.parametrize("g", [2, 3, 5, 8, 13])
def test_search_covers_the_shell(g):
    res = bc.search_v(g)
    assert res.shell_size == 240 * sigma3(g - 1)
    assert any(c.r == GOLDEN_R[g] for c in res.candidates)
    rs = [c.r for c in res.candidates]
    assert rs == sorted(rs)
    assert [c.r for c in bc.search_v(g, "maximize").candidates] == sorted(rs, reverse=True)


@given(st.integers(2, 12))
def test_search_candidates_are_valid(g):
    for c in bc.search_v(g).candidates:
        bc.validate_chart_vector(c.v_chart, g)
        assert len(bc.orthogonal_roots(c.v_chart)) == c.r
        assert c.root_type.total_roots == c.r


def test_search_g2_single_class():
    res = bc.search_v(2)
    assert [(c.r, str(c.root_type)) for c in res.candidates] == [(126, "E7")]
