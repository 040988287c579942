"""Integral lattices given by a Gram matrix, and the exact operations on them.

ADE lattices are built negative definite, so roots have norm -2. E8 also
carries the coordinate chart in which E8 is the set of x in Q^8 with all
x_i in Z or all in Z + 1/2 and sum(x) even, under minus the dot product.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Dict, Iterator, Optional, Sequence, Tuple

from . import intmat
from .errors import DegenerateLatticeError, LatticeError

IntVector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]
Gram = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Lattice:
    gram: Gram
    label: Optional[str] = None
    # columns = basis vectors in chart coordinates; form is minus the dot product
    chart: Optional[Tuple[Tuple[Fraction, ...], ...]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def det(self) -> int:
        return intmat.determinant(self.gram)

    def norm(self, v: Sequence) -> Fraction:
        return inner(self, v, v)

    def chart_to_basis(self, x: Sequence) -> IntVector:
        """Convert chart coordinates to integer basis coordinates.

        Raises ``LatticeError`` if ``x`` is not a lattice point.
        """
        if self.chart is None:
            raise LatticeError(f"{self.label or 'lattice'} has no coordinate chart")
        inv = _chart_inverse(self.chart)
        coords = intmat.matvec(inv, [Fraction(c) for c in x])
        if any(c.denominator != 1 for c in coords):
            raise LatticeError(f"{list(map(str, x))} is not a lattice vector")
        return tuple(int(c) for c in coords)

    def basis_to_chart(self, v: Sequence) -> RationalVector:
        if self.chart is None:
            raise LatticeError(f"{self.label or 'lattice'} has no coordinate chart")
        return tuple(intmat.matvec(self.chart, [Fraction(c) for c in v]))

    def to_json(self) -> str:
        return json.dumps(
            {"rank": self.rank, "gram": [x for row in self.gram for x in row], "label": self.label}
        )

    @classmethod
    def from_json(cls, text: str) -> "Lattice":
        d = json.loads(text)
        n = d["rank"]
        flat = d["gram"]
        if len(flat) != n * n:
            raise LatticeError("gram length does not match rank")
        return cls(tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n)), d.get("label"))


@lru_cache(maxsize=None)
def _chart_inverse(chart):
    return tuple(tuple(row) for row in intmat.rational_inverse(chart))


@dataclass(frozen=True)
class EmbeddedSublattice:
    ambient: Lattice
    basis: Tuple[IntVector, ...]  # basis vectors in ambient coordinates

    @cached_property
    def lattice(self) -> Lattice:
        g = self.ambient.gram
        gram = tuple(
            tuple(sum(b[i] * g[i][j] * c[j] for i in range(len(b)) for j in range(len(c))) for c in self.basis)
            for b in self.basis
        )
        return Lattice(gram, label=f"sub({self.ambient.label})" if self.ambient.label else None)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> Gram:
        return self.lattice.gram

    def to_ambient(self, coords: Sequence) -> tuple:
        """Map sublattice coordinates (possibly rational) to ambient coordinates."""
        n = self.ambient.rank
        return tuple(sum(c * b[i] for c, b in zip(coords, self.basis)) for i in range(n))


@dataclass(frozen=True)
class DiscriminantData:
    """Finite quadratic module L^v/L with q(x) = (x, x)/2 mod 1.

    Group elements are integer tuples reduced modulo ``invariant_factors``.
    """

    lattice: Lattice
    invariant_factors: Tuple[int, ...]
    generators: Tuple[RationalVector, ...]
    projector: Tuple[Tuple[int, ...], ...]  # rows of U @ gram for the nontrivial factors

    @property
    def order(self) -> int:
        o = 1
        for d in self.invariant_factors:
            o *= d
        return o

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def elements(self) -> Iterator[IntVector]:
        yield from itertools.product(*(range(d) for d in self.invariant_factors))

    def reduce(self, a: Sequence[int]) -> IntVector:
        return tuple(x % d for x, d in zip(a, self.invariant_factors))

    def neg(self, a: Sequence[int]) -> IntVector:
        return self.reduce([-x for x in a])

    def element_order(self, a: Sequence[int]) -> int:
        o = 1
        for x, d in zip(a, self.invariant_factors):
            o = o * (d // gcd(x, d)) // gcd(o, d // gcd(x, d))
        return o

    def lift(self, a: Sequence[int]) -> RationalVector:
        """A dual-lattice vector in the class ``a``."""
        n = self.lattice.rank
        return tuple(sum((x * g[i] for x, g in zip(a, self.generators)), Fraction(0)) for i in range(n))

    def class_of(self, lam: Sequence) -> IntVector:
        """Group element of a dual vector; raises if ``lam`` is not in L^v."""
        y = intmat.matvec(self.lattice.gram, [Fraction(c) for c in lam])
        if any(Fraction(c).denominator != 1 for c in y):
            raise LatticeError("vector is not in the dual lattice")
        a = intmat.matvec(self.projector, [int(c) for c in y])
        return self.reduce(a)

    def q(self, a: Sequence[int]) -> Fraction:
        lam = self.lift(a)
        return (inner(self.lattice, lam, lam) / 2) % 1

    @cached_property
    def q_values(self) -> Dict[IntVector, Fraction]:
        return {a: self.q(a) for a in self.elements()}


NAMED = ("U", "A", "D", "E6", "E7", "E8", "rank1")


def _cartan(n: int, edges) -> Gram:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return tuple(map(tuple, g))


def _e8_chart() -> Tuple[Tuple[Fraction, ...], ...]:
    h = Fraction(1, 2)

    def e(i, j, sj=1):
        x = [Fraction(0)] * 8
        x[i] += 1
        x[j] += sj
        return x

    # simple roots numbered as the E8 diagram: chain d1..d7, d8 attached to d5
    roots = [
        e(6, 5, -1),  # d1 = e7 - e6
        e(5, 4, -1),
        e(4, 3, -1),
        e(3, 2, -1),
        e(2, 1, -1),  # d5 = e3 - e2
        e(1, 0, -1),  # d6 = e2 - e1
        [h, -h, -h, -h, -h, -h, -h, h],  # d7
        e(0, 1),  # d8 = e1 + e2
    ]
    return tuple(tuple(roots[j][i] for j in range(8)) for i in range(8))


E8_CHART = _e8_chart()


def chart_dot(x: Sequence, y: Sequence) -> Fraction:
    """The E8 chart form: minus the standard dot product."""
    return -sum((Fraction(a) * Fraction(b) for a, b in zip(x, y)), Fraction(0))


def make_named(name: str, param: Optional[int] = None) -> Lattice:
    """Standard lattices: ``U``, ``A``/``D`` with rank ``param``, ``E6/E7/E8``, ``rank1`` with entry ``param``."""
    key = name.upper() if name.lower() != "rank1" else "rank1"
    if key == "U":
        return Lattice(((0, 1), (1, 0)), "U")
    if key == "A":
        if param is None or param < 1:
            raise LatticeError("A_n needs n >= 1")
        return Lattice(_cartan(param, [(i, i + 1) for i in range(param - 1)]), f"A{param}")
    if key == "D":
        if param is None or param < 2:
            raise LatticeError("D_n needs n >= 2")
        edges = [(i, i + 1) for i in range(param - 2)]
        if param >= 3:
            edges.append((param - 3, param - 1))
        return Lattice(_cartan(param, edges), f"D{param}")
    if key in ("E6", "E7", "E8"):
        e8 = Lattice(
            tuple(
                tuple(int(chart_dot([r[i] for r in E8_CHART], [r[j] for r in E8_CHART])) for j in range(8))
                for i in range(8)
            ),
            "E8",
            chart=E8_CHART,
        )
        if key == "E8":
            return e8
        keep = range(8 - int(key[1]), 8)  # E7 = d2..d8, E6 = d3..d8
        return Lattice(tuple(tuple(e8.gram[i][j] for j in keep) for i in keep), key)
    if key == "rank1":
        if not param:
            raise LatticeError("rank1 needs a nonzero entry")
        return Lattice(((param,),), f"<{param}>")
    raise LatticeError(f"unknown lattice name {name!r}")


def parse_named(text: str) -> Lattice:
    """Parse labels such as ``A7``, ``D5``, ``E8``, ``U``, ``<-2>``."""
    t = text.strip()
    if t.startswith("<") and t.endswith(">"):
        return make_named("rank1", int(t[1:-1]))
    if t.upper() in ("U", "E6", "E7", "E8"):
        return make_named(t)
    if t[:1].upper() in ("A", "D") and t[1:].isdigit():
        return make_named(t[0], int(t[1:]))
    raise LatticeError(f"cannot parse lattice name {text!r}")


def direct_sum(parts: Sequence[Lattice]) -> Lattice:
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        off += p.rank
    labels = [p.label or "?" for p in parts]
    return Lattice(tuple(map(tuple, g)), "+".join(labels) if labels else "0")


def inner(L: Lattice, u: Sequence, v: Sequence) -> Fraction:
    if len(u) != L.rank or len(v) != L.rank:
        raise LatticeError(f"dimension mismatch: rank {L.rank}, got {len(u)} and {len(v)}")
    g = L.gram
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = g[i]
            total += Fraction(ui) * sum((row[j] * Fraction(vj) for j, vj in enumerate(v) if vj), Fraction(0))
    return total


def orthogonal_complement(L: Lattice, vs: Sequence[Sequence[int]]) -> EmbeddedSublattice:
    """Primitive sublattice of ``L`` orthogonal to every vector in ``vs``."""
    for v in vs:
        if len(v) != L.rank:
            raise LatticeError("vector length does not match lattice rank")
    rows = [intmat.matvec(intmat.transpose(L.gram), v) for v in vs]
    rows = [r for r in rows if any(r)]
    basis = intmat.integer_kernel(rows, L.rank) if rows else intmat.identity(L.rank)
    return EmbeddedSublattice(L, tuple(tuple(b) for b in basis))


def is_primitive(L: Lattice, v: Sequence[int]) -> bool:
    if len(v) != L.rank:
        raise LatticeError("vector length does not match lattice rank")
    if not any(v):
        raise LatticeError("the zero vector has no primitivity")
    g = 0
    for c in v:
        g = gcd(g, int(c))
    return g == 1


def discriminant(L: Lattice) -> DiscriminantData:
    if L.rank and L.det == 0:
        raise DegenerateLatticeError(f"{L.label or 'lattice'} is degenerate")
    d, u, v = intmat.smith_normal_form(L.gram)
    idx = [i for i in range(L.rank) if d[i][i] != 1]
    factors = tuple(d[i][i] for i in idx)
    gens = tuple(tuple(Fraction(v[r][i], d[i][i]) for r in range(L.rank)) for i in idx)
    projector = tuple(tuple(u[i]) for i in idx)
    return DiscriminantData(L, factors, gens, projector)


def signature(L: Lattice) -> Tuple[int, int]:
    """(positive, negative) inertia by exact symmetric elimination."""
    if L.rank and L.det == 0:
        raise DegenerateLatticeError(f"{L.label or 'lattice'} is degenerate")
    m = [[Fraction(x) for x in row] for row in L.gram]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            # all diagonal entries zero: replace e_i by e_i + e_j to create one
            i, j = next((i, j) for i in active for j in active if m[i][j] != 0)
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        pos += p > 0
        neg += p < 0
        active.remove(piv)
        for i in active:
            f = m[i][piv] / p
            if f:
                for k in active:
                    m[i][k] -= f * m[piv][k]
        for i in active:
            m[i][piv] = m[piv][i] = Fraction(0)
    return pos, neg
