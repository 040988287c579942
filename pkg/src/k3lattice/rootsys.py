"""Identify a set of norm -2 vectors as an orthogonal sum of ADE root systems.

Irreducible components are the connected components of the
non-orthogonality graph. Up to rank 8 an irreducible simply-laced root
system is determined by its (rank, number of roots), so no Cartan matrix
is needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import intmat
from .errors import ConsistencyError, LatticeError
from .lattice import Lattice, inner


def root_count(family: str, rank: int) -> int:
    if family == "A":
        return rank * (rank + 1)
    if family == "D":
        return 2 * rank * (rank - 1)
    if family == "E" and rank in (6, 7, 8):
        return {6: 72, 7: 126, 8: 240}[rank]
    raise LatticeError(f"unknown ADE family {family!r}")


def _identify(rank: int, count: int) -> Tuple[str, int]:
    if count == rank * (rank + 1):  # A3 wins over D3 here
        return "A", rank
    if rank >= 4 and count == 2 * rank * (rank - 1):
        return "D", rank
    if rank in (6, 7, 8) and count == root_count("E", rank):
        return "E", rank
    raise ConsistencyError(f"no ADE root system of rank {rank} has {count} roots")


@dataclass(frozen=True, order=True)
class RootSystemType:
    components: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(self.components)))

    @property
    def total_rank(self) -> int:
        return sum(r for _, r in self.components)

    @property
    def total_roots(self) -> int:
        return sum(root_count(f, r) for f, r in self.components)

    @property
    def component_root_counts(self) -> List[int]:
        return [root_count(f, r) for f, r in self.components]

    def __str__(self) -> str:
        return "+".join(f"{f}{r}" for f, r in self.components) or "0"

    @classmethod
    def parse(cls, text: str) -> "RootSystemType":
        text = text.replace(" ", "")
        if text in ("", "0", "empty"):
            return cls(())
        comps = []
        for part in text.split("+"):
            m = re.fullmatch(r"([ADE])(\d+)", part)
            if not m:
                raise LatticeError(f"bad root system component {part!r}")
            fam, rk = m.group(1), int(m.group(2))
            root_count(fam, rk)  # validates E ranks
            if fam == "D" and rk < 4:
                raise LatticeError("D2/D3 are written A1+A1/A3")
            comps.append((fam, rk))
        return cls(tuple(comps))


def expected_root_count(t: RootSystemType) -> int:
    return t.total_roots


def components(roots: Sequence[Sequence], gram: Sequence[Sequence[int]]) -> List[List[int]]:
    """Indices of ``roots`` grouped into non-orthogonality classes."""
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    images = [intmat.matvec(gram, r) for r in roots]  # G r
    for i in range(n):
        for j in range(i + 1, n):
            if sum(a * b for a, b in zip(roots[j], images[i])) != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def classify(roots, lattice: Optional[Lattice] = None) -> RootSystemType:
    """Type of a root set.

    ``roots`` is a ``NormShell`` or a list of integer vectors; in the latter
    case ``lattice`` supplies the Gram matrix.
    """
    if hasattr(roots, "vectors"):
        lattice = roots.lattice
        vecs = list(roots.vectors)
    else:
        vecs = [tuple(v) for v in roots]
    if not vecs:
        return RootSystemType(())
    if lattice is None:
        raise LatticeError("classify needs the ambient lattice for a plain vector list")
    for v in vecs:
        if inner(lattice, v, v) != -2:
            raise LatticeError(f"{v} is not a root (norm {inner(lattice, v, v)})")
    comps = []
    for idx in components(vecs, lattice.gram):
        mat = [[int(x) for x in vecs[i]] for i in idx]
        comps.append(_identify(intmat.rank(mat), len(idx)))
    return RootSystemType(tuple(comps))
