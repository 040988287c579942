"""Exact lattice toolkit for quasi-pullbacks of the Borcherds form Phi_12."""

from .borcherds import (
    eichler_minus2_orbits,
    heegner_ledger,
    paper_table,
    polarized_k3_lattice,
    quasi_pullback,
    search_v,
)
from .lattice import Lattice, direct_sum, discriminant, inner, make_named, orthogonal_complement, signature
from .rootsys import RootSystemType, classify, expected_root_count
from .shortvec import brute_force_oracle, count_of_norm, vectors_of_norm

__all__ = [
    "Lattice", "RootSystemType", "brute_force_oracle", "classify", "count_of_norm", "direct_sum",
    "discriminant", "eichler_minus2_orbits", "expected_root_count", "heegner_ledger", "inner",
    "make_named", "orthogonal_complement", "paper_table", "polarized_k3_lattice", "quasi_pullback",
    "search_v", "signature", "vectors_of_norm",
]
__version__ = "0.1.0"
