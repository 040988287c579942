class LatticeError(ValueError):
    """Invalid lattice input (unknown name, bad dimensions, vector not in lattice)."""


class DegenerateLatticeError(LatticeError):
    """Gram matrix has determinant zero."""


class IndefiniteLatticeError(LatticeError):
    """Enumeration requested on a lattice that is not definite."""


class NotInDualError(LatticeError):
    """Coset shift does not lie in the dual lattice."""


class InvalidVectorError(LatticeError):
    """A chart vector failed E8 membership, norm, or primitivity checks."""


class BudgetExceeded(RuntimeError):
    """Enumeration visited more nodes than the configured cap."""


class ConsistencyError(AssertionError):
    """An internal cross-check failed; indicates a bug, never bad input."""
