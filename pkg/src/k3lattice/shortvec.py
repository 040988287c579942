"""Short-vector enumeration in definite lattices and their dual cosets.

Fincke-Pohst branch and bound over an exact rational LDL^T factorisation of
the (sign-normalised) Gram matrix. Everything is done in ``Fraction`` or
``int``; boundary cases at exact norm equality are decided exactly.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, isqrt
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from filelock import FileLock

from . import intmat
from .errors import BudgetExceeded, IndefiniteLatticeError, LatticeError, NotInDualError
from .lattice import Lattice, signature

DEFAULT_BUDGET = 50_000_000


@dataclass(frozen=True)
class NormShell:
    lattice: Lattice
    target_norm: Fraction
    shift: Optional[Tuple[Fraction, ...]]
    vectors: Tuple[tuple, ...]

    @property
    def count(self) -> int:
        return len(self.vectors)


@lru_cache(maxsize=None)
def definite_sign(gram) -> int:
    """+1 for positive definite, -1 for negative definite."""
    L = Lattice(gram)
    p, q = signature(L)
    if q == 0:
        return 1
    if p == 0:
        return -1
    raise IndefiniteLatticeError(f"signature ({p}, {q}) is not definite")


def canonical_shift(L: Lattice, shift: Optional[Sequence]) -> Optional[Tuple[Fraction, ...]]:
    """Reduce a dual-lattice shift into [0, 1)^n; ``None`` for the trivial coset."""
    if shift is None:
        return None
    if len(shift) != L.rank:
        raise LatticeError("shift length does not match lattice rank")
    s = tuple(Fraction(x) for x in shift)
    if any(Fraction(y).denominator != 1 for y in intmat.matvec(L.gram, s)):
        raise NotInDualError("shift is not in the dual lattice")
    s = tuple(x - floor(x) for x in s)
    return None if not any(s) else s


@lru_cache(maxsize=None)
def _factor(gram, sign):
    """Permutation and LDL^T data for the positive definite form ``sign * gram``.

    Returns ``(perm, diag, mu)`` where the form in permuted coordinates is
    ``sum_i diag[i] * (w_i + sum_{j>i} mu[i][j] w_j)^2``. Coordinates are
    ordered so that the factor diagonal decreases.
    """
    n = len(gram)
    q = [[Fraction(sign * gram[i][j]) for j in range(n)] for i in range(n)]
    diag, _ = _ldl(q)
    perm = sorted(range(n), key=lambda i: (-diag[i], i))
    qp = [[q[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    diag, mu = _ldl(qp)
    return tuple(perm), tuple(diag), tuple(tuple(r) for r in mu)


def _ldl(q):
    n = len(q)
    a = [row[:] for row in q]
    diag = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = a[i][i]
        if d <= 0:
            raise IndefiniteLatticeError("form is not positive definite")
        diag[i] = d
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= a[i][j] * a[i][k] / d
                a[k][j] = a[j][k]
    return diag, mu


def _sqrt_floor(t: Fraction) -> int:
    """floor(sqrt(t)) for t >= 0."""
    return isqrt(t.numerator * t.denominator) // t.denominator


def _exact_sqrt(t: Fraction) -> Optional[Fraction]:
    p, q = t.numerator, t.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _search(L: Lattice, n, shift, collect: bool, budget: int):
    """Core traversal. Returns (count, vectors-or-None) in original coordinates."""
    sign = definite_sign(L.gram)
    target = Fraction(n) * sign
    if target < 0:
        raise LatticeError(f"norm {n} has the wrong sign for this {'positive' if sign > 0 else 'negative'} definite lattice")
    rank = L.rank
    if rank == 0:
        return 0, []
    perm, diag, mu = _factor(L.gram, sign)
    sigma = [Fraction(0)] * rank if shift is None else [shift[perm[i]] for i in range(rank)]
    w = [Fraction(0)] * rank
    found: List[tuple] = []
    count = 0
    nodes = 0

    def emit():
        nonlocal count
        if shift is None and not any(w):
            return
        count += 1
        if collect:
            v = [None] * rank
            for i in range(rank):
                v[perm[i]] = w[i]
            found.append(tuple(int(x) for x in v) if shift is None else tuple(v))

    # explicit stack of (level, remaining budget, candidates iterator)
    def candidates(i, rem):
        s = sigma[i] + sum((mu[i][j] * w[j] for j in range(i + 1, rank)), Fraction(0))
        t = rem / diag[i]
        if i == 0:
            r = _exact_sqrt(t)
            if r is None:
                return []
            out = []
            for y in sorted({-r, r}):
                x = y - s
                if x.denominator == 1:
                    out.append((x + sigma[i], Fraction(0)))
            return out
        rho = _sqrt_floor(t) + 1
        lo = floor(-s) - rho
        hi = floor(-s) + rho + 1
        out = []
        for x in range(lo, hi + 1):
            y = x + s
            used = diag[i] * y * y
            if used <= rem:
                out.append((x + sigma[i], rem - used))
        return out

    stack = [(rank - 1, iter(candidates(rank - 1, target)))]
    while stack:
        i, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            continue
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
        w[i], rem = nxt
        if i == 0:
            emit()
        else:
            stack.append((i - 1, iter(candidates(i - 1, rem))))
    for j in range(rank):
        w[j] = Fraction(0)
    if collect:
        found.sort()
    return count, found


class ShellCache:
    """Count cache keyed by (Gram, norm, canonical shift); optionally persisted as JSON."""

    def __init__(self, directory: Optional[os.PathLike] = None):
        self._lock = threading.Lock()
        self._mem: Dict[str, int] = {}
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            if self.path.exists():
                self._mem.update(json.loads(self.path.read_text() or "{}"))

    @property
    def path(self) -> Path:
        return self.directory / "shells.json"

    @staticmethod
    def key(gram, n, shift) -> str:
        raw = json.dumps([[list(r) for r in gram], str(Fraction(n)), None if shift is None else [str(x) for x in shift]])
        return hashlib.sha256(raw.encode()).hexdigest()

    def get(self, key: str) -> Optional[int]:
        with self._lock:
            return self._mem.get(key)

    def put(self, key: str, value: int) -> None:
        with self._lock:
            self._mem[key] = value

    def flush(self) -> None:
        if not self.directory:
            return
        with FileLock(str(self.path) + ".lock"):
            on_disk = json.loads(self.path.read_text() or "{}") if self.path.exists() else {}
            with self._lock:
                on_disk.update(self._mem)
                self._mem = dict(on_disk)
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(json.dumps(on_disk, sort_keys=True))
            tmp.replace(self.path)

    def __len__(self):
        return len(self._mem)


_cache = ShellCache()


def configure_cache(directory: Optional[os.PathLike]) -> ShellCache:
    global _cache
    _cache = ShellCache(directory)
    return _cache


def get_cache() -> ShellCache:
    return _cache


def vectors_of_norm(L: Lattice, n, shift: Optional[Sequence] = None, budget: int = DEFAULT_BUDGET) -> NormShell:
    """All vectors ``v`` in ``shift + L`` with ``(v, v) == n``, sorted lexicographically.

    Coordinates are in the basis of ``L``; ints for the trivial coset,
    Fractions otherwise. The zero vector is never included.
    """
    s = canonical_shift(L, shift)
    _, vecs = _search(L, Fraction(n), s, True, budget)
    return NormShell(L, Fraction(n), s, tuple(vecs))


def count_of_norm(L: Lattice, n, shift: Optional[Sequence] = None, budget: int = DEFAULT_BUDGET) -> int:
    s = canonical_shift(L, shift)
    key = ShellCache.key(L.gram, n, s)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    c, _ = _search(L, Fraction(n), s, False, budget)
    _cache.put(key, c)
    return c


def norm_histogram(L: Lattice, max_norm, shift: Optional[Sequence] = None, budget: int = DEFAULT_BUDGET) -> Dict[Fraction, int]:
    """Counts of all nonzero coset vectors by norm, for |norm| <= |max_norm|.

    One traversal of the ellipsoid instead of one per shell; used for theta
    series.
    """
    s = canonical_shift(L, shift)
    sign = definite_sign(L.gram)
    bound = Fraction(max_norm) * sign
    if bound < 0:
        raise LatticeError("max_norm has the wrong sign for this lattice")
    rank = L.rank
    hist: Dict[Fraction, int] = {}
    if rank == 0:
        return hist
    perm, diag, mu = _factor(L.gram, sign)
    sigma = [Fraction(0)] * rank if s is None else [s[perm[i]] for i in range(rank)]
    w = [Fraction(0)] * rank
    nodes = 0

    def candidates(i, rem):
        c = sigma[i] + sum((mu[i][j] * w[j] for j in range(i + 1, rank)), Fraction(0))
        rho = _sqrt_floor(rem / diag[i]) + 1
        base = floor(-c)
        out = []
        for x in range(base - rho, base + rho + 2):
            y = x + c
            used = diag[i] * y * y
            if used <= rem:
                out.append((x + sigma[i], rem - used))
        return out

    stack = [(rank - 1, iter(candidates(rank - 1, bound)))]
    while stack:
        i, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            continue
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"enumeration exceeded {budget} nodes")
        w[i], rem = nxt
        if i == 0:
            if s is None and not any(w):
                continue
            norm = (bound - rem) * sign
            hist[norm] = hist.get(norm, 0) + 1
        else:
            stack.append((i - 1, iter(candidates(i - 1, rem))))
    return dict(sorted(hist.items(), key=lambda kv: abs(kv[0])))


def brute_force_oracle(
    L: Lattice,
    n,
    shift: Optional[Sequence] = None,
    box_radius: Optional[int] = None,
    max_box: int = 5_000_000,
) -> int:
    """Count coset vectors of norm ``n`` by scanning an integer box.

    Independent of the enumeration path: the box comes from the inverse Gram
    (|w_i|^2 <= |n| * |G^-1|_ii) and each candidate's norm is an exact
    integer evaluation after clearing the shift's denominator.
    """
    sign = definite_sign(L.gram)
    target = Fraction(n) * sign
    if target < 0:
        raise LatticeError("norm has the wrong sign for this lattice")
    rank = L.rank
    if rank == 0:
        return 0
    sigma = [Fraction(0)] * rank if shift is None else [Fraction(x) for x in shift]
    if shift is not None and any(Fraction(y).denominator != 1 for y in intmat.matvec(L.gram, sigma)):
        raise NotInDualError("shift is not in the dual lattice")
    den = 1
    for x in sigma:
        den = den * x.denominator // gcd(den, x.denominator)
    inv = intmat.rational_inverse(L.gram)
    ranges = []
    for i in range(rank):
        r = _sqrt_floor(target * abs(inv[i][i])) if box_radius is None else box_radius
        if shift is None:
            ranges.append(range(-r, r + 1))
        else:
            c = floor(sigma[i])
            ranges.append(range(-r - 1 - c, r + 2 - c))
    size = 1
    for r in ranges:
        size *= len(r)
    if size > max_box:
        raise BudgetExceeded(f"box of {size} points exceeds cap {max_box}")
    g = np.array(L.gram, dtype=np.int64)
    sig_scaled = np.array([int(x * den) for x in sigma], dtype=np.int64)
    want = Fraction(n) * den * den
    if want.denominator != 1:
        return 0
    want = int(want)
    # split coordinates: scan the prefix in Python, the suffix block in numpy
    k = min(rank, 4)
    head = rank - k
    tail = np.array(list(itertools.product(*ranges[head:])), dtype=np.int64) * den + sig_scaled[head:]
    g_tt = g[head:, head:]
    tail_q = np.einsum("mi,ij,mj->m", tail, g_tt, tail)
    g_ht = g[:head, head:]
    total = 0
    for x in itertools.product(*ranges[:head]):
        y = np.array(x, dtype=np.int64) * den + sig_scaled[:head]
        vals = tail_q + 2 * (tail @ (y @ g_ht)) + int(y @ g[:head, :head] @ y)
        total += int(np.count_nonzero(vals == want))
    if shift is None and want == 0:
        total -= 1  # the zero vector
    return total
