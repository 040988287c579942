"""Truncated Laurent series in q with exact coefficients.

Enough to form Theta_{K(-1)} / Delta and read off its constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from .errors import LatticeError
from .lattice import Lattice
from .shortvec import DEFAULT_BUDGET, definite_sign, norm_histogram

Number = Union[int, Fraction]
DEFAULT_PRECISION = 16


@dataclass(frozen=True)
class IntegerSeries:
    """``sum_i coefficients[i] * q^(leading_exponent + i)`` plus O(q^(leading_exponent + precision))."""

    leading_exponent: int
    coefficients: Tuple[Number, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def precision(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, exponent: int) -> Number:
        i = exponent - self.leading_exponent
        if i < 0:
            return 0
        if i >= self.precision:
            raise IndexError(f"q^{exponent} is beyond the series precision")
        return self.coefficients[i]

    def __mul__(self, other: "IntegerSeries") -> "IntegerSeries":
        return multiply(self, other)

    def __truediv__(self, other: "IntegerSeries") -> "IntegerSeries":
        return divide(self, other, min(self.precision, other.precision))

    def __str__(self) -> str:
        terms = [f"{c}*q^{self.leading_exponent + i}" for i, c in enumerate(self.coefficients) if c]
        return " + ".join(terms) + f" + O(q^{self.leading_exponent + self.precision})"


def multiply(a: IntegerSeries, b: IntegerSeries) -> IntegerSeries:
    prec = min(a.precision, b.precision)
    out = [0] * prec
    for i in range(prec):
        ai = a.coefficients[i]
        if ai:
            for j in range(prec - i):
                out[i + j] += ai * b.coefficients[j]
    return IntegerSeries(a.leading_exponent + b.leading_exponent, tuple(out))


def divide(a: IntegerSeries, b: IntegerSeries, prec: int) -> IntegerSeries:
    """Laurent quotient ``a / b`` to ``prec`` terms.

    The leading coefficient of ``b`` must be a unit (+-1), so integer
    inputs give integer outputs.
    """
    if not b.coefficients or b.coefficients[0] not in (1, -1):
        raise ValueError("divisor must have leading coefficient +-1")
    if prec > min(a.precision, b.precision):
        raise ValueError(f"cannot divide to {prec} terms from inputs of precision {a.precision}, {b.precision}")
    lead = b.coefficients[0]
    out = []
    for n in range(prec):
        acc = a.coefficients[n] - sum(out[k] * b.coefficients[n - k] for k in range(n))
        out.append(acc * lead)  # lead is its own inverse
    return IntegerSeries(a.leading_exponent - b.leading_exponent, tuple(out))


def delta_series(prec: int = DEFAULT_PRECISION) -> IntegerSeries:
    """q * prod_{n>=1} (1 - q^n)^24 to ``prec`` terms (q^1 .. q^prec)."""
    if prec < 1:
        raise ValueError("precision must be at least 1")
    poly = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        for _ in range(24):
            for k in range(prec - 1, n - 1, -1):
                poly[k] -= poly[k - n]
    return IntegerSeries(1, tuple(poly))


def theta_series(L: Lattice, prec: int = DEFAULT_PRECISION, budget: int = DEFAULT_BUDGET) -> IntegerSeries:
    """Theta series of the positive-definite rescaling of an even definite ``L``.

    The coefficient of q^m counts vectors of norm -2m (or 2m when ``L`` is
    positive definite); the constant term is the zero vector.
    """
    if not L.is_even:
        raise LatticeError("theta_series expects an even lattice")
    if prec < 1:
        raise ValueError("precision must be at least 1")
    sign = definite_sign(L.gram)
    hist = norm_histogram(L, sign * 2 * (prec - 1), budget=budget)
    coeffs = [1] + [0] * (prec - 1)
    for norm, c in hist.items():
        coeffs[int(abs(norm)) // 2] += c
    return IntegerSeries(0, tuple(coeffs))
