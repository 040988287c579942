import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from k3lattice.lattice import direct_sum, make_named
from k3lattice.qseries import IntegerSeries, delta_series, divide, multiply, theta_series

from .strategies import ade_sums


def test_delta_against_sympy_product():
    q = sympy.symbols("q")
    poly = sympy.Poly(q, q)
    for n in range(1, 12):
        poly = (poly * sympy.Poly(1 - q**n, q) ** 24)
        poly = sympy.Poly(sum(poly.coeff_monomial(q**m) * q**m for m in range(13)), q)
    want = [poly.coeff_monomial(q**m) for m in range(1, 13)]
    assert list(delta_series(12).coefficients) == want


def test_delta_known_values():
    # Ramanujan tau
    assert delta_series(8).coefficients == (1, -24, 252, -1472, 4830, -6048, -16744, 84480)


def test_inverse_delta():
    inv = divide(IntegerSeries(0, (1,) + (0,) * 7), delta_series(8), 3)
    assert inv.leading_exponent == -1
    assert inv.coefficients == (1, 24, 324)


def test_e8_theta_is_eisenstein():
    th = theta_series(make_named("E8"), 6)
    assert th.coefficients == (1,) + tuple(240 * sum(d**3 for d in range(1, m + 1) if m % d == 0) for m in range(1, 6))


def test_theta_of_sum_is_product():
    A2, D4 = make_named("A", 2), make_named("D", 4)
    assert theta_series(direct_sum([A2, D4]), 5) == theta_series(A2, 5) * theta_series(D4, 5)


series = st.builds(
    IntegerSeries,
    st.integers(-2, 2),
    st.lists(st.integers(-50, 50), min_size=6, max_size=6).map(tuple),
)
units = st.builds(
    IntegerSeries,
    st.integers(-2, 2),
    st.tuples(st.sampled_from([1, -1])).flatmap(lambda h: st.lists(st.integers(-50, 50), min_size=5, max_size=5).map(lambda t: h + tuple(t))),
)


@given(series, units)
def test_divide_undoes_multiply(a, b):
    assert divide(multiply(a, b), b, 6) == a


@given(ade_sums(max_rank=6))
def test_theta_coefficients(L):
    th = theta_series(L, 4)
    assert th[0] == 1
    assert all(c >= 0 for c in th.coefficients)
    assert all(c % 2 == 0 for c in th.coefficients[1:])


def test_precision_errors():
    with pytest.raises(ValueError):
        divide(delta_series(4), delta_series(4), 5)
    with pytest.raises(ValueError):
        divide(delta_series(4), IntegerSeries(0, (2, 1)), 1)
    with pytest.raises(IndexError):
        delta_series(3)[9]
