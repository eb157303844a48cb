import pytest
from hypothesis import given, strategies as st

from braidcluster.laurent import InexactDivision, LaurentPolynomial, parse_polynomial, var

terms = st.dictionaries(
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-3, 3), max_size=4)


def build(d):
    x, y = var("x"), var("y")
    return sum((c * x ** a * y ** b for (a, b), c in d.items()), LaurentPolynomial({}))


@given(terms, terms)
def test_ring_laws(a, b):
    p, q = build(a), build(b)
    assert p * q == q * p
    assert (p + q) - q == p


@given(terms, terms)
def test_exact_divide_inverts_multiplication(a, b):
    p, q = build(a), build(b)
    if q.is_zero():
        return
    assert (p * q).exact_divide(q) == p


def test_inexact_division_raises():
    x = var("x")
    with pytest.raises(InexactDivision):
        (x + 2).exact_divide(x + 1)


def test_parse_and_print():
    p = parse_polynomial("t1*t4 + 1")
    assert str(p) == "t1*t4 + 1"
    assert p.evaluate({"t1": 2, "t4": 3}) == 7
