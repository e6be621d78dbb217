from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagrock.field import INV_SQRT2, I, ONE, SQRT2, ZERO, Q2i, is_zero, parse_scalar

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.builds(Q2i, rationals, rationals, rationals, rationals)


def close(x, y):
    return abs(complex(x) - complex(y)) < 1e-9 * (1 + abs(complex(y)))


@settings(max_examples=200)
@given(elements, elements)
def test_ring_operations_match_complex(x, y):
    assert close(x + y, complex(x) + complex(y))
    assert close(x - y, complex(x) - complex(y))
    assert close(x * y, complex(x) * complex(y))
    if y:
        assert close(x / y, complex(x) / complex(y))
        assert (x / y) * y == x


@settings(max_examples=100)
@given(elements, elements, elements)
def test_distributive(x, y, z):
    assert x * (y + z) == x * y + x * z


@settings(max_examples=100)
@given(rationals, rationals)
def test_sqrt_of_squares(a, b):
    x = Q2i(a, b)
    root = (x * x).sqrt()
    assert root is not None
    assert root * root == x * x
    assert root.sign() >= 0


def test_constants():
    assert SQRT2 * SQRT2 == 2
    assert SQRT2 * INV_SQRT2 == ONE
    assert I * I == -1
    assert not ZERO
    assert Q2i(2).sqrt() == SQRT2
    assert SQRT2.sqrt() is None
    assert Q2i(-1).sqrt() is None


def test_sign_is_exact_near_cancellation():
    # 99 - 70 sqrt2 ~ 0.00505 > 0
    assert Q2i(99, -70).sign() == 1
    assert Q2i(-99, 70).sign() == -1


def test_hash_agrees_with_rationals():
    assert hash(Q2i(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert {Q2i(3): 1}[Q2i(3)] == 1


def test_float_fallback():
    assert isinstance(SQRT2 * 0.5, complex)
    assert is_zero(1e-13, 1e-12)


@pytest.mark.parametrize("token,value", [
    ("3/2", Q2i(Fraction(3, 2))),
    ("0.5", Q2i(Fraction(1, 2))),
    ("sqrt2", SQRT2),
    ("√2", SQRT2),
    ("3/2*sqrt2", Q2i(0, Fraction(3, 2))),
    ("-sqrt2", -SQRT2),
    ("2", Q2i(2)),
])
def test_parse_scalar(token, value):
    assert parse_scalar(token) == value


@pytest.mark.parametrize("token", ["", "abc", "1/0", "sqrt3"])
def test_parse_scalar_rejects(token):
    with pytest.raises(ValueError):
        parse_scalar(token)
