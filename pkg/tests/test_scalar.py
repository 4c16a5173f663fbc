from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epkit.parser import parse_scalar
from epkit.scalar import (
    EXACT,
    FLOAT,
    BackendMismatch,
    Gaussian,
    backend_of,
    format_exact,
    format_float,
    to_backend,
)

from conftest import gaussian_rat


def test_fractions_normalized():
    g = Gaussian(Fraction(2, 4), Fraction(-3, -6))
    assert (g.re.numerator, g.re.denominator) == (1, 2)
    assert g.im == Fraction(1, 2)


@given(gaussian_rat, gaussian_rat)
def test_arithmetic_matches_complex(a, b):
    ca, cb = complex(a), complex(b)
    assert complex(a + b) == pytest.approx(ca + cb)
    assert complex(a - b) == pytest.approx(ca - cb)
    assert complex(a * b) == pytest.approx(ca * cb)
    if b:
        assert complex(a / b) == pytest.approx(ca / cb)
        assert (a / b) * b == a


@given(gaussian_rat)
def test_conjugate_and_modulus(a):
    assert a.conjugate().conjugate() == a
    assert a * a.conjugate() == Gaussian(a.abs2())


def test_mixing_backends_is_an_error():
    with pytest.raises(BackendMismatch):
        Gaussian(1) + 0.5
    with pytest.raises(BackendMismatch):
        Gaussian(1) * 1j
    with pytest.raises(BackendMismatch):
        to_backend(0.5, EXACT)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Gaussian(1) / Gaussian(0)


def test_backend_of():
    assert backend_of(Gaussian(1)) == EXACT
    assert backend_of(3) == EXACT
    assert backend_of(1.5) == FLOAT
    assert to_backend(Gaussian(1, 2), FLOAT) == 1 + 2j


@pytest.mark.parametrize("g, text", [
    (Gaussian(Fraction(-1, 5)), "-1/5"),
    (Gaussian(1, 4), "1+4i"),
    (Gaussian(0, 4), "4i"),
    (Gaussian(0, -1), "-i"),
    (Gaussian(Fraction(-1, 2), -1), "-1/2-i"),
    (Gaussian(0), "0"),
])
def test_format_exact(g, text):
    assert format_exact(g) == text


@given(gaussian_rat)
def test_exact_text_round_trip(g):
    assert parse_scalar(format_exact(g)) == g


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e12))
def test_float_text_round_trip(z):
    back = parse_scalar(format_float(z))
    assert complex(back) == z
