import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from epkit.matrix import Matrix
from epkit.polynomial import Polynomial
from epkit.scalar import EXACT, Gaussian
from epkit.witness import fixture

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def M(rows, backend=EXACT):
    return Matrix(rows, backend)


def G(re, im=0):
    return Gaussian(re, im)


def to_np(A: Matrix) -> np.ndarray:
    return A.to_numpy()


@pytest.fixture
def ex1():
    return fixture("example1")


@pytest.fixture
def ex2():
    return fixture("example2")


@pytest.fixture
def p1():
    return fixture("example1_poly")


@pytest.fixture
def p2():
    return fixture("example2_poly")


# hypothesis strategies

small_int = st.integers(-3, 3)
gaussian_int = st.builds(Gaussian, small_int, small_int)
gaussian_rat = st.builds(
    Gaussian,
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
)


@st.composite
def exact_matrices(draw, min_dim=1, max_dim=4, square=False, entries=gaussian_int):
    m = draw(st.integers(min_dim, max_dim))
    n = m if square else draw(st.integers(min_dim, max_dim))
    # sparse-ish entries make rank deficiency common
    zero_or = st.one_of(st.just(Gaussian(0)), entries)
    rows = draw(st.lists(st.lists(zero_or, min_size=n, max_size=n), min_size=m, max_size=m))
    return Matrix(rows, EXACT)


@st.composite
def low_rank_exact(draw, min_dim=1, max_dim=4, square=True):
    m = draw(st.integers(min_dim, max_dim))
    n = m if square else draw(st.integers(min_dim, max_dim))
    r = draw(st.integers(0, min(m, n)))
    if r == 0:
        return Matrix.zeros(m, n)
    F = Matrix(draw(st.lists(st.lists(gaussian_int, min_size=r, max_size=r), min_size=m, max_size=m)))
    H = Matrix(draw(st.lists(st.lists(gaussian_int, min_size=n, max_size=n), min_size=r, max_size=r)))
    return F @ H


@st.composite
def polynomials(draw, max_degree=4, vanish_at_zero=False):
    coeffs = draw(st.lists(gaussian_int, min_size=1, max_size=max_degree + 1))
    if vanish_at_zero:
        coeffs[0] = Gaussian(0)
    return Polynomial(coeffs)


# acceptance lines are collected here and repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
