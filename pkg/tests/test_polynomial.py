import numpy as np
import pytest
from hypothesis import given

from epkit.matrix import Matrix, ShapeError, adjoint
from epkit.polynomial import Polynomial, p_k, poly_conjugate, poly_eval, q_reduce
from epkit.scalar import BackendMismatch, Gaussian

from conftest import G, exact_matrices, polynomials, to_np


def test_trimming_and_degree():
    assert Polynomial([1, 2, 0, 0]).coeffs == (G(1), G(2))
    assert Polynomial([0, 0]).coeffs == (G(0),)
    assert Polynomial([0]).degree == 0 and Polynomial([0]).is_zero()


def test_example1_polynomial(ex1, p1):
    assert poly_eval(p1, ex1) == Matrix.diag([0, 4, 0, 0])
    assert ex1 @ ex1 @ ex1 - ex1 @ ex1 == Matrix.diag([0, 4, 0, 0])


def test_example2_polynomial(ex2, p2):
    assert poly_eval(p2, ex2) == Matrix.identity(2).scale(2)


def test_zero_polynomial(ex1):
    assert poly_eval(Polynomial([0]), ex1).is_zero()


def test_eval_needs_square():
    with pytest.raises(ShapeError):
        poly_eval(Polynomial([0, 1]), Matrix([[1, 2]]))


def test_float_polynomial_on_exact_matrix_refused():
    with pytest.raises(BackendMismatch):
        poly_eval(Polynomial([0.5, 1.0]), Matrix([[1]]))
    # the lossless direction is allowed
    assert poly_eval(Polynomial([0, 1]), Matrix([[2.0]])) == Matrix([[2.0]])


@pytest.mark.parametrize("p, expected", [
    (Polynomial([2, G(-1, -4), G(0, 4), 1]), Polynomial([2, G(-1, 4), G(0, -4), 1])),
    (Polynomial([1, -2, 3]), Polynomial([1, -2, 3])),
    (Polynomial([0, G(0, 1)]), Polynomial([0, G(0, -1)])),
])
def test_conjugate_examples(p, expected):
    assert poly_conjugate(p) == expected


@pytest.mark.parametrize("p, expected", [
    (Polynomial([0, 0, -1, 1]), Polynomial([0, -1, 1])),
    (Polynomial([2, G(-1, -4), G(0, 4), 1]), Polynomial([G(-1, -4), G(0, 4), 1])),
    (Polynomial([5]), Polynomial([0])),
])
def test_q_reduce_examples(p, expected):
    assert q_reduce(p) == expected


def test_p_k():
    p = Polynomial([3, 1, 2])
    assert p_k(p, 2) == Polynomial([0, 0, 0, 1, 2])


@given(polynomials(), exact_matrices(square=True, max_dim=3))
def test_eval_matches_numpy(p, A):
    X = to_np(A)
    expected = sum(complex(c) * np.linalg.matrix_power(X, k) for k, c in enumerate(p.coeffs))
    assert np.allclose(to_np(poly_eval(p, A)), expected)


@given(polynomials(max_degree=3), polynomials(max_degree=3), exact_matrices(square=True, max_dim=3))
def test_eval_is_a_ring_map(p, q, A):
    assert poly_eval(p * q, A) == poly_eval(p, A) @ poly_eval(q, A)
    assert poly_eval(p + q, A) == poly_eval(p, A) + poly_eval(q, A)


@given(polynomials(), exact_matrices(square=True, max_dim=3))
def test_adjoint_of_polynomial(p, A):
    assert adjoint(poly_eval(p, A)) == poly_eval(poly_conjugate(p), adjoint(A))


def test_call_on_scalar():
    p = Polynomial([2, G(-1, -4), G(0, 4), 1])
    assert p(Gaussian(1)) == 2
    assert q_reduce(p)(Gaussian(1)) == 0
