from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epkit.matrix import (
    Matrix,
    ShapeError,
    Tolerance,
    _rank_exact,
    adjoint,
    agree,
    char_poly_coeffs,
    commutator,
    inverse,
    is_hermitian,
    is_psd,
    principal_minor_sums,
    rank,
    rref,
)
from epkit.pinv import moore_penrose
from epkit.scalar import EXACT, FLOAT, BackendMismatch, Gaussian

from conftest import G, exact_matrices, gaussian_rat, low_rank_exact, to_np

half = Fraction(1, 2)


def test_construction_invariants():
    A = Matrix([[1, 2], [3, 4]])
    assert A.backend == EXACT and A.shape == (2, 2)
    assert Matrix([[1.5, 2]]).backend == FLOAT
    with pytest.raises(ShapeError):
        Matrix([[1, 2], [3]])
    with pytest.raises(BackendMismatch):
        Matrix([[Gaussian(1), 0.5]])
    with pytest.raises(BackendMismatch):
        Matrix([[1]]) + Matrix([[1.0]])


def test_immutable():
    A = Matrix([[1]])
    with pytest.raises(AttributeError):
        A.rows = 3


@pytest.mark.parametrize("A, expected", [
    ([[1, 1], [0, 0]], [[1, 0], [1, 0]]),
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ([[G(0, 1)]], [[G(0, -1)]]),
])
def test_adjoint_examples(A, expected):
    assert adjoint(Matrix(A)) == Matrix(expected)


def test_commutator_examples(ex2):
    eye = Matrix.identity(2)
    assert commutator(eye, eye).is_zero()
    A, B = Matrix([[0, 1], [0, 0]]), Matrix([[1, 0], [0, 0]])
    assert commutator(A, B) == Matrix([[0, -1], [0, 0]])
    Tp = moore_penrose(ex2)
    assert commutator(Tp, ex2) == Matrix([[-half, half], [half, half]])


def test_commutator_needs_square():
    with pytest.raises(ShapeError):
        commutator(Matrix([[1, 2]]), Matrix([[1, 2]]))


def test_rank_examples(ex1):
    assert rank(ex1) == 3
    assert rank(Matrix.zeros(3, 2)) == 0
    assert rank(Matrix.identity(5)) == 5


@given(exact_matrices(max_dim=5))
def test_rank_three_routes(A):
    """Bareiss elimination, RREF pivots and numpy's SVD rank agree on Gaussian-integer input."""
    r = _rank_exact(A)
    assert len(rref(A)[1]) == r
    assert np.linalg.matrix_rank(to_np(A)) == r
    assert rank(A.to_float()) == r
    assert rank(adjoint(A)) == r


@given(exact_matrices(), exact_matrices())
def test_matmul_matches_numpy(A, B):
    B = Matrix([[B[i % B.rows, j] for j in range(B.cols)] for i in range(A.cols)])
    assert np.allclose(to_np(A @ B), to_np(A) @ to_np(B))


@given(st.lists(gaussian_rat, min_size=4, max_size=4), st.lists(gaussian_rat, min_size=4, max_size=4))
def test_matmul_with_fractions(a, b):
    A, B = Matrix([a[:2], a[2:]]), Matrix([b[:2], b[2:]])
    C = A @ B
    for i in range(2):
        for j in range(2):
            assert C[i, j] == A[i, 0] * B[0, j] + A[i, 1] * B[1, j]


@given(exact_matrices())
def test_adjoint_involution(A):
    assert adjoint(adjoint(A)) == A


def test_hermitian_examples(ex1):
    Tp = moore_penrose(ex1)
    assert is_hermitian(ex1 @ Tp - Tp @ ex1)
    assert not is_hermitian(Matrix([[0, 1], [0, 0]]))
    assert is_hermitian(Matrix.diag([3, -1, half]))


def test_psd_examples(ex1):
    assert is_psd(Matrix.diag([1, 0]))
    assert not is_psd(Matrix([[-half, half], [half, half]]))
    Tp = moore_penrose(ex1)
    C = ex1 @ Tp - Tp @ ex1
    assert not is_psd(C) and not is_psd(-C)


def _minor_sums_bruteforce(A: np.ndarray):
    n = A.shape[0]
    minor = lambda S: np.linalg.det(A[np.ix_(S, S)]) if S else 1.0
    return [sum(minor(S) for S in combinations(range(n), k)) for k in range(n + 1)]


@given(exact_matrices(square=True))
def test_principal_minor_sums_match_bruteforce(A):
    ours = [complex(x) for x in principal_minor_sums(A)]
    assert np.allclose(ours, _minor_sums_bruteforce(to_np(A)), atol=1e-8)


@given(exact_matrices(square=True))
def test_char_poly_matches_numpy(A):
    ours = [complex(c) for c in char_poly_coeffs(A)]
    assert np.allclose(ours, np.poly(to_np(A)), atol=1e-6 * (1 + np.abs(to_np(A)).sum()) ** A.rows)


@given(low_rank_exact())
def test_psd_exact_matches_eigenvalues(B):
    H = B @ adjoint(B)
    assert is_psd(H)
    assert is_psd(-H) == H.is_zero()
    K = H - Matrix.identity(H.rows).scale(2)
    expected = np.linalg.eigvalsh(to_np(K)).min() >= -1e-9
    assert is_psd(K) == expected
    assert is_psd(K.to_float()) == expected


@given(exact_matrices(square=True))
def test_psd_of_A_and_minus_A_iff_zero(A):
    H = A + adjoint(A)
    assert (is_psd(H) and is_psd(-H)) == H.is_zero()


@given(exact_matrices(square=True))
def test_inverse(A):
    if rank(A) < A.rows:
        with pytest.raises(ZeroDivisionError):
            inverse(A)
    else:
        assert A @ inverse(A) == Matrix.identity(A.rows)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rank_rel=0)
    with pytest.raises(ValueError):
        Tolerance(psd_rel=-1e-3)


def test_float_agreement_is_relative():
    A = Matrix([[1e6, 0], [0, 1.0]])
    B = Matrix([[1e6 + 1e-6, 0], [0, 1.0]])
    ok, res = agree(A, B)
    assert ok and res == pytest.approx(1e-6, rel=1e-3)
    assert not agree(A, Matrix([[1e6 + 1.0, 0], [0, 1.0]]))[0]


def test_float_rank_relative_threshold():
    A = Matrix([[1.0, 0], [0, 1e-13]])
    assert rank(A) == 1
    assert rank(A, Tolerance(rank_rel=1e-15)) == 2
    assert rank(A.scale(1e8)) == 1
