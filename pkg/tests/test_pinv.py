from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from epkit.matrix import Matrix, ShapeError, adjoint, agree, frobenius, rank
from epkit.pinv import (
    cauchy_dual,
    corange_projector,
    full_rank_factorization,
    moore_penrose,
    penrose_residuals,
    range_projector,
)
from epkit.ranges import range_included
from epkit.witness import GenSpec, candidate_rng, random_matrix

from conftest import exact_matrices, low_rank_exact, to_np

EX1_PINV = Matrix([
    [F(1, 5), 0, F(-1, 5), 0],
    [0, F(1, 2), 0, 0],
    [F(2, 5), 0, F(-2, 5), 0],
    [0, 0, F(1, 3), 0],
])


def test_example1_pinv(ex1):
    assert moore_penrose(ex1) == EX1_PINV
    assert penrose_residuals(ex1, EX1_PINV) == (0, 0, 0, 0)


def test_example2_pinv(ex2):
    assert moore_penrose(ex2) == Matrix([[F(1, 2), 0], [F(1, 2), 0]])


def test_zero_and_identity():
    assert moore_penrose(Matrix.zeros(2, 3)) == Matrix.zeros(3, 2)
    eye = Matrix.identity(3)
    assert moore_penrose(eye) == eye
    assert penrose_residuals(eye, eye) == (0, 0, 0, 0)


def test_residual_of_zero_candidate(ex1):
    assert penrose_residuals(ex1, Matrix.zeros(4, 4)).txt == frobenius(ex1)


def test_residual_shape_check(ex1):
    with pytest.raises(ShapeError):
        penrose_residuals(ex1, Matrix.zeros(3, 4))


def test_full_rank_factorization_examples(ex2):
    Fm, Gm, r = full_rank_factorization(ex2)
    assert (Fm, Gm, r) == (Matrix([[1], [0]]), Matrix([[1, 1]]), 1)
    Fm, Gm, r = full_rank_factorization(Matrix.identity(3))
    assert Fm == Gm == Matrix.identity(3) and r == 3
    Fm, Gm, r = full_rank_factorization(Matrix.zeros(2, 2))
    assert r == 0 and Fm.shape == (2, 0) and Gm.shape == (0, 2)


@given(exact_matrices(max_dim=5))
def test_factorization_reproduces_input(A):
    Fm, Gm, r = full_rank_factorization(A)
    assert r == rank(A)
    if r:
        assert Fm @ Gm == A
    Ff, Gf, rf = full_rank_factorization(A.to_float())
    assert rf == r
    if r:
        assert agree(Ff @ Gf, A.to_float())[0]


def test_projector_examples(ex1, ex2):
    assert range_projector(ex1) == Matrix.diag([1, 1, 1, 0])
    assert corange_projector(ex2) == Matrix([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
    assert range_projector(Matrix.identity(2)) == Matrix.identity(2)


def test_cauchy_dual_examples(ex2):
    assert cauchy_dual(ex2) == Matrix([[F(1, 2), F(1, 2)], [0, 0]])
    U = Matrix([[0, 1], [1, 0]])
    assert cauchy_dual(U) == U
    assert cauchy_dual(Matrix.zeros(2, 2)).is_zero()


@given(low_rank_exact(max_dim=4, square=False))
def test_exact_properties(A):
    X = moore_penrose(A)
    assert penrose_residuals(A, X) == (0, 0, 0, 0)
    assert moore_penrose(X) == A
    assert moore_penrose(adjoint(A)) == adjoint(X)
    for P in (A @ X, X @ A):
        assert P == adjoint(P) and P @ P == P
    if A.is_square:
        assert cauchy_dual(A) == adjoint(X)
    # N(T^+) = N(T*): mutual inclusion of the orthogonal complements' ranges
    assert range_included(adjoint(X), A).holds and range_included(A, adjoint(X)).holds


@given(low_rank_exact(max_dim=4, square=False))
def test_matches_numpy_pinv(A):
    assert np.allclose(to_np(moore_penrose(A)), np.linalg.pinv(to_np(A)))
    assert np.allclose(to_np(moore_penrose(A.to_float())), np.linalg.pinv(to_np(A)))


def test_float_properties_seeded():
    for i in range(40):
        rng = candidate_rng(7, i)
        m, n = (int(x) for x in rng.integers(1, 8, size=2, endpoint=True))
        r = int(rng.integers(0, min(m, n), endpoint=True))
        A = random_matrix(GenSpec(m, r, 3, "float", cols=n), rng)
        X = moore_penrose(A)
        assert penrose_residuals(A, X).max() <= 1e-10 * (1 + frobenius(A))
        P = A @ X
        assert agree(P, adjoint(P))[0] and agree(P @ P, P)[0]
