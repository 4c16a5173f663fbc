import math

import numpy as np
import pytest
from hypothesis import given

from epkit.blockrep import (
    block_criterion,
    block_form_of_poly,
    orthodecompose,
    pinv_from_blocks,
    rep_criterion,
)
from epkit.classes import is_p_EP, is_p_hypo_EP
from epkit.matrix import Matrix, adjoint, agree, frobenius, inverse, rank
from epkit.pinv import moore_penrose
from epkit.polynomial import Polynomial
from epkit.witness import GenSpec, candidate_rng, planted_p_hypo_EP, random_matrix

from conftest import low_rank_exact, polynomials, to_np

t = Polynomial([0, 1])


def test_example2_float_blocks(ex2):
    rep = orthodecompose(ex2.to_float())
    assert rep.r == 1
    s = 1 / math.sqrt(2)
    assert np.allclose(to_np(rep.basis), [[s, s], [s, -s]])
    assert complex(rep.T1[0, 0]) == pytest.approx(1)
    assert complex(rep.T2[0, 0]) == pytest.approx(1)
    assert complex(rep.D[0, 0]) == pytest.approx(2)


def test_block_form_matches_ambient_action(ex1):
    """T maps corange vectors to (T1; T2) coordinates and kills the kernel."""
    rep = orthodecompose(ex1)
    B = rep.basis
    C = inverse(Matrix.diag(list(rep.gram))) @ adjoint(B) @ ex1 @ B
    r = rep.r
    assert C.submatrix(range(4), range(r, 4)).is_zero()
    assert C.submatrix(range(r), range(r)) == rep.T1
    assert C.submatrix(range(r, 4), range(r)) == rep.T2
    assert rep.leak == 0
    assert rank(rep.D) == r


def test_invertible_and_zero():
    T = Matrix([[1, 2], [3, 4]])
    rep = orthodecompose(T)
    assert rep.r == 2 and rep.kernel_basis.shape == (2, 0)
    assert rep.D == rep.T1_adj @ rep.T1
    Z = orthodecompose(Matrix.zeros(3, 3))
    assert Z.r == 0 and Z.D.shape == (0, 0)
    assert pinv_from_blocks(Z).is_zero()


def test_pinv_from_blocks_examples(ex1, ex2):
    assert pinv_from_blocks(orthodecompose(ex2)) == moore_penrose(ex2)
    assert pinv_from_blocks(orthodecompose(Matrix.identity(3))) == Matrix.identity(3)
    assert pinv_from_blocks(orthodecompose(ex1)) == moore_penrose(ex1)
    F = pinv_from_blocks(orthodecompose(ex1.to_float()))
    assert agree(F, moore_penrose(ex1).to_float())[0]


def test_rep_criterion_examples(ex1, ex2, p1, p2):
    rc = rep_criterion(ex2.to_float(), p2)
    assert rc.holds and rc.residual <= 1e-12
    assert rep_criterion(ex2, p2).holds
    rc = rep_criterion(ex2, t)
    assert not rc.holds and rc.agree
    rc = rep_criterion(ex1, p1)
    assert rc.holds and rc.agree and rc.class_consensus is True


def test_block_form_of_poly_examples(ex1, ex2, p1, p2):
    bp = block_form_of_poly(ex2, p2)
    assert bp.top == Matrix([[2]]) and bp.bottom == Matrix([[2]])
    assert bp.ambient == Matrix.identity(2).scale(2)
    bp = block_form_of_poly(ex1, p1)
    assert bp.bottom.is_zero()
    assert bp.ambient == Matrix.diag([0, 4, 0, 0])
    bp = block_form_of_poly(Matrix.identity(2), t)
    assert bp.top == Matrix.identity(2) and bp.bottom.shape == (0, 0)
    with pytest.raises(ValueError):
        block_form_of_poly(Matrix([[0, 1], [0, 0]]), t)


def test_float_reconstruction_seeded():
    for i in range(30):
        rng = candidate_rng(11, i)
        n = int(rng.integers(1, 6, endpoint=True))
        r = int(rng.integers(0, n, endpoint=True))
        T = random_matrix(GenSpec(n, r, 3, "float"), rng)
        rep = orthodecompose(T)
        assert frobenius(pinv_from_blocks(rep) - moore_penrose(T)) <= 1e-10 * (1 + frobenius(T))
        Bm = to_np(rep.basis)
        assert np.allclose(Bm.conj().T @ Bm, np.eye(n), atol=1e-10)


@given(low_rank_exact(max_dim=4))
def test_exact_reconstruction(T):
    assert pinv_from_blocks(orthodecompose(T)) == moore_penrose(T)


@given(low_rank_exact(max_dim=4), polynomials(max_degree=4, vanish_at_zero=True))
def test_rep_equivalent_to_class(T, p):
    rc = rep_criterion(T, p)
    assert rc.agree
    assert rc.holds == is_p_hypo_EP(T, p).holds
    ii = next(c for c in is_p_EP(T, p).checks if c.name == "projector_fixes_pT_TstarT")
    assert ii.holds is not None


def test_planted_examples_satisfy_criterion():
    for i in range(20):
        T, p = planted_p_hypo_EP(candidate_rng(5, i), 2 + i % 4)
        assert block_criterion(T, p)[0]
        assert rep_criterion(T, p).holds


@given(low_rank_exact(max_dim=3), polynomials(max_degree=3))
def test_general_p_block_criterion_matches_definition(T, p):
    """Block criterion and the defining commutation agree for any p, not only p(0)=0."""
    rc = rep_criterion(T, p, strict=False)
    assert rc.holds == rc.definition == rc.gram_identity[0] == rc.adjoint_identity[0]
