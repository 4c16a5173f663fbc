"""Moore-Penrose inverses, the orthogonal projectors they induce, and the
Cauchy dual ``T (T*T)^+``."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .matrix import (
    DEFAULT_TOL,
    Matrix,
    ShapeError,
    Tolerance,
    adjoint,
    float_rank_from_sv,
    frobenius,
    inverse,
    rref,
)


class FullRankFactorization(NamedTuple):
    F: Matrix  # m x r, full column rank
    G: Matrix  # r x n, full row rank
    r: int


class PenroseResiduals(NamedTuple):
    """Frobenius norms of TXT - T, XTX - X, (XT)* - XT and (TX)* - TX."""

    txt: float
    xtx: float
    xt_hermitian: float
    tx_hermitian: float

    def max(self) -> float:
        return max(self)


def full_rank_factorization(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> FullRankFactorization:
    """Split ``M = F G`` with F the pivot columns of M and G the nonzero RREF rows.

    For float input the factors come from the truncated SVD instead
    (``F = U_r S_r``, ``G = V_r*``).  The zero matrix gives ``r = 0`` and
    empty (m x 0, 0 x n) factors.
    """
    m, n = M.shape
    if M.exact:
        R, piv = rref(M)
        r = len(piv)
        F = M.submatrix(range(m), piv)
        G = R.submatrix(range(r), range(n))
        return FullRankFactorization(F, G, r)
    U, s, Vh = np.linalg.svd(M.to_numpy(), full_matrices=False)
    r = float_rank_from_sv(s, M.shape, tol)
    F = Matrix.from_array(U[:, :r] * s[:r])
    G = Matrix.from_array(Vh[:r, :])
    return FullRankFactorization(F, G, r)


def moore_penrose(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> Matrix:
    """The Moore-Penrose inverse.

    Exact: ``G* (G G*)^-1 (F* F)^-1 F*`` from the full-rank factorization,
    where both inverted Gram matrices are r x r and nonsingular.  Float:
    truncated SVD, keeping singular values strictly above the rank cutoff.
    """
    m, n = M.shape
    if M.exact:
        F, G, r = full_rank_factorization(M, tol)
        if r == 0:
            return Matrix.zeros(n, m)
        Fh, Gh = adjoint(F), adjoint(G)
        return Gh @ inverse(G @ Gh) @ inverse(Fh @ F) @ Fh
    if m == 0 or n == 0:
        return Matrix.zeros(n, m, M.backend)
    U, s, Vh = np.linalg.svd(M.to_numpy(), full_matrices=False)
    r = float_rank_from_sv(s, M.shape, tol)
    if r == 0:
        return Matrix.zeros(n, m, M.backend)
    X = (Vh[:r, :].conj().T / s[:r]) @ U[:, :r].conj().T
    return Matrix.from_array(X)


def penrose_residuals(T: Matrix, X: Matrix) -> PenroseResiduals:
    if X.shape != (T.cols, T.rows):
        raise ShapeError(f"candidate inverse must be {T.cols}x{T.rows}, got {X.rows}x{X.cols}")
    XT = X @ T
    TX = T @ X
    return PenroseResiduals(
        frobenius(T @ XT - T),
        frobenius(XT @ X - X),
        frobenius(adjoint(XT) - XT),
        frobenius(adjoint(TX) - TX),
    )


def range_projector(T: Matrix, tol: Tolerance = DEFAULT_TOL) -> Matrix:
    """Orthogonal projector onto R(T), namely ``T T^+``."""
    return T @ moore_penrose(T, tol)


def corange_projector(T: Matrix, tol: Tolerance = DEFAULT_TOL) -> Matrix:
    """Orthogonal projector onto R(T*), namely ``T^+ T``."""
    return moore_penrose(T, tol) @ T


def cauchy_dual(T: Matrix, tol: Tolerance = DEFAULT_TOL) -> Matrix:
    return T @ moore_penrose(adjoint(T) @ T, tol)
