"""Range and kernel bases, range-inclusion verdicts, and Douglas-type
constants for the pairs (p(T), T) and (p(T), w(T))."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .matrix import (
    DEFAULT_TOL,
    Matrix,
    ShapeError,
    Tolerance,
    adjoint,
    char_poly_coeffs,
    float_rank_from_sv,
    frobenius,
    frobenius_sq,
    rank,
    rref,
)
from .pinv import cauchy_dual, moore_penrose
from .polynomial import Polynomial, poly_eval
from .scalar import ONE, ZERO

Real = Union[Fraction, float]


@dataclass(frozen=True)
class InclusionWitness:
    column: int
    residual: tuple  # (I - B B^+) applied to the offending column of A
    residual_norm: float


@dataclass(frozen=True)
class InclusionVerdict:
    holds: bool
    residual: float
    witness: Optional[InclusionWitness] = None
    constant: Optional[Real] = None

    def __bool__(self):
        return self.holds


def exact_sqrt(x: Fraction) -> Real:
    """Square root, exact when ``x`` is the square of a rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative argument")
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return math.sqrt(x)


def range_basis(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> list[list]:
    """Pivot columns of M (exact) or the leading left singular vectors (float)."""
    if M.exact:
        _, piv = rref(M)
        return [M.column(j) for j in piv]
    if M.rows == 0 or M.cols == 0:
        return []
    U, s, _ = np.linalg.svd(M.to_numpy(), full_matrices=False)
    r = float_rank_from_sv(s, M.shape, tol)
    return [list(U[:, j]) for j in range(r)]


def kernel_basis(M: Matrix, tol: Tolerance = DEFAULT_TOL) -> list[list]:
    """Null-space basis: one RREF vector per free column (exact), or the
    trailing right singular vectors (float)."""
    n = M.cols
    if M.exact:
        R, piv = rref(M)
        free = [j for j in range(n) if j not in piv]
        basis = []
        for f in free:
            v = [ZERO] * n
            v[f] = ONE
            for i, pc in enumerate(piv):
                v[pc] = -R[i, f]
            basis.append(v)
        return basis
    if M.rows == 0:
        return [list(row) for row in np.eye(n, dtype=np.complex128)]
    _, s, Vh = np.linalg.svd(M.to_numpy(), full_matrices=True)
    r = float_rank_from_sv(s, M.shape, tol)
    return [list(Vh[j].conj()) for j in range(r, n)]


def basis_matrix(basis: Sequence[Sequence], n: int, backend: str) -> Matrix:
    return Matrix.from_columns(list(basis), n, backend)


def range_included(A: Matrix, B: Matrix, tol: Tolerance = DEFAULT_TOL) -> InclusionVerdict:
    """Decide R(A) subset of R(B).

    Exact: ``rank([B | A]) == rank(B)``.  Float: the projection residual
    ``||(I - B B^+) A||_F`` against ``residual_rel * (1 + ||A||_F)``.  On
    failure the witness is the column of A with the largest residual.
    """
    if A.rows != B.rows:
        raise ShapeError(f"range inclusion needs equal row counts, got {A.rows} and {B.rows}")
    E = A - B @ (moore_penrose(B, tol) @ A)
    res = frobenius(E)
    if A.exact:
        holds = rank(B.hstack(A)) == rank(B)
    else:
        holds = res <= tol.residual_rel * (1 + frobenius(A))
    if holds:
        return InclusionVerdict(True, res)
    norms = [frobenius_sq(E.submatrix(range(E.rows), [j])) for j in range(E.cols)]
    j = max(range(E.cols), key=lambda k: norms[k])
    witness = InclusionWitness(j, tuple(E.column(j)), math.sqrt(norms[j]))
    return InclusionVerdict(False, res, witness)


def spectral_norm(M: Matrix, max_iter: int = 200, rtol: float = 1e-12) -> Real:
    """Largest singular value.

    Power iteration on the Gram matrix ``M* M``.  For exact input the result
    is exact whenever the top Gram eigenvalue is a rational square: rank <= 1
    (where spectral and Frobenius norms coincide), or when the float estimate
    snaps to a rational that is verified to be an exact root of the Gram
    characteristic polynomial.
    """
    if M.rows == 0 or M.cols == 0:
        return Fraction(0) if M.exact else 0.0
    if M.exact:
        if M.is_zero():
            return Fraction(0)
        if rank(M) == 1:
            return exact_sqrt(frobenius_sq(M))
    A = M.to_numpy()
    lam = _top_eigenvalue(A.conj().T @ A, max_iter, rtol)
    if M.exact:
        exact = _snap_eigenvalue(adjoint(M) @ M, lam)
        if exact is not None:
            return exact_sqrt(exact)
    return math.sqrt(max(lam, 0.0))


def _top_eigenvalue(G: np.ndarray, max_iter: int, rtol: float) -> float:
    if not np.any(G):
        return 0.0
    # fixed generic start: a coordinate or Gram column can be orthogonal to
    # the top eigenvector and stall on a smaller eigenvalue
    rng = np.random.default_rng(0x5EED)
    v = rng.normal(size=G.shape[0]) + 1j * rng.normal(size=G.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    converged = False
    for _ in range(max_iter):
        w = G @ v
        new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0:
            converged = True
            break
        v = w / nw
        if lam and abs(new - lam) <= rtol * abs(new):
            lam = new
            converged = True
            break
        lam = new
    lam = max(lam, float(np.real(np.vdot(v, G @ v))))
    if not converged:
        # nearly tied top eigenvalues; hand over to LAPACK
        lam = float(np.linalg.eigvalsh(G)[-1])
    return lam


def _snap_eigenvalue(G: Matrix, lam: float) -> Optional[Fraction]:
    cand = Fraction(lam).limit_denominator(10**6)
    if cand <= 0 or abs(float(cand) - lam) > 1e-8 * lam:
        return None
    chi = sum((c * cand ** (G.rows - k) for k, c in enumerate(char_poly_coeffs(G))), ZERO)
    return cand if not chi else None


def _annihilates(P: Matrix, basis: list[list], tol: Tolerance) -> bool:
    """Whether ``P v = 0`` for every basis vector (i.e. span(basis) in N(P))."""
    if not basis:
        return True
    V = basis_matrix(basis, P.cols, P.backend)
    R = P @ V
    if P.exact:
        return R.is_zero()
    return frobenius(R) <= tol.residual_rel * (1 + frobenius(P)) * max(1.0, frobenius(V))


def douglas_constant(T: Matrix, p: Polynomial, tol: Tolerance = DEFAULT_TOL) -> Optional[Real]:
    """Smallest k with ``||p(T)* x|| <= k ||T x||`` for all x, or None.

    Such a k exists iff N(T) lies in N(p(T)*), equivalently
    R(p(T)) lies in R(T*); the minimal value is ``||p(T)* T^+||_2``.
    """
    Ph = adjoint(poly_eval(p, T))
    if not _annihilates(Ph, kernel_basis(T, tol), tol):
        return None
    return spectral_norm(Ph @ moore_penrose(T, tol))


def douglas_constant_dual(T: Matrix, p: Polynomial, tol: Tolerance = DEFAULT_TOL) -> Optional[Real]:
    """Smallest k with ``||p(T)* x|| <= k ||w(T) x||`` for all x, or None,
    where w(T) is the Cauchy dual."""
    Ph = adjoint(poly_eval(p, T))
    W = cauchy_dual(T, tol)
    if not _annihilates(Ph, kernel_basis(W, tol), tol):
        return None
    return spectral_norm(Ph @ moore_penrose(W, tol))


def pointwise_constant(T: Matrix, p: Polynomial, x: Sequence, tol: Tolerance = DEFAULT_TOL) -> Optional[Real]:
    """``||s||`` for the minimal-norm solution of ``T* s = p(T) x``, or None
    when p(T) x is outside R(T*)."""
    if len(x) != T.cols:
        raise ShapeError(f"vector has length {len(x)}, expected {T.cols}")
    X = Matrix([[xi] for xi in x], T.backend)
    y = poly_eval(p, T) @ X
    Th = adjoint(T)
    if not range_included(y, Th, tol).holds:
        return None
    s = moore_penrose(Th, tol) @ y
    if T.exact:
        return exact_sqrt(frobenius_sq(s))
    return frobenius(s)
