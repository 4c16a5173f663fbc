"""Block representation of T with respect to H = R(T*) (+) N(T).

In that decomposition T = [[T1, 0], [T2, 0]], D = T1*T1 + T2*T2 is
invertible, and T^+ = [[D^-1 T1*, D^-1 T2*], [0, 0]].

Exact mode keeps orthogonal but unnormalized bases (normalizing would need
square roots), so coordinate adjoints are corrected by the Gram metrics:
for X mapping a space with Gram g_in into one with Gram g_out, the adjoint
in coordinates is ``g_in^-1 X^H g_out``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .matrix import (
    DEFAULT_TOL,
    Matrix,
    ShapeError,
    Tolerance,
    adjoint,
    agree,
    float_rank_from_sv,
    frobenius,
    inverse,
    negligible,
)
from .polynomial import Polynomial, poly_eval, q_reduce
from .ranges import kernel_basis, range_basis
from .scalar import ZERO, to_backend

log = logging.getLogger(__name__)


class SingularBlock(ValueError):
    """D is singular: the rank decision and the decomposition disagree."""


@dataclass(frozen=True)
class BlockRep:
    T: Matrix
    basis: Matrix  # columns: corange basis, then kernel basis
    r: int
    gram: tuple  # squared norms of the basis columns
    T1: Matrix
    T2: Matrix
    D: Matrix
    leak: float  # norm of the coordinate block that should vanish

    @property
    def n(self) -> int:
        return self.T.rows

    @property
    def backend(self) -> str:
        return self.T.backend

    @property
    def corange_basis(self) -> Matrix:
        return self.basis.submatrix(range(self.n), range(self.r))

    @property
    def kernel_basis(self) -> Matrix:
        return self.basis.submatrix(range(self.n), range(self.r, self.n))

    @property
    def gram_corange(self) -> Matrix:
        return _diag(self.gram[: self.r], self.backend)

    @property
    def gram_kernel(self) -> Matrix:
        return _diag(self.gram[self.r:], self.backend)

    def coord_adjoint(self, X: Matrix, g_in: Matrix, g_out: Matrix) -> Matrix:
        return inverse(g_in) @ adjoint(X) @ g_out

    @property
    def T1_adj(self) -> Matrix:
        return self.coord_adjoint(self.T1, self.gram_corange, self.gram_corange)

    @property
    def T2_adj(self) -> Matrix:
        return self.coord_adjoint(self.T2, self.gram_corange, self.gram_kernel)

    def to_ambient(self, C: Matrix) -> Matrix:
        """Map a coordinate matrix back: ``B C B^-1`` with ``B^-1 = G^-1 B^H``."""
        Binv = inverse(_diag(self.gram, self.backend)) @ adjoint(self.basis)
        return self.basis @ C @ Binv


def _diag(values, backend: str) -> Matrix:
    n = len(values)
    if n == 0:
        return Matrix.zeros(0, 0, backend)
    return Matrix.diag(list(values), backend)


def _gram_schmidt(vectors: list[list]) -> list[list]:
    """Orthogonalize without normalizing, so Gaussian rationals stay rational."""
    out: list[list] = []
    norms = []
    for v in vectors:
        w = list(v)
        for u, nu in zip(out, norms):
            c = sum((ui.conjugate() * wi for ui, wi in zip(u, w)), ZERO) / nu
            if c:
                w = [wi - c * ui for wi, ui in zip(w, u)]
        nw = sum((x.abs2() for x in w), 0)
        if nw:
            out.append(w)
            norms.append(nw)
    return out


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the first entry of (near) maximal modulus is real positive."""
    mags = np.abs(v)
    j = int(np.argmax(mags >= mags.max() - 1e-12))
    return v * (abs(v[j]) / v[j])


def orthodecompose(T: Matrix, tol: Tolerance = DEFAULT_TOL) -> BlockRep:
    if not T.is_square:
        raise ShapeError("block representation needs a square matrix")
    n = T.rows
    if T.exact:
        U = _gram_schmidt(range_basis(adjoint(T), tol))
        V = _gram_schmidt(kernel_basis(T, tol))
        r = len(U)
        basis = Matrix.from_columns(U + V, n, T.backend)
        gram = tuple(sum((x.abs2() for x in v), 0) for v in U + V)
    else:
        _, s, Vh = np.linalg.svd(T.to_numpy())
        r = float_rank_from_sv(s, T.shape, tol)
        cols = [_fix_phase(Vh[j].conj()) for j in range(n)]
        basis = Matrix.from_array(np.column_stack(cols))
        gram = (1.0,) * n
    C = inverse(_diag(gram, T.backend)) @ adjoint(basis) @ T @ basis
    T1 = C.submatrix(range(r), range(r))
    T2 = C.submatrix(range(r, n), range(r))
    leak = frobenius(C.submatrix(range(n), range(r, n)))
    rep = BlockRep(T, basis, r, gram, T1, T2, T1, leak)
    D = rep.T1_adj @ T1 + rep.T2_adj @ T2
    return BlockRep(T, basis, r, gram, T1, T2, D, leak)


def pinv_from_blocks(rep: BlockRep) -> Matrix:
    """Assemble ``[[D^-1 T1*, D^-1 T2*], [0, 0]]`` and return it in ambient coordinates."""
    n, r = rep.n, rep.r
    if r == 0:
        return Matrix.zeros(n, n, rep.backend)
    try:
        Dinv = inverse(rep.D)
    except (ZeroDivisionError, np.linalg.LinAlgError) as e:
        raise SingularBlock("D is singular") from e
    top = (Dinv @ rep.T1_adj).hstack(Dinv @ rep.T2_adj) if n > r else Dinv @ rep.T1_adj
    C = top.vstack(Matrix.zeros(n - r, n, rep.backend)) if n > r else top
    return rep.to_ambient(C)


def block_criterion(T: Matrix, p: Polynomial, tol: Tolerance = DEFAULT_TOL,
                    rep: BlockRep | None = None) -> tuple[bool, float]:
    """``T2 q(T1) = 0`` with q(z) = (p(z) - p(0)) / z."""
    rep = rep or orthodecompose(T, tol)
    if rep.r == 0 or rep.r == rep.n:
        return True, 0.0
    qT1 = poly_eval(q_reduce(p), rep.T1)
    X = rep.T2 @ qT1
    return negligible(X, tol, frobenius(rep.T2) * frobenius(qT1))


@dataclass(frozen=True)
class RepCriterion:
    holds: bool
    residual: float
    gram_identity: tuple[bool, float]     # T^+T p(T) T*T = p(T) T*T
    adjoint_identity: tuple[bool, float]  # T^+T p(T) T* = p(T) T*
    definition: bool                      # T^+T p(T) = p(T) T^+T
    class_consensus: Optional[bool]       # is_p_hypo_EP consensus verdict, p(0)=0 only

    @property
    def agree(self) -> bool:
        vals = {self.holds, self.gram_identity[0], self.adjoint_identity[0], self.definition}
        if self.class_consensus is not None:
            vals.add(self.class_consensus)
        return len(vals) == 1


def rep_criterion(T: Matrix, p: Polynomial, tol: Tolerance = DEFAULT_TOL, strict: bool = True) -> RepCriterion:
    """Block criterion together with the two ambient identities it is
    equivalent to, cross-checked against the p-hypo-EP classifier.

    For p(0) != 0 the comparison with the classifier's equivalent
    characterizations is not asserted; the observation is only logged.
    """
    from .classes import ConsensusFailure, as_operator, is_p_hypo_EP

    op = as_operator(T, tol)
    holds, res = block_criterion(T, p, tol)
    pT = op.poly(p)
    Pp = op.P @ pT
    TsT = op.Th @ op.T
    g = agree(Pp @ TsT, pT @ TsT, tol)
    a = agree(Pp @ op.Th, pT @ op.Th, tol)
    d = agree(Pp, pT @ op.P, tol)[0]
    consensus = None
    if p.vanishes_at_zero():
        v = is_p_hypo_EP(op, p, tol)
        consensus = v.holds if v.consensus else None
        if not v.consensus and strict:
            raise ConsensusFailure("p-hypo-EP characterizations disagree", v)
    else:
        log.info("rep criterion for p(0)!=0: block=%s gram=%s adjoint=%s definition=%s",
                 holds, g[0], a[0], d)
    out = RepCriterion(holds, res, g, a, d, consensus)
    if strict and p.vanishes_at_zero() and not out.agree:
        raise ConsensusFailure("block criterion disagrees with the p-hypo-EP classifier", out)
    return out


@dataclass(frozen=True)
class BlockPoly:
    top: Matrix      # p(T1) on R(T*)
    bottom: Matrix   # a0 I on N(T)
    ambient: Matrix
    residual: float


def block_form_of_poly(T: Matrix, p: Polynomial, tol: Tolerance = DEFAULT_TOL) -> BlockPoly:
    """For p-hypo-EP T, p(T) = diag(p(T1), a0 I) in the block decomposition."""
    rep = orthodecompose(T, tol)
    ok, _ = block_criterion(T, p, tol, rep)
    if not ok:
        raise ValueError("T is not p-hypo-EP; p(T) is not block diagonal")
    n, r = rep.n, rep.r
    top = poly_eval(p, rep.T1)
    bottom = Matrix.identity(n - r, rep.backend).scale(to_backend(p.constant, rep.backend))
    C = _blockdiag(top, bottom, rep.backend)
    ambient = rep.to_ambient(C)
    same, res = agree(ambient, poly_eval(p, T), tol)
    if not same:
        raise RuntimeError(f"block form of p(T) does not reassemble (residual {res:g})")
    return BlockPoly(top, bottom, ambient, res)


def _blockdiag(A: Matrix, B: Matrix, backend: str) -> Matrix:
    if A.rows == 0:
        return B
    if B.rows == 0:
        return A
    top = A.hstack(Matrix.zeros(A.rows, B.cols, backend))
    bot = Matrix.zeros(B.rows, A.cols, backend).hstack(B)
    return top.vstack(bot)
