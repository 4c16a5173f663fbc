"""Operator-class predicates.

Every class is decided by several independently computed characterizations
(commutation identities, projector identities, range inclusions, Douglas
constants, block criteria).  A :class:`ClassVerdict` carries all of them and
reports whether they reached consensus.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .matrix import (
    DEFAULT_TOL,
    Matrix,
    ShapeError,
    Tolerance,
    adjoint,
    agree,
    commutator,
    frobenius,
    is_hermitian,
    is_psd,
    negligible,
)
from .pinv import cauchy_dual, moore_penrose
from .polynomial import Polynomial, poly_conjugate, poly_eval
from .ranges import douglas_constant, douglas_constant_dual, range_included


class ConsensusFailure(RuntimeError):
    """Two characterizations of the same class disagreed."""

    def __init__(self, message: str, verdicts=None):
        super().__init__(message)
        self.verdicts = verdicts


class CharacterizationSkipped(UserWarning):
    """A characterization was not evaluated because its hypothesis fails."""


@dataclass(frozen=True)
class Check:
    name: str
    holds: Optional[bool]  # None when skipped
    residual: float = 0.0
    note: str = ""

    @property
    def skipped(self) -> bool:
        return self.holds is None


@dataclass(frozen=True)
class ClassVerdict:
    name: str
    checks: tuple[Check, ...]

    @property
    def evaluated(self) -> list[Check]:
        return [c for c in self.checks if not c.skipped]

    @property
    def consensus(self) -> bool:
        return len({c.holds for c in self.evaluated}) <= 1

    @property
    def holds(self) -> bool:
        """Verdict of the defining (first) characterization."""
        return bool(self.checks[0].holds)

    def __bool__(self):
        return self.holds

    def require_consensus(self) -> "ClassVerdict":
        if not self.consensus:
            detail = ", ".join(f"{c.name}={c.holds}" for c in self.evaluated)
            raise ConsensusFailure(f"{self.name}: characterizations disagree ({detail})", self)
        return self


class Operator:
    """A square matrix together with lazily cached derived matrices."""

    def __init__(self, T: Matrix, tol: Tolerance = DEFAULT_TOL, pinv: Matrix | None = None):
        if not T.is_square:
            raise ShapeError(f"operator classes need a square matrix, got {T.rows}x{T.cols}")
        self.T = T
        self.tol = tol
        self.n = T.rows
        self._pinv = pinv
        self._polys: dict = {}
        self._powers: dict = {}

    @cached_property
    def Th(self) -> Matrix:
        return adjoint(self.T)

    @cached_property
    def Tp(self) -> Matrix:
        if self._pinv is None:
            self._pinv = moore_penrose(self.T, self.tol)
        return self._pinv

    @cached_property
    def P(self) -> Matrix:
        """Projector onto R(T*)."""
        return self.Tp @ self.T

    @cached_property
    def Q(self) -> Matrix:
        """Projector onto R(T)."""
        return self.T @ self.Tp

    @cached_property
    def I(self) -> Matrix:
        return Matrix.identity(self.n, self.T.backend)

    def power(self, k: int) -> Matrix:
        if k not in self._powers:
            self._powers[k] = self.I if k == 0 else self.power(k - 1) @ self.T
        return self._powers[k]

    def poly(self, p: Polynomial) -> Matrix:
        if p not in self._polys:
            self._polys[p] = poly_eval(p, self.T)
        return self._polys[p]

    def adjoint_operator(self) -> "Operator":
        """The operator T*, reusing (T^+)* as its pseudoinverse."""
        return Operator(self.Th, self.tol, pinv=adjoint(self.Tp))

    # check builders

    def eq(self, name: str, A: Matrix, B: Matrix) -> Check:
        ok, res = agree(A, B, self.tol)
        return Check(name, ok, res)

    def zero(self, name: str, A: Matrix, scale: float = 0.0) -> Check:
        ok, res = negligible(A, self.tol, scale)
        return Check(name, ok, res)

    def included(self, name: str, A: Matrix, B: Matrix) -> Check:
        v = range_included(A, B, self.tol)
        note = "" if v.holds else f"witness column {v.witness.column}"
        return Check(name, v.holds, v.residual, note)


def as_operator(T, tol: Tolerance = DEFAULT_TOL) -> Operator:
    if isinstance(T, Operator):
        return T
    return Operator(T, tol)


def _skip(names, reason: str) -> list[Check]:
    warnings.warn(f"skipped {', '.join(names)}: {reason}", CharacterizationSkipped, stacklevel=3)
    return [Check(n, None, 0.0, reason) for n in names]


def _psd_check(name: str, A: Matrix, tol: Tolerance) -> Check:
    if not is_hermitian(A, tol):
        return Check(name, False, frobenius(A - adjoint(A)), "not hermitian")
    ok = is_psd(A, tol)
    if ok or A.rows == 0:
        return Check(name, ok, 0.0)
    w = np.linalg.eigvalsh(A.to_numpy())
    return Check(name, False, float(-w.min()), "negative eigenvalue")


NEEDS_P0 = "requires p(0)=0"


def is_EP(T, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """R(T) = R(T*)."""
    op = as_operator(T, tol)
    a1 = range_included(op.T, op.Th, op.tol)
    a2 = range_included(op.Th, op.T, op.tol)
    return ClassVerdict("EP", (
        Check("ranges_equal", a1.holds and a2.holds, a1.residual + a2.residual),
        op.zero("commutator_pinv", commutator(op.Tp, op.T), frobenius(op.P) + frobenius(op.Q)),
        op.eq("projectors_equal", op.Q, op.P),
    ))


def is_hypo_EP(T, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """[T^+, T] >= 0, equivalently R(T) in R(T*)."""
    op = as_operator(T, tol)
    return ClassVerdict("hypo-EP", (
        _psd_check("commutator_psd", op.P - op.Q, op.tol),
        op.eq("T_eq_pinvT_T2", op.T, op.Tp @ op.power(2)),
        op.included("range_in_corange", op.T, op.Th),
    ))


def is_SD(T, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """Star-dagger: T* T^+ = T^+ T*."""
    op = as_operator(T, tol)
    return ClassVerdict("SD", (op.eq("star_dagger_commute", op.Th @ op.Tp, op.Tp @ op.Th),))


def is_normal(T, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    op = as_operator(T, tol)
    return ClassVerdict("normal", (op.eq("TstarT_eq_TTstar", op.Th @ op.T, op.T @ op.Th),))


def is_p_normal(T, p: Polynomial, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    op = as_operator(T, tol)
    pT = op.poly(p)
    pTh = adjoint(pT)
    return ClassVerdict("p-normal", (
        op.eq("commutes_with_adjoint", pT @ op.Th, op.Th @ pT),
        op.eq("pT_normal", pTh @ pT, pT @ pTh),
    ))


def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def is_n_EP(T, n: int, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """T^n T^+ = T^+ T^n."""
    _check_n(n)
    op = as_operator(T, tol)
    Tn = op.power(n)
    return ClassVerdict("n-EP", (op.eq("power_commutes_pinv", Tn @ op.Tp, op.Tp @ Tn),))


def is_n_hypo_EP(T, n: int, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """R(T^n) in R(T*)."""
    _check_n(n)
    op = as_operator(T, tol)
    Tn, Tn1 = op.power(n), op.power(n + 1)
    X = op.Tp @ Tn1
    Tn_p = Tn @ op.Tp
    defining = is_p_hypo_EP(op, Polynomial.monomial(n, op.T.backend), tol, full=False).checks[0]
    return ClassVerdict("n-hypo-EP", (
        op.included("power_range_in_corange", Tn, op.Th),
        op.eq("pinv_T^(n+1)_pinv", op.Tp @ Tn1 @ op.Tp, Tn_p),
        op.eq("symmetrized", X + adjoint(X), Tn + adjoint(Tn)),
        Check("t^n_hypo_EP", defining.holds, defining.residual),
    ))


def is_p_EP(T, p: Polynomial, tol: Tolerance = DEFAULT_TOL) -> ClassVerdict:
    """p(T) T^+ = T^+ p(T)."""
    op = as_operator(T, tol)
    pT = op.poly(p)
    checks = [op.eq("commutes_pinv", pT @ op.Tp, op.Tp @ pT)]
    pbar_Th = poly_eval(poly_conjugate(p), op.Th)
    # consequences of the block criterion, valid for every p
    checks.append(_both(
        "projector_fixes_pT_TstarT",
        op.eq("", op.P @ pT @ op.Th @ op.T, pT @ op.Th @ op.T),
        op.eq("", op.Q @ pbar_Th @ op.T @ op.Th, pbar_Th @ op.T @ op.Th),
    ))
    checks.append(_both(
        "projector_fixes_pT_Tstar",
        op.eq("", op.P @ pT @ op.Th, pT @ op.Th),
        op.eq("", op.Q @ pbar_Th @ op.T, pbar_Th @ op.T),
    ))
    names = ("pinv_projector_identities", "symmetrized_identities", "dual_range_inclusions")
    if not p.vanishes_at_zero():
        checks += _skip(names, NEEDS_P0)
        return ClassVerdict("p-EP", tuple(checks))
    Y = op.Tp @ pT
    checks.append(_both(
        names[0],
        op.eq("", op.Q @ adjoint(Y), adjoint(Y)),
        op.eq("", op.P @ pT @ op.Tp, pT @ op.Tp),
    ))
    rhs = pT + pbar_Th
    A1 = pT @ op.Q
    A2 = op.Tp @ pT @ op.T
    checks.append(_both(
        names[1],
        op.eq("", A1 + adjoint(A1), rhs),
        op.eq("", A2 + adjoint(A2), rhs),
    ))
    checks.append(_both(
        names[2],
        op.included("", pT, op.Th),
        op.included("", pbar_Th, op.T),
    ))
    return ClassVerdict("p-EP", tuple(checks))


def _both(name: str, a: Check, b: Check) -> Check:
    return Check(name, bool(a.holds and b.holds), a.residual + b.residual)


P_HEP_CHARACTERIZATIONS = (
    "projector_absorbs",        # p(T) = T^+T p(T)
    "range_in_corange",         # R(p(T)) in R(T*)
    "projector_pinv",           # T^+T p(T) T^+ = p(T) T^+
    "symmetrized",              # T^+T p(T) + (..)* = p(T) + p(T)*
    "adjoint_absorbs",          # p(T)* = p(T)* T^+T
    "douglas_T",                # ||p(T)* x|| <= k ||T x||
    "douglas_cauchy_dual",      # ||p(T)* x|| <= k ||w(T) x||
    "gram_identity",            # T^+T p(T) T*T = p(T) T*T
    "adjoint_identity",         # T^+T p(T) T* = p(T) T*
    "block_T2_q_T1",            # T_2 q(T_1) = 0
)


def is_p_hypo_EP(T, p: Polynomial, tol: Tolerance = DEFAULT_TOL, full: bool = True) -> ClassVerdict:
    """T^+T p(T) = p(T) T^+T.

    The defining commutation is always evaluated.  With ``full`` the ten
    equivalent characterizations are added; they are only valid for
    p(0) = 0 and are skipped (with a warning) otherwise.
    """
    op = as_operator(T, tol)
    pT = op.poly(p)
    checks = [op.eq("projector_commutes", op.P @ pT, pT @ op.P)]
    if not full:
        return ClassVerdict("p-hypo-EP", tuple(checks))
    if not p.vanishes_at_zero():
        checks += _skip(P_HEP_CHARACTERIZATIONS, NEEDS_P0)
        return ClassVerdict("p-hypo-EP", tuple(checks))

    from .blockrep import block_criterion

    Pp = op.P @ pT
    pTh = adjoint(pT)
    k = douglas_constant(op.T, p, op.tol)
    kd = douglas_constant_dual(op.T, p, op.tol)
    C = pTh @ op.Tp
    W = cauchy_dual(op.T, op.tol)
    Cd = pTh @ moore_penrose(W, op.tol)
    _, res_k = agree(C @ op.T, pTh, op.tol)
    _, res_kd = agree(Cd @ W, pTh, op.tol)
    TsT = op.Th @ op.T
    blk = block_criterion(op.T, p, op.tol)
    checks += [
        op.eq("projector_absorbs", pT, Pp),
        op.included("range_in_corange", pT, op.Th),
        op.eq("projector_pinv", Pp @ op.Tp, pT @ op.Tp),
        op.eq("symmetrized", Pp + adjoint(Pp), pT + pTh),
        op.eq("adjoint_absorbs", pTh, pTh @ op.P),
        Check("douglas_T", k is not None, res_k, "" if k is None else f"k={k}"),
        Check("douglas_cauchy_dual", kd is not None, res_kd, "" if kd is None else f"k={kd}"),
        op.eq("gram_identity", Pp @ TsT, pT @ TsT),
        op.eq("adjoint_identity", Pp @ op.Th, pT @ op.Th),
        Check("block_T2_q_T1", blk[0], blk[1]),
    ]
    return ClassVerdict("p-hypo-EP", tuple(checks))


@dataclass
class ClassReport:
    backend: str
    tol: Tolerance
    poly: Optional[Polynomial]
    n: Optional[int]
    classes: dict[str, ClassVerdict] = field(default_factory=dict)

    @property
    def consensus(self) -> bool:
        return all(v.consensus for v in self.classes.values())

    def verdicts(self) -> dict[str, bool]:
        return {k: v.holds for k, v in self.classes.items()}

    def __getitem__(self, name: str) -> ClassVerdict:
        return self.classes[name]


def classify(T: Matrix, p: Polynomial | None = None, n: int | None = None,
             tol: Tolerance = DEFAULT_TOL, strict: bool = False) -> ClassReport:
    """Evaluate every class on T; ``strict`` raises on any disagreement."""
    op = as_operator(T, tol)
    report = ClassReport(op.T.backend, tol, p, n)
    preds: list[tuple[str, Callable[[], ClassVerdict]]] = [
        ("EP", lambda: is_EP(op, tol)),
        ("SD", lambda: is_SD(op, tol)),
        ("normal", lambda: is_normal(op, tol)),
        ("hypo-EP", lambda: is_hypo_EP(op, tol)),
    ]
    if n is not None:
        preds += [("n-EP", lambda: is_n_EP(op, n, tol)), ("n-hypo-EP", lambda: is_n_hypo_EP(op, n, tol))]
    if p is not None:
        preds += [
            ("p-normal", lambda: is_p_normal(op, p, tol)),
            ("p-EP", lambda: is_p_EP(op, p, tol)),
            ("p-hypo-EP", lambda: is_p_hypo_EP(op, p, tol)),
        ]
    for name, fn in preds:
        v = fn()
        report.classes[name] = v
        if strict:
            v.require_consensus()
    return report


def unitary_conjugation_check(T: Matrix, p: Polynomial, U: Matrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether U T U* and T get identical p-hypo-EP verdicts, per characterization."""
    ok, _ = agree(adjoint(U) @ U, Matrix.identity(U.rows, U.backend), tol)
    if not (U.is_square and ok):
        raise ValueError("U is not unitary")
    S = U @ T @ adjoint(U)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CharacterizationSkipped)
        a = is_p_hypo_EP(T, p, tol)
        b = is_p_hypo_EP(S, p, tol)
    return [c.holds for c in a.checks] == [c.holds for c in b.checks]
