"""Implication audit: evaluate the hypothesis of each structural result and,
when it holds, confirm the conclusion.

Rows are either implications (``vacuous`` when the hypothesis fails) or
equivalences (hypothesis always true, conclusion = both sides agree).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from .classes import (
    CharacterizationSkipped,
    Operator,
    as_operator,
    is_EP,
    is_hypo_EP,
    is_n_EP,
    is_n_hypo_EP,
    is_p_EP,
    is_p_hypo_EP,
    is_SD,
)
from .matrix import DEFAULT_TOL, Matrix, Tolerance, commutator
from .polynomial import Polynomial, p_k, poly_conjugate


class AuditViolation(RuntimeError):
    def __init__(self, report: "AuditReport"):
        row = report.violation
        super().__init__(f"implication {row.name} violated")
        self.report = report


@dataclass(frozen=True)
class AuditRow:
    name: str
    hypothesis: Optional[bool]  # None: not applicable to this (T, p)
    conclusion: Optional[bool]
    status: str  # pass | fail | vacuous | n/a


@dataclass
class AuditReport:
    T: Matrix
    p: Polynomial
    n: int
    rows: list[AuditRow] = field(default_factory=list)
    violation: Optional[AuditRow] = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.rows)

    def row(self, name: str) -> AuditRow:
        return next(r for r in self.rows if r.name == name)


class _Stop(Exception):
    pass


def _first_nonzero_power(p: Polynomial) -> Optional[int]:
    return next((j for j in range(1, len(p.coeffs)) if p.coeffs[j]), None)


def implication_audit(T, p: Polynomial, n: int = 3, tol: Tolerance = DEFAULT_TOL,
                      strict: bool = False) -> AuditReport:
    """Run every implication on (T, p); powers and shifts range over 1..n and 1..3.

    The first failing row stops the audit; with ``strict`` it raises
    :class:`AuditViolation` carrying the report.
    """
    op = as_operator(T, tol)
    report = AuditReport(op.T, p, n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CharacterizationSkipped)
        try:
            _run(op, p, n, tol, report)
        except _Stop:
            if strict:
                raise AuditViolation(report) from None
    return report


def _run(op: Operator, p: Polynomial, n: int, tol: Tolerance, report: AuditReport):
    def implies(name: str, hyp: Callable[[], bool], concl: Callable[[], bool]):
        h = bool(hyp())
        if not h:
            report.rows.append(AuditRow(name, False, None, "vacuous"))
            return
        c = bool(concl())
        row = AuditRow(name, True, c, "pass" if c else "fail")
        report.rows.append(row)
        if not c:
            report.violation = row
            raise _Stop

    def equiv(name: str, lhs: Callable[[], bool], rhs: Callable[[], bool]):
        implies(name, lambda: True, lambda: lhs() == rhs())

    def not_applicable(name: str):
        report.rows.append(AuditRow(name, None, None, "n/a"))

    adj = op.adjoint_operator()
    pbar = poly_conjugate(p)
    p0 = p.vanishes_at_zero()
    cache: dict = {}

    def memo(key, fn):
        if key not in cache:
            cache[key] = fn()
        return cache[key]

    EP = lambda: memo("EP", lambda: is_EP(op, tol).holds)
    HEP = lambda: memo("HEP", lambda: is_hypo_EP(op, tol).holds)
    pEP = lambda: memo("pEP", lambda: is_p_EP(op, p, tol).holds)
    pHEP = lambda: memo("pHEP", lambda: is_p_hypo_EP(op, p, tol, full=False).holds)
    nEP = lambda m: memo(("nEP", m), lambda: is_n_EP(op, m, tol).holds)
    nHEP = lambda m: memo(("nHEP", m), lambda: is_n_hypo_EP(op, m, tol).checks[0].holds)
    adj_HEP = lambda: is_hypo_EP(adj, tol).holds
    adj_nHEP = lambda m: is_n_hypo_EP(adj, m, tol).checks[0].holds
    adj_pbar_HEP = lambda: is_p_hypo_EP(adj, pbar, tol, full=False).holds
    adj_pbar_EP = lambda: is_p_EP(adj, pbar, tol).holds
    pT_op = lambda: memo("pT_op", lambda: Operator(op.poly(p), tol))
    pT_EP = lambda: memo("pT_EP", lambda: is_EP(pT_op(), tol).holds)

    implies("EP=>p-EP", EP, pEP)

    k = _first_nonzero_power(p)
    for m in range(1, n + 1):
        if k is None or m > k:
            not_applicable(f"{m}-EP=>p-EP[m<=k]")
        else:
            implies(f"{m}-EP=>p-EP[m<=k]", lambda m=m: nEP(m), pEP)
    for m in range(1, n + 1):
        for j in range(1, 4):
            implies(f"n-EP=>(n+k)-EP[n={m},k={j}]", lambda m=m: nEP(m), lambda m=m, j=j: nEP(m + j))

    equiv("p-EP<=>adj-pbar-EP", pEP, adj_pbar_EP)
    implies("HEP=>p-HEP", HEP, pHEP)
    for j in range(1, 5):
        implies(f"p-HEP=>p_k-HEP[k={j}]", pHEP,
                lambda j=j: is_p_hypo_EP(op, p_k(p, j), tol, full=False).holds)
    for m in range(1, n + 1):
        for j in range(1, 4):
            implies(f"n-HEP=>(n+k)-HEP[n={m},k={j}]", lambda m=m: nHEP(m), lambda m=m, j=j: nHEP(m + j))

    equiv("EP<=>HEP&adj-HEP", EP, lambda: HEP() and adj_HEP())
    for m in range(1, n + 1):
        equiv(f"n-EP<=>n-HEP&adj-n-HEP[n={m}]", lambda m=m: nEP(m),
              lambda m=m: nHEP(m) and adj_nHEP(m))

    p0_rows = ["[P,p(T)+T^+]=0=>p-HEP", "[P,p(T)+T*]=0=>p-HEP", "p-HEP&[T,p(T)T^+]=0=>p-EP", "p-HEP&[Q,p(T)+T^+]=0=>p-EP", "p-HEP&[Q,p(T)+T*]=0=>p-EP",
               "p(T)-EP=>p-EP", "SD=>(p-EP<=>p(T)-EP)", "p-EP<=>p-HEP&adj-pbar-HEP"]
    if not p0:
        for name in p0_rows:
            not_applicable(name)
        return

    pT = op.poly(p)
    zero = lambda A: op.zero("", A).holds
    implies("[P,p(T)+T^+]=0=>p-HEP", lambda: zero(commutator(op.P, pT + op.Tp)), pHEP)
    implies("[P,p(T)+T*]=0=>p-HEP", lambda: zero(commutator(op.P, pT + op.Th)), pHEP)
    implies("p-HEP&[T,p(T)T^+]=0=>p-EP", lambda: pHEP() and zero(commutator(op.T, pT @ op.Tp)), pEP)
    implies("p-HEP&[Q,p(T)+T^+]=0=>p-EP", lambda: pHEP() and zero(commutator(op.Q, pT + op.Tp)), pEP)
    implies("p-HEP&[Q,p(T)+T*]=0=>p-EP", lambda: pHEP() and zero(commutator(op.Q, pT + op.Th)), pEP)
    implies("p(T)-EP=>p-EP", pT_EP, pEP)
    implies("SD=>(p-EP<=>p(T)-EP)", lambda: is_SD(op, tol).holds, lambda: pEP() == pT_EP())
    equiv("p-EP<=>p-HEP&adj-pbar-HEP", pEP, lambda: pHEP() and adj_pbar_HEP())
