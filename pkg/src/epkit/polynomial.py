"""Univariate complex polynomials and their evaluation at square matrices."""

from __future__ import annotations

from typing import Sequence

from .matrix import Matrix, ShapeError
from .scalar import EXACT, FLOAT, BackendMismatch, Gaussian, backend_of, format_scalar, to_backend


class Polynomial:
    """Ascending coefficients ``a_0 .. a_n``; trailing zeros are trimmed.

    All coefficients share one backend.  Integer and Fraction inputs are
    treated as exact.
    """

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs: Sequence, backend: str | None = None):
        coeffs = list(coeffs) or [0]
        if backend is None:
            kinds = {backend_of(c) for c in coeffs}
            if EXACT in kinds and FLOAT in kinds:
                if any(isinstance(c, Gaussian) for c in coeffs):
                    raise BackendMismatch("polynomial coefficients mix backends")
                kinds = {FLOAT}
            backend = kinds.pop()
        cs = [to_backend(c, backend) for c in coeffs]
        while len(cs) > 1 and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.coeffs, self.backend))

    @classmethod
    def monomial(cls, n: int, backend: str = EXACT) -> "Polynomial":
        return cls([0] * n + [1], backend)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def constant(self):
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and not self.coeffs[0]

    def vanishes_at_zero(self) -> bool:
        return not self.coeffs[0]

    def to_backend(self, backend: str) -> "Polynomial":
        if backend == self.backend:
            return self
        return Polynomial(self.coeffs, backend)

    def __call__(self, x):
        acc = 0 * x
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)], self.backend)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.backend != other.backend:
            raise BackendMismatch("polynomial backends differ")
        out = [to_backend(0, self.backend)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out, self.backend)

    def scale(self, c) -> "Polynomial":
        c = to_backend(c, self.backend)
        return Polynomial([c * a for a in self.coeffs], self.backend)

    def shift(self, k: int) -> "Polynomial":
        """Multiply by ``t**k``."""
        if self.is_zero():
            return self
        return Polynomial([0] * k + list(self.coeffs), self.backend)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.backend == other.backend and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.backend, self.coeffs))

    def __repr__(self):
        return f"Polynomial({render(self)!r})"

    def __str__(self):
        return render(self)


def poly_eval(p: Polynomial, M: Matrix) -> Matrix:
    """Horner evaluation ``a_n M^n + ... + a_1 M + a_0 I``."""
    if not M.is_square:
        raise ShapeError("polynomial evaluation needs a square matrix")
    if p.backend != M.backend:
        p = _match_backend(p, M.backend)
    n = M.rows
    eye = Matrix.identity(n, M.backend)
    acc = eye.scale(p.coeffs[-1])
    for a in reversed(p.coeffs[:-1]):
        acc = acc @ M + eye.scale(a)
    return acc


def _match_backend(p: Polynomial, backend: str) -> Polynomial:
    # exact coefficients may be used on float matrices (lossless direction only)
    if p.backend == EXACT and backend == FLOAT:
        return p.to_backend(FLOAT)
    raise BackendMismatch(f"{p.backend} polynomial applied to a {backend} matrix")


def poly_conjugate(p: Polynomial) -> Polynomial:
    """Coefficient-wise conjugate, so that p(M)* equals conj(p)(M*)."""
    return Polynomial([c.conjugate() for c in p.coeffs], p.backend)


def q_reduce(p: Polynomial) -> Polynomial:
    """``(p(z) - p(0)) / z``, i.e. drop ``a_0`` and shift down."""
    if p.degree == 0:
        return Polynomial([0], p.backend)
    return Polynomial(p.coeffs[1:], p.backend)


def drop_constant(p: Polynomial) -> Polynomial:
    return Polynomial([0] + list(p.coeffs[1:]), p.backend)


def p_k(p: Polynomial, k: int) -> Polynomial:
    """``t^k (p(t) - p(0))``."""
    return drop_constant(p).shift(k)


def _needs_parens(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    return "+" in body or "-" in body


def render(p: Polynomial) -> str:
    """Text in the parser grammar, highest degree first, e.g. ``t^3+4i*t^2-(1+4i)*t+2``."""
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c and p.degree > 0:
            continue
        s = format_scalar(c)
        if _needs_parens(s) and s.startswith("-"):
            s = "-(" + format_scalar(-c) + ")"
        if s.startswith("-("):
            term = s if k == 0 else f"{s}*" + ("t" if k == 1 else f"t^{k}")
        elif k == 0:
            term = f"({s})" if _needs_parens(s) else s
        else:
            mono = "t" if k == 1 else f"t^{k}"
            if s in ("1", "1.0"):
                term = mono
            elif s in ("-1", "-1.0"):
                term = "-" + mono
            elif _needs_parens(s):
                term = f"({s})*{mono}"
            else:
                term = f"{s}*{mono}"
        terms.append(term)
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out
