"""Complex scalars for the two backends.

The exact backend uses :class:`Gaussian`, a complex number whose real and
imaginary parts are :class:`fractions.Fraction`.  The float backend uses the
builtin :class:`complex`.  Mixing the two raises :class:`BackendMismatch`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)


class BackendMismatch(TypeError):
    """Raised when exact and float values meet in one operation."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise BackendMismatch(f"cannot use {type(x).__name__} in exact arithmetic")


class Gaussian:
    """Gaussian rational ``re + im*i`` with exact fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian is immutable")

    def __reduce__(self):
        return (Gaussian, (self.re, self.im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "Gaussian":
        g = object.__new__(cls)
        object.__setattr__(g, "re", re)
        object.__setattr__(g, "im", im)
        return g

    @classmethod
    def coerce(cls, x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        return cls(x)

    def conjugate(self) -> "Gaussian":
        return Gaussian._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return Gaussian._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return Gaussian._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        if o.im == 0:
            return Gaussian._raw(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return Gaussian._raw(self.re * o.re, self.re * o.im)
        return Gaussian._raw(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def inverse(self) -> "Gaussian":
        d = self.abs2()
        if d == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian._raw(self.re / d, -self.im / d)

    def __neg__(self):
        return Gaussian._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Gaussian({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_exact(self)


def _coerce_operand(x):
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, (int, Fraction)):
        return Gaussian(x)
    if isinstance(x, (float, complex)):
        raise BackendMismatch("exact and float scalars cannot be mixed")
    return NotImplemented


Scalar = Union[Gaussian, complex]

ZERO = Gaussian(0)
ONE = Gaussian(1)
I = Gaussian(0, 1)


def backend_of(x) -> str:
    if isinstance(x, Gaussian):
        return EXACT
    if isinstance(x, (float, complex)):
        return FLOAT
    if isinstance(x, (int, Fraction)):
        return EXACT
    raise TypeError(f"not a scalar: {x!r}")


def to_backend(x, backend: str):
    """Lift a literal (int, Fraction, Gaussian, float, complex) into ``backend``.

    Only lossless directions are allowed: integers and fractions go to either
    backend, floats never become exact.
    """
    if backend == EXACT:
        if isinstance(x, (float, complex)):
            raise BackendMismatch("refusing to convert a float into the exact backend")
        return Gaussian.coerce(x)
    if backend == FLOAT:
        if isinstance(x, Gaussian):
            return complex(x)
        return complex(x)
    raise ValueError(f"unknown backend {backend!r}")


def _format_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_exact(g: Gaussian) -> str:
    """Render in the parser grammar, e.g. ``-1/5``, ``4i``, ``1+4i``, ``-1/2-i``."""
    if g.im == 0:
        return _format_fraction(g.re)
    if g.im == 1:
        imag = "i"
    elif g.im == -1:
        imag = "-i"
    else:
        imag = _format_fraction(g.im) + "i"
    if g.re == 0:
        return imag
    sign = "" if imag.startswith("-") else "+"
    return f"{_format_fraction(g.re)}{sign}{imag}"


def format_float(z: complex) -> str:
    """Render a float scalar with ``repr`` precision so it reparses losslessly."""
    re, im = float(z.real), float(z.imag)

    def r(v: float) -> str:
        s = repr(v)
        if "e" not in s and "." not in s and "inf" not in s and "nan" not in s:
            s += ".0"
        return s

    if im == 0:
        return r(re)
    imag = r(abs(im)) + "i"
    if re == 0:
        return ("-" if math.copysign(1.0, im) < 0 else "") + imag
    return f"{r(re)}{'-' if im < 0 else '+'}{imag}"


def format_scalar(x) -> str:
    if isinstance(x, Gaussian):
        return format_exact(x)
    return format_float(complex(x))
