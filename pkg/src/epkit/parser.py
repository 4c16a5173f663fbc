"""Recursive-descent parser for complex scalars and polynomials in ``t``.

The grammar is in ``docs/grammar.md``.  Integer and fraction literals give
exact Gaussian rationals; decimal literals give floats.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import Polynomial
from .scalar import EXACT, FLOAT, Gaussian


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}" + (f" in {text!r}" if text else ""))
        self.position = position


_NUMBER = re.compile(r"(?P<dec>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)|(?P<int>\d+)(?:\s*/\s*(?P<den>\d+))?")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.saw_decimal = False
        self.saw_fraction = False

    # lexing helpers

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.accept(ch):
            got = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, got {got!r}")

    def fail(self, message: str):
        raise ParseError(message, self.pos, self.text)

    def sign(self) -> int:
        if self.accept("-"):
            return -1
        self.accept("+")
        return 1

    def at_end(self) -> bool:
        return self.peek() == ""

    # scalars

    def number(self):
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        if m.group("dec"):
            self.saw_decimal = True
            value = float(m.group("dec"))
        else:
            if m.group("den") is not None:
                if int(m.group("den")) == 0:
                    self.fail("zero denominator")
                self.saw_fraction = True
                value = Fraction(int(m.group("int")), int(m.group("den")))
            else:
                value = Fraction(int(m.group("int")))
        self._check_mix()
        return value

    def _check_mix(self):
        if self.saw_decimal and self.saw_fraction:
            self.fail("mixed exact and decimal literals")

    def imag_unit(self) -> bool:
        # 'i' alone or directly before the variable, as in "4it^2"
        self.skip()
        nxt = self.text[self.pos + 1:self.pos + 2]
        after = self.text[self.pos + 2:self.pos + 3]
        if self.text.startswith("i", self.pos) and (not nxt.isalpha() or (nxt == "t" and not after.isalpha())):
            self.pos += 1
            return True
        return False

    def scalar_atom(self):
        """number ['i'] | 'i' | '(' scalar ')'  ->  (re, im)"""
        if self.accept("("):
            value = self.scalar_sum()
            self.expect(")")
            return value
        num = self.number()
        if num is None:
            if self.imag_unit():
                return (0, 1)
            return None
        if self.imag_unit():
            return (0, num)
        return (num, 0)

    def scalar_sum(self):
        sign = self.sign()
        first = self.scalar_atom()
        if first is None:
            self.fail("expected a number")
        re_, im_ = sign * first[0], sign * first[1]
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            term = self.scalar_atom()
            if term is None:
                self.fail("expected a number")
            re_ += sign * term[0]
            im_ += sign * term[1]
        return (re_, im_)

    # polynomials

    def monomial(self):
        """'t' ['^' nat | '^{' nat '}']  ->  degree, or None"""
        self.skip()
        ch = self.peek()
        if ch == "t" and not self.text[self.pos + 1:self.pos + 2].isalpha():
            self.pos += 1
            if self.accept("^"):
                braced = self.accept("{")
                self.skip()
                m = re.compile(r"\d+").match(self.text, self.pos)
                if not m:
                    self.fail("expected an exponent")
                self.pos = m.end()
                if braced:
                    self.expect("}")
                return int(m.group())
            return 1
        if ch.isalpha() and ch != "i":
            self.fail(f"unknown variable {ch!r}; only t is allowed")
        return None

    def term(self):
        """[coefficient] ['*'] [monomial]  ->  (degree, (re, im))"""
        coeff = self.scalar_atom()
        star = coeff is not None and self.accept("*")
        deg = self.monomial()
        if star and deg is None:
            self.fail("expected t after '*'")
        if coeff is None and deg is None:
            got = self.peek() or "end of input"
            self.fail(f"expected a term, got {got!r}")
        if deg is None:
            deg = 0
        elif self.peek() == "*":
            self.pos += 1
            tail = self.scalar_atom()
            if tail is None:
                self.fail("expected a coefficient after '*'")
            coeff = _mul(coeff or (1, 0), tail)
        return deg, coeff or (1, 0)

    def polynomial(self):
        self.skip()
        m = re.compile(r"[A-Za-z]\w*\s*\(\s*t\s*\)\s*=").match(self.text, self.pos)
        if m:
            self.pos = m.end()
        terms = []
        sign = self.sign()
        deg, c = self.term()
        terms.append((deg, (sign * c[0], sign * c[1])))
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            deg, c = self.term()
            terms.append((deg, (sign * c[0], sign * c[1])))
        return terms


def _mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _make(value, decimal: bool):
    re_, im_ = value
    if decimal:
        return complex(float(re_), float(im_))
    return Gaussian(re_, im_)


def parse_scalar(text: str):
    """Parse ``-1/5``, ``1+4i``, ``4i``, ``0.25``, ... into a Gaussian or complex."""
    p = _Parser(text)
    value = p.scalar_sum()
    if not p.at_end():
        p.fail(f"unexpected {p.peek()!r}")
    return _make(value, p.saw_decimal)


def parse_polynomial(text: str) -> Polynomial:
    """Parse e.g. ``t^3+4i*t^2-(1+4i)*t+2`` (or ``4it^2``, ``t^{3}``) into ascending coefficients."""
    p = _Parser(text)
    terms = p.polynomial()
    if not p.at_end():
        p.fail(f"unexpected {p.peek()!r}")
    deg = max(d for d, _ in terms)
    acc = [(Fraction(0), Fraction(0))] * (deg + 1) if not p.saw_decimal else [(0.0, 0.0)] * (deg + 1)
    for d, (a, b) in terms:
        acc[d] = (acc[d][0] + a, acc[d][1] + b)
    backend = FLOAT if p.saw_decimal else EXACT
    return Polynomial([_make(v, p.saw_decimal) for v in acc], backend)
