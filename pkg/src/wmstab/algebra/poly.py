"""Dense univariate polynomials over the rationals.

Coefficients are stored in ascending degree order; the zero polynomial has
no coefficients and degree -1.  Instances are immutable and hashable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .rational import as_rational, format_rational


class RatPolynomial:
    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [as_rational(a) for a in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    # -- constructors -----------------------------------------------------

    @classmethod
    def x(cls) -> "RatPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, value) -> "RatPolynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, coefficient, degree: int) -> "RatPolynomial":
        if degree < 0:
            raise ValueError("negative degree")
        return cls([0] * degree + [coefficient])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    # -- basic accessors --------------------------------------------------

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    @property
    def lc(self) -> Fraction:
        if not self._c:
            return Fraction(0)
        return self._c[-1]

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self._c):
            return self._c[i]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _lift(other) -> "RatPolynomial":
        if isinstance(other, RatPolynomial):
            return other
        return RatPolynomial((other,))

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        n = max(len(self._c), len(o._c))
        return RatPolynomial(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RatPolynomial(-a for a in self._c)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        if not self._c or not o._c:
            return RatPolynomial()
        out = [Fraction(0)] * (len(self._c) + len(o._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(o._c):
                out[i + j] += a * b
        return RatPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = RatPolynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        d = self._lift(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dd = d.degree
        inv_lc = 1 / d.lc
        if len(rem) - 1 < dd:
            return RatPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q = rem[k + dd] * inv_lc
            quot[k] = q
            if q:
                for j, b in enumerate(d._c):
                    rem[k + j] -= q * b
        return RatPolynomial(quot), RatPolynomial(rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other) -> "RatPolynomial":
        """Exact quotient; raises ArithmeticError if ``other`` does not divide."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "RatPolynomial") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def __eq__(self, other):
        if isinstance(other, RatPolynomial):
            return self._c == other._c
        try:
            return self._c == RatPolynomial((as_rational(other),))._c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._c)

    # -- calculus and normal forms ---------------------------------------

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial(i * a for i, a in enumerate(self._c) if i)

    def monic(self) -> "RatPolynomial":
        if not self._c:
            return self
        lc = self._c[-1]
        if lc == 1:
            return self
        return RatPolynomial(a / lc for a in self._c)

    def __call__(self, x):
        acc = 0 * x
        for a in reversed(self._c):
            acc = acc * x + a
        return acc

    def scale_variable(self, factor) -> "RatPolynomial":
        """p(factor * x)."""
        f = as_rational(factor)
        return RatPolynomial(a * f**i for i, a in enumerate(self._c))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self._c)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list[str]:
        return [format_rational(a) for a in self._c]

    @classmethod
    def from_json(cls, data: Sequence) -> "RatPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(as_rational(a) for a in data)

    def __repr__(self):
        return f"RatPolynomial({self.to_json()!r})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            a = self._c[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = -a if a < 0 else a
            if i == 0:
                body = format_rational(mag)
            else:
                coef = "" if mag == 1 else format_rational(mag) + "*"
                body = coef + ("x" if i == 1 else f"x^{i}")
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


X = RatPolynomial.x()
ONE = RatPolynomial((1,))


def _require_nonconstant(p: RatPolynomial, what: str) -> None:
    if p.degree < 1:
        raise ValueError(f"{what} requires a polynomial of degree >= 1, got {p}")


def poly_gcd(p: RatPolynomial, q: RatPolynomial) -> RatPolynomial:
    """Monic greatest common divisor (Euclid over Q)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = p.monic(), q.monic()
    while b:
        a, b = b, (a % b).monic()
    return a.monic()


def repeated_root_part(p: RatPolynomial) -> RatPolynomial:
    """gcd(p, p'): each repeated root of p appears here, each simple root does not."""
    _require_nonconstant(p, "repeated_root_part")
    return poly_gcd(p, p.derivative())


def radical(p: RatPolynomial) -> RatPolynomial:
    """Squarefree part p / gcd(p, p'), monic, with the same roots as p."""
    _require_nonconstant(p, "radical")
    return p.exquo(repeated_root_part(p)).monic()


def is_squarefree(p: RatPolynomial) -> bool:
    if p.degree < 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def squarefree_decomposition(p: RatPolynomial) -> list[tuple[RatPolynomial, int]]:
    """Yun's algorithm: monic p = prod f_i^i with f_i squarefree and coprime."""
    _require_nonconstant(p, "squarefree_decomposition")
    p = p.monic()
    out: list[tuple[RatPolynomial, int]] = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exquo(a)
    c = dp.exquo(a)
    d = c - b.derivative()
    i = 1
    while b.degree >= 1:
        a = poly_gcd(b, d)
        if a.degree >= 1:
            out.append((a, i))
        b = b.exquo(a)
        c = d.exquo(a)
        d = c - b.derivative()
        i += 1
    return out
