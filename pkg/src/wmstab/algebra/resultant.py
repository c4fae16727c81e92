"""Resultants by the subresultant pseudo-remainder sequence.

The kernel works on coefficient lists over any integral domain whose
elements support ``+ - *`` and an exact division; here that means
``Fraction`` (univariate resultants) and ``RatPolynomial`` (resultants in y
of bivariate polynomials represented as lists of polynomials in x).
"""

from __future__ import annotations

from fractions import Fraction

from .poly import RatPolynomial


def _exact_div(a, b):
    if isinstance(a, RatPolynomial) or isinstance(b, RatPolynomial):
        return RatPolynomial._lift(a).exquo(RatPolynomial._lift(b))
    return Fraction(a) / b


def _is_zero(a) -> bool:
    return not a


def _trim(c: list) -> list:
    while c and _is_zero(c[-1]):
        c.pop()
    return c


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b, fraction-free."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [lb * x for x in r]
        for j, bj in enumerate(b):
            r[shift + j] = r[shift + j] - lr * bj
        r.pop()
        _trim(r)
        e -= 1
    if e > 0:
        f = lb**e
        r = [f * x for x in r]
    return _trim(r)


def subresultant_resultant(a: list, b: list, one=Fraction(1)):
    """Res(a, b) for coefficient lists (ascending), leading coefficients nonzero."""
    a = _trim(list(a))
    b = _trim(list(b))
    if not a or not b:
        raise ValueError("resultant of a zero polynomial")
    da, db = len(a) - 1, len(b) - 1
    sign = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            sign = -sign
    if db == 0:
        return sign * b[0] ** da
    g = one
    h = one
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem(a, b)
        a = b
        if not r:
            return 0 * one
        div = g * h**delta
        b = [_exact_div(x, div) for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exact_div(g**delta, h ** (delta - 1))
        if len(b) == 1:
            da = len(a) - 1
            lb = b[0]
            if da == 0:
                return sign * h
            res = _exact_div(lb**da, h ** (da - 1)) if da > 1 else lb
            return sign * res


def resultant(p: RatPolynomial, q: RatPolynomial) -> Fraction:
    """Res(p, q) = lc(p)^deg q * prod over roots a of p of q(a)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    return Fraction(subresultant_resultant(list(p.coefficients), list(q.coefficients)))


def resultant_in_y(a: list[RatPolynomial], b: list[RatPolynomial]) -> RatPolynomial:
    """Res_y of two polynomials in y whose coefficients are polynomials in x."""
    one = RatPolynomial((1,))
    res = subresultant_resultant(a, b, one=one)
    return RatPolynomial._lift(res)
