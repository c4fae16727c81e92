from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Iterable, Sequence

from ..algebra import RatPolynomial, as_rational, format_rational


@dataclass(frozen=True)
class RecurrenceSpec:
    """a_{n+d} = b_1 a_{n+d-1} + ... + b_d a_n with initial terms a_0..a_{d-1}."""

    coefficients: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(as_rational(b) for b in self.coefficients))
        object.__setattr__(self, "initial", tuple(as_rational(a) for a in self.initial))
        if len(self.coefficients) < 1:
            raise ValueError("recurrence order must be >= 1")
        if len(self.initial) != len(self.coefficients):
            raise ValueError(
                f"need {len(self.coefficients)} initial terms, got {len(self.initial)}"
            )
        if self.coefficients[-1] == 0:
            raise ValueError("order not minimal; constant term vanishes")

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def to_json(self) -> dict:
        return {
            "kind": "recurrence",
            "coefficients": [format_rational(b) for b in self.coefficients],
            "initial": [format_rational(a) for a in self.initial],
        }

    def __str__(self):
        b = ",".join(format_rational(x) for x in self.coefficients)
        a = ",".join(format_rational(x) for x in self.initial)
        return f"LRR(({b});({a}))"


@dataclass(frozen=True)
class SequencePrefix:
    terms: tuple
    provenance: str
    source: Any = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.terms)

    def is_integral(self) -> bool:
        return all(isinstance(t, int) or as_rational(t).denominator == 1 for t in self.terms)

    def integer_terms(self) -> tuple[list[int], int]:
        """Terms scaled by the least common denominator, with that scale.

        Signed linear equations with integer coefficients are invariant under
        a uniform scaling of the set, so the scaled prefix carries the same
        solution structure (targets scale too).
        """
        qs = [as_rational(t) for t in self.terms]
        scale = lcm(*(q.denominator for q in qs)) if qs else 1
        return [int(q * scale) for q in qs], scale

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "terms": [format_rational(as_rational(t)) for t in self.terms],
        }


def _normalize_value(q: Fraction):
    return q.numerator if q.denominator == 1 else q


def eval_recurrence(spec: RecurrenceSpec, N: int) -> SequencePrefix:
    """Exact terms a_0..a_N."""
    if N < 0:
        raise ValueError("N must be >= 0")
    d = spec.order
    b = spec.coefficients
    terms = list(spec.initial[: N + 1])
    for n in range(d, N + 1):
        terms.append(sum(b[i] * terms[n - 1 - i] for i in range(d)))
    return SequencePrefix(tuple(_normalize_value(t) for t in terms), provenance=str(spec), source=spec)


def char_poly(spec: RecurrenceSpec) -> RatPolynomial:
    """x^d - b_1 x^(d-1) - ... - b_d."""
    return RatPolynomial([-b for b in reversed(spec.coefficients)] + [1])


def spec_from_char_poly(p: RatPolynomial, initial: Sequence) -> RecurrenceSpec:
    p = p.monic()
    d = p.degree
    coeffs = [-p[d - i] for i in range(1, d + 1)]
    return RecurrenceSpec(tuple(coeffs), tuple(initial[:d]))


def berlekamp_massey(seq: Sequence) -> list[Fraction]:
    """Shortest recurrence over Q generating ``seq``.

    Returns the connection polynomial [1, c_1, ..., c_L] with
    s_n + c_1 s_{n-1} + ... + c_L s_{n-L} = 0 for L <= n < len(seq).
    """
    s = [as_rational(v) for v in seq]
    c = [Fraction(1)]
    b = [Fraction(1)]
    L = 0
    m = 1
    last = Fraction(1)
    for n in range(len(s)):
        disc = s[n]
        for i in range(1, L + 1):
            disc += c[i] * s[n - i]
        if disc == 0:
            m += 1
            continue
        coef = disc / last
        t = list(c)
        need = len(b) + m
        if len(c) < need:
            c.extend([Fraction(0)] * (need - len(c)))
        for i, bi in enumerate(b):
            c[i + m] -= coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            b = t
            last = disc
            m = 1
        else:
            m += 1
    c = c[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(c))
    return c


def minimize_recurrence(spec: RecurrenceSpec) -> RecurrenceSpec:
    """Minimal-order recurrence for the same sequence, from 2d terms.

    The identically zero sequence has no recurrence of order >= 1 with a
    nonzero constant term that is smaller than the input, so it is returned
    unchanged.
    """
    d = spec.order
    window = list(eval_recurrence(spec, 2 * d - 1).terms)
    conn = berlekamp_massey(window)
    L = len(conn) - 1
    if L == 0 or L >= d:
        return spec
    coeffs = tuple(-conn[i] for i in range(1, L + 1))
    if coeffs[-1] == 0:
        # cannot happen when the input has a nonzero constant term: the
        # minimal polynomial divides the input's characteristic polynomial
        raise ArithmeticError("minimal polynomial has root 0")
    return RecurrenceSpec(coeffs, tuple(as_rational(t) for t in window[:L]))


def satisfies_recurrence(terms: Sequence, spec: RecurrenceSpec) -> bool:
    b = spec.coefficients
    d = spec.order
    t = [as_rational(v) for v in terms]
    return all(t[n + d] == sum(b[i] * t[n + d - 1 - i] for i in range(d)) for n in range(len(t) - d))
