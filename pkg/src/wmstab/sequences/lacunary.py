"""Closed forms floor(c * base^n * n^e) evaluated exactly by interval refinement."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable

from mpmath import iv
from mpmath.libmp import mpf_floor, to_int

from ..algebra import as_rational, format_rational
from .recurrence import SequencePrefix

MAX_PRECISION = 1 << 17


class PrecisionExhausted(ArithmeticError):
    def __init__(self, index: int, precision: int):
        super().__init__(
            f"cannot determine floor at index {index}: interval straddles an integer "
            f"at {precision} bits"
        )
        self.index = index
        self.precision = precision


@dataclass(frozen=True)
class NamedConstant:
    name: str
    evaluate: Callable[[], object]  # returns an iv.mpf at the current iv.prec
    transcendental: bool


_REGISTRY: dict[str, NamedConstant] = {
    "e": NamedConstant("e", lambda: iv.e, True),
    "pi": NamedConstant("pi", lambda: iv.pi, True),
}


def register_constant(name: str, evaluate: Callable[[], object], transcendental: bool = False) -> None:
    """Add a named base.  ``transcendental`` is the caller's attestation."""
    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
        raise ValueError(f"bad constant name {name!r}")
    _REGISTRY[name] = NamedConstant(name, evaluate, transcendental)


_BASE_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*\(?\s*([-+]?\d+(?:/\d+)?)\s*\)?)?\s*$")


@dataclass(frozen=True)
class Base:
    """A rational literal, or a registered constant raised to a rational power."""

    literal: Fraction | None = None
    name: str | None = None
    power: Fraction = Fraction(1)

    @classmethod
    def parse(cls, text) -> "Base":
        if isinstance(text, Base):
            return text
        if not isinstance(text, str):
            return cls(literal=as_rational(text))
        m = _BASE_RE.match(text)
        if m and m.group(1) in _REGISTRY:
            power = as_rational(m.group(2)) if m.group(2) else Fraction(1)
            if power == 0:
                raise ValueError("zero power of a constant is the literal 1")
            return cls(name=m.group(1), power=power)
        if m:
            raise ValueError(f"unknown constant {m.group(1)!r}; register it first")
        return cls(literal=as_rational(text))

    @property
    def is_literal(self) -> bool:
        return self.literal is not None

    @property
    def registry_transcendental(self) -> bool:
        # a nonzero rational power of a transcendental number is transcendental
        return self.name is not None and _REGISTRY[self.name].transcendental

    def interval(self):
        if self.literal is not None:
            return iv.mpf(self.literal.numerator) / self.literal.denominator
        c = _REGISTRY[self.name].evaluate()
        if self.power == 1:
            return c
        p = self.power
        return iv.exp(iv.log(c) * p.numerator / p.denominator)

    def __str__(self):
        if self.literal is not None:
            return format_rational(self.literal)
        if self.power == 1:
            return self.name
        return f"{self.name}^{format_rational(self.power)}"


@dataclass(frozen=True)
class LacunarySpec:
    """The set {floor(c * base^n * n^e) : n >= start}."""

    c: Fraction
    base: Base
    e: int = 0
    start: int = 0
    attest_transcendental: bool = False

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "base", Base.parse(self.base))
        if not isinstance(self.e, int) or self.e < 0:
            raise ValueError("exponent e must be a nonnegative integer")
        if self.c == 0:
            raise ValueError("c must be nonzero")

    @property
    def transcendence_attested(self) -> bool:
        if self.base.is_literal:
            return False
        return self.attest_transcendental or self.base.registry_transcendental

    def base_magnitude_exceeds_one(self) -> bool:
        if self.base.is_literal:
            return abs(self.base.literal) > 1
        iv.prec = 64
        try:
            x = self.base.interval()
            return bool(abs(x).a > 1)
        finally:
            iv.prec = 53

    def to_json(self) -> dict:
        return {
            "kind": "lacunary",
            "c": format_rational(self.c),
            "e": self.e,
            "base": str(self.base),
            "start": self.start,
            "attest_transcendental": self.attest_transcendental,
        }

    def __str__(self):
        poly = "" if self.e == 0 else (" * n" if self.e == 1 else f" * n^{self.e}")
        return f"floor({format_rational(self.c)} * {self.base}^n{poly})"


def _floor_exact(spec: LacunarySpec, n: int) -> int | None:
    if spec.base.is_literal:
        return floor(spec.c * spec.base.literal**n * n**spec.e)
    if n == 0:
        return floor(spec.c * (1 if spec.e == 0 else 0))
    return None


def _floor_endpoints(val) -> tuple[int, int]:
    # exact floors of the raw endpoints; going through mpf would round to mp.prec
    a, b = val._mpi_
    return to_int(mpf_floor(a)), to_int(mpf_floor(b))


def floor_term(spec: LacunarySpec, n: int, start_prec: int | None = None, max_prec: int = MAX_PRECISION) -> int:
    exact = _floor_exact(spec, n)
    if exact is not None:
        return exact
    bits = 64 + n * 4 + spec.e * max(1, n.bit_length()) + abs(spec.c.numerator).bit_length()
    prec = start_prec or bits
    saved = iv.prec
    try:
        while prec <= max_prec:
            iv.prec = prec
            val = iv.mpf(spec.c.numerator) / spec.c.denominator * spec.base.interval() ** n * iv.mpf(n) ** spec.e
            lo, hi = _floor_endpoints(val)
            if lo == hi:
                return lo
            prec *= 2
    finally:
        iv.prec = saved
    raise PrecisionExhausted(n, prec // 2)


def eval_lacunary(spec: LacunarySpec, N: int, max_prec: int = MAX_PRECISION) -> SequencePrefix:
    """Exact floors for n = start..start+N; never a rounded guess."""
    if N < 0:
        raise ValueError("N must be >= 0")
    terms = tuple(floor_term(spec, n, max_prec=max_prec) for n in range(spec.start, spec.start + N + 1))
    return SequencePrefix(terms, provenance=str(spec), source=spec)
