"""Cyclotomic polynomials and exact root-of-unity detection by trial division."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .poly import RatPolynomial, _require_nonconstant


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division; {} for |n| = 1."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> RatPolynomial:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by Phi_d for d | n, d < n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic index must be a positive integer, got {n!r}")
    p = RatPolynomial.monomial(1, n) - 1
    for d in divisors(n)[:-1]:
        p = p.exquo(cyclotomic_poly(d))
    return p


def cyclotomic_search_bound(degree: int) -> list[int]:
    """All n with phi(n) <= degree.  phi(n) >= sqrt(n/2) caps n at 2 * degree**2."""
    return [n for n in range(1, 2 * degree * degree + 1) if euler_phi(n) <= degree]


@dataclass(frozen=True)
class CyclotomicReport:
    indices: tuple[int, ...]
    multiplicities: dict[int, int] = field(default_factory=dict)
    residual: RatPolynomial = RatPolynomial((1,))

    @property
    def has_root_of_unity(self) -> bool:
        return bool(self.indices)

    def reconstruct(self) -> RatPolynomial:
        p = self.residual
        for n in self.indices:
            p = p * cyclotomic_poly(n) ** self.multiplicities[n]
        return p

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "multiplicities": {str(n): m for n, m in sorted(self.multiplicities.items())},
            "residual": self.residual.to_json(),
        }


def cyclotomic_factors(p: RatPolynomial) -> CyclotomicReport:
    """Split the monic normalization of p into cyclotomic factors and a residual.

    Every root of unity that is a root of p is a root of some Phi_n dividing p
    (Phi_n is irreducible over Q), so the report is complete.
    """
    _require_nonconstant(p, "cyclotomic_factors")
    rest = p.monic()
    mult: dict[int, int] = {}
    for n in cyclotomic_search_bound(p.degree):
        phi_n = cyclotomic_poly(n)
        if phi_n.degree > rest.degree:
            continue
        while rest.degree >= phi_n.degree:
            q, r = divmod(rest, phi_n)
            if r:
                break
            rest = q
            mult[n] = mult.get(n, 0) + 1
    return CyclotomicReport(indices=tuple(sorted(mult)), multiplicities=mult, residual=rest.monic())
