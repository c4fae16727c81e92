"""Membership in a finitely generated subgroup of Q*.

A nonzero rational is encoded as its vector of prime exponents plus a sign
bit.  The subgroup generated by g_1..g_m is the row lattice spanned by the
generator vectors together with 2*e_sign (the sign lives in Z/2); its
Hermite normal form decides membership exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomic import factorize
from .rational import as_rational, format_rational


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Row-style HNF: returns (nonzero rows, pivot column of each row).

    Rows are upper-echelon with positive pivots, entries above a pivot
    reduced into [0, pivot).
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return [], []
    ncols = len(a[0])
    m = len(a)
    pivots: list[int] = []
    pr = 0
    for col in range(ncols):
        if pr >= m:
            break
        while True:
            live = [i for i in range(pr, m) if a[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: abs(a[i][col]))
            a[pr], a[best] = a[best], a[pr]
            clean = True
            piv = a[pr][col]
            for i in range(pr + 1, m):
                if a[i][col]:
                    q = a[i][col] // piv
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if pr >= m or a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-x for x in a[pr]]
        piv = a[pr][col]
        for i in range(pr):
            q = a[i][col] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
        pivots.append(col)
        pr += 1
    return a[:pr], pivots


def _exponents(q: Fraction) -> dict[int, int]:
    ex = dict(factorize(q.numerator)) if abs(q.numerator) != 1 else {}
    if q.denominator != 1:
        for p, e in factorize(q.denominator).items():
            ex[p] = ex.get(p, 0) - e
    return ex


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[Fraction, ...]
    primes: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_generators(cls, gens: Iterable) -> "GeneratorSet":
        g = tuple(as_rational(x) for x in gens)
        if any(x == 0 for x in g):
            raise ValueError("generators must be nonzero")
        exps = [_exponents(x) for x in g]
        primes = tuple(sorted({p for e in exps for p in e}))
        rows = [[e.get(p, 0) for p in primes] + [1 if x < 0 else 0] for x, e in zip(g, exps)]
        rows.append([0] * len(primes) + [2])
        hnf, piv = hermite_normal_form(rows)
        return cls(g, primes, tuple(tuple(r) for r in hnf), tuple(piv))

    def vector(self, a: Fraction) -> list[int] | None:
        """Exponent-plus-sign coordinates of a, or None if a has a foreign prime."""
        a = as_rational(a)
        if a == 0:
            raise ValueError("0 is not in the multiplicative group")
        vec = []
        num, den = abs(a.numerator), a.denominator
        for p in self.primes:
            e = 0
            while num % p == 0:
                num //= p
                e += 1
            while den % p == 0:
                den //= p
                e -= 1
            vec.append(e)
        if num != 1 or den != 1:
            return None
        vec.append(1 if a < 0 else 0)
        return vec

    @property
    def rank(self) -> int:
        """Torsion-free rank of the generated group."""
        return sum(1 for c in self.pivots if c < len(self.primes))

    def to_json(self) -> dict:
        return {
            "generators": [format_rational(x) for x in self.generators],
            "primes": list(self.primes),
            "basis": [list(r) for r in self.basis],
        }


def lattice_membership(a, gens: GeneratorSet) -> bool:
    """True iff a is a product of integer powers of the generators."""
    vec = gens.vector(as_rational(a))
    if vec is None:
        return False
    for row, col in zip(gens.basis, gens.pivots):
        if vec[col] % row[col]:
            return False
        q = vec[col] // row[col]
        if q:
            vec = [x - q * y for x, y in zip(vec, row)]
    return not any(vec)
