"""Polynomial whose roots are the pairwise ratios of the roots of p."""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import CyclotomicReport, cyclotomic_factors
from .poly import RatPolynomial, radical
from .resultant import resultant_in_y


def ratio_root_poly(p: RatPolynomial) -> RatPolynomial:
    """Monic r(x) = Res_y(q(y), q(x*y)) for q = radical(p).

    If q has distinct nonzero roots m_1..m_n, the roots of r are the n^2
    ratios m_i / m_j, counted with multiplicity; the n diagonal ratios give
    the factor (x - 1)^n.
    """
    if p.degree < 1:
        raise ValueError("ratio_root_poly requires degree >= 1")
    if p[0] == 0:
        raise ValueError("0 is a root; recurrence order not minimal")
    q = radical(p)
    in_y = [RatPolynomial.constant(c) for c in q.coefficients]
    scaled = [RatPolynomial.monomial(c, i) for i, c in enumerate(q.coefficients)]
    return resultant_in_y(in_y, scaled).monic()


@dataclass(frozen=True)
class DegeneracyReport:
    ratio_poly: RatPolynomial
    diagonal_multiplicity: int
    off_diagonal: RatPolynomial
    cyclotomic: CyclotomicReport | None

    @property
    def degenerate(self) -> bool:
        return self.cyclotomic is not None and self.cyclotomic.has_root_of_unity

    def to_json(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "ratio_poly": self.ratio_poly.to_json(),
            "diagonal_multiplicity": self.diagonal_multiplicity,
            "off_diagonal": self.off_diagonal.to_json(),
            "off_diagonal_cyclotomic": None if self.cyclotomic is None else self.cyclotomic.to_json(),
        }


def degeneracy(p: RatPolynomial) -> DegeneracyReport:
    """Decide whether two distinct roots of p have a root-of-unity ratio."""
    r = ratio_root_poly(p)
    n = radical(p).degree
    diag = RatPolynomial((-1, 1)) ** n
    off = r.exquo(diag)
    cyc = cyclotomic_factors(off) if off.degree >= 1 else None
    return DegeneracyReport(ratio_poly=r, diagonal_multiplicity=n, off_diagonal=off, cyclotomic=cyc)
