"""Exact rational and polynomial arithmetic."""

from .cyclotomic import CyclotomicReport, cyclotomic_factors, cyclotomic_poly, euler_phi, factorize
from .lattice import GeneratorSet, hermite_normal_form, lattice_membership
from .poly import (
    ONE,
    X,
    RatPolynomial,
    is_squarefree,
    poly_gcd,
    radical,
    repeated_root_part,
    squarefree_decomposition,
)
from .rational import as_rational, format_rational, parse_rational
from .ratios import DegeneracyReport, degeneracy, ratio_root_poly
from .resultant import resultant, resultant_in_y

__all__ = [
    "ONE",
    "X",
    "CyclotomicReport",
    "DegeneracyReport",
    "GeneratorSet",
    "RatPolynomial",
    "as_rational",
    "cyclotomic_factors",
    "cyclotomic_poly",
    "degeneracy",
    "euler_phi",
    "factorize",
    "format_rational",
    "hermite_normal_form",
    "is_squarefree",
    "lattice_membership",
    "parse_rational",
    "poly_gcd",
    "radical",
    "ratio_root_poly",
    "repeated_root_part",
    "resultant",
    "resultant_in_y",
    "squarefree_decomposition",
]
