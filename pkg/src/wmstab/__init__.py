"""Exact certifier and combinatorial laboratory for unary expansions of
weakly minimal abelian groups."""

__version__ = "0.1.0"
