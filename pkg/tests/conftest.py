from fractions import Fraction

import sympy
from hypothesis import settings

from wmstab.algebra import RatPolynomial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

x = sympy.Symbol("x")


def to_sympy(p: RatPolynomial):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coefficients])) or [0], x, domain="QQ")


def from_sympy(p) -> RatPolynomial:
    return RatPolynomial([Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(p, x).all_coeffs())])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
