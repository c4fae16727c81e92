import itertools
import random
import re
from fractions import Fraction
from math import factorial

import pytest
import sympy

from conftest import to_sympy, x
from wmstab.algebra import RatPolynomial, cyclotomic_poly
from wmstab.certify import (
    CITATIONS,
    Certificate,
    GroupSpec,
    Verdict,
    certify_fgm,
    certify_lacunary,
    certify_recurrence,
    certify_weak_minimality,
    decide_weak_minimality,
    emit_certificate,
    parse_certificate,
)
from wmstab.sequences import (
    Base,
    ExplicitSpec,
    LacunarySpec,
    RecurrenceSpec,
    SequencePrefix,
    char_poly,
    eval_recurrence,
    minimize_recurrence,
    spec_from_char_poly,
)

# -- recurrence corpus ----------------------------------------------------------

FACTORS = [
    RatPolynomial((-1, 1)),  # x - 1
    RatPolynomial((1, 1)),  # x + 1
    RatPolynomial((-2, 1)),
    RatPolynomial((3, 1)),
    RatPolynomial((-1, -1, 1)),  # x^2 - x - 1
    RatPolynomial((1, 0, 1)),  # Phi_4
    RatPolynomial((1, 1, 1)),  # Phi_3
    RatPolynomial((-2, 0, 1)),  # x^2 - 2
    RatPolynomial((Fraction(-1, 2), 1)),
]


def recurrence_corpus(n=50, seed=11):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        p = RatPolynomial((1,))
        for _ in range(rng.randint(1, 3)):
            f = rng.choice(FACTORS)
            p = p * f ** rng.randint(1, 2)
        if p.degree > 6:
            continue
        init = [rng.randint(-9, 9) for _ in range(p.degree)]
        spec = spec_from_char_poly(p, init)
        if not any(eval_recurrence(spec, 2 * p.degree).terms):
            continue
        out.append(spec)
    return out


CORPUS = recurrence_corpus()


def _oracle_certifiable(spec):
    """Sympy oracle: minimal polynomial via the Hankel kernel, then repeated cyclotomic factors."""
    terms = [sympy.Rational(str(t)) for t in eval_recurrence(spec, 2 * spec.order + 2).terms]
    d = spec.order
    L = sympy.Matrix(d, d, lambda i, j: terms[i + j]).rank()
    H = sympy.Matrix(L, L + 1, lambda i, j: terms[i + j])
    kern = H.nullspace()[0]
    minpoly = sympy.Poly(list(reversed(list(kern))), x)
    _, factors = sympy.factor_list(minpoly.as_expr(), x)
    for f, m in factors:
        if m >= 2 and sympy.Poly(f, x).is_cyclotomic:
            return False
    return True


@pytest.mark.parametrize("i", range(len(CORPUS)))
def test_recurrence_verdict_soundness(i):
    spec = CORPUS[i]
    cert = certify_recurrence(spec)
    assert cert.verdict in (Verdict.CERTIFIED_SUPERSTABLE, Verdict.INCONCLUSIVE)
    assert (cert.verdict is Verdict.CERTIFIED_SUPERSTABLE) == _oracle_certifiable(spec)
    assert cert.evidence["separable"] == sympy.Poly(to_sympy(char_poly(minimize_recurrence(spec))).as_expr(), x).is_sqf


def _padded_variants(spec, count=5):
    """Multiply by separable factors coprime to p with no root of unity and extend the initial terms."""
    p = char_poly(spec)
    out = []
    for s in (2, -3, 5, Fraction(1, 3), 7, -6, 11):
        q = RatPolynomial((-s, 1))
        if p(s) == 0:
            continue
        padded = p * q
        init = eval_recurrence(spec, padded.degree - 1).terms
        out.append(spec_from_char_poly(padded, init))
        if len(out) == count:
            break
    # one quadratic pad as well
    q2 = RatPolynomial((-3, 0, 1))
    if sympy.gcd(to_sympy(p).as_expr(), x**2 - 3) == 1:
        padded = p * q2
        out[-1] = spec_from_char_poly(padded, eval_recurrence(spec, padded.degree - 1).terms)
    return out


@pytest.mark.parametrize("i", range(len(CORPUS)))
def test_certification_invariant_under_padding(i):
    spec = CORPUS[i]
    base = certify_recurrence(spec)
    variants = _padded_variants(spec)
    assert len(variants) == 5
    for v in variants:
        assert eval_recurrence(v, 30).terms == eval_recurrence(spec, 30).terms
        c = certify_recurrence(v)
        assert c.verdict is base.verdict
        assert c.evidence["minimal_recurrence"] == base.evidence["minimal_recurrence"]


# -- named examples -----------------------------------------------------------------


def test_fibonacci_certified():
    c = certify_recurrence(RecurrenceSpec((1, 1), (0, 1)))
    assert c.verdict is Verdict.CERTIFIED_SUPERSTABLE
    assert c.evidence["char_poly"]["text"] == "x^2 - x - 1"
    assert c.evidence["repeated_root_part"]["text"] == "1"
    assert set(c.criteria) == {"lrr-no-cyclotomic-repeated-root", "lrr-separable"}


def test_powers_of_two_certified():
    assert certify_recurrence(RecurrenceSpec((2,), (1,))).verdict is Verdict.CERTIFIED_SUPERSTABLE


def test_squares_inconclusive():
    c = certify_recurrence(RecurrenceSpec((3, -3, 1), (0, 1, 4)))
    assert c.verdict is Verdict.INCONCLUSIVE
    assert c.evidence["repeated_root_part"]["text"] == "x^2 - 2*x + 1"
    assert 1 in c.evidence["cyclotomic_indices"]
    assert any("(x-1)^(k+1)" in n for n in c.notes)


def test_two_power_plus_n_inconclusive_nondegenerate():
    c = certify_recurrence(RecurrenceSpec((4, -5, 2), (1, 3, 6)))
    assert c.verdict is Verdict.INCONCLUSIVE
    assert c.evidence["repeated_root_part"]["text"] == "x - 1"
    assert c.evidence["degenerate"] is False


def test_integer_enumeration_degenerate():
    spec = RecurrenceSpec((0, 2, 0, -1), (0, 1, -1, 2))
    assert eval_recurrence(spec, 6).terms == (0, 1, -1, 2, -2, 3, -3)
    assert char_poly(spec) == RatPolynomial((-1, 1)) ** 2 * RatPolynomial((1, 1)) ** 2
    c = certify_recurrence(spec)
    assert c.verdict is Verdict.INCONCLUSIVE and c.evidence["degenerate"] is True
    assert 2 in c.evidence["cyclotomic_indices"]


def test_cyclotomic_repeated_root_beyond_one():
    spec = spec_from_char_poly(cyclotomic_poly(3) ** 2 * RatPolynomial((-2, 1)), [1, 0, 2, 5, 1])
    assert certify_recurrence(spec).verdict is Verdict.INCONCLUSIVE


# -- lacunary --------------------------------------------------------------------------


def test_lacunary_closed_form_routes():
    ne = LacunarySpec(Fraction(1), Base.parse("e"), 1, attest_transcendental=True)
    assert certify_lacunary(ne).verdict is Verdict.CERTIFIED_CONDITIONAL
    assert certify_lacunary(LacunarySpec(Fraction(1), Base.parse("3"), 0)).verdict is Verdict.INCONCLUSIVE
    assert certify_lacunary(LacunarySpec(Fraction(1), Base.parse("1/2"), 1)).verdict is Verdict.NOT_APPLICABLE


def test_lacunary_factorial_divergent():
    spec = ExplicitSpec(tuple(factorial(n) for n in range(1, 40)), "factorial")
    c = certify_lacunary(spec)
    assert c.verdict is Verdict.CERTIFIED_CONDITIONAL and c.assumptions


def test_lacunary_recurrence_is_algebraic():
    c = certify_lacunary(RecurrenceSpec((1, 1), (0, 1)))
    assert c.verdict is Verdict.INCONCLUSIVE


# -- finite rank multiplicative groups -------------------------------------------------


def _in_group_by_search(a, gens, bound=12):
    for es in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        v = Fraction(1)
        for g, e in zip(gens, es):
            v *= Fraction(g) ** e
        if v == a:
            return True
    return False


@pytest.mark.parametrize(
    "terms,gens,refuted",
    [
        ([2**n for n in range(10)], [2], False),
        ([2**n + n for n in range(10)], [2], True),
        ([6**n for n in range(8)], [2, 3], False),
        ([(-3) ** n for n in range(8)], [3], True),
        ([(-3) ** n for n in range(8)], [-3], False),
        ([Fraction(2, 3) ** n * 5 for n in range(6)], [2, 3], True),
    ],
)
def test_fgm(terms, gens, refuted):
    c = certify_fgm(SequencePrefix(tuple(terms), "t"), gens)
    assert (c.verdict is Verdict.REFUTED_HYPOTHESIS) is refuted
    if refuted:
        i = c.evidence["witness_index"]
        assert Fraction(c.evidence["witness_value"]) == terms[i]
        assert not _in_group_by_search(Fraction(terms[i]), gens)
        assert all(_in_group_by_search(Fraction(t), gens) for t in terms[:i])
    else:
        assert c.verdict is Verdict.CERTIFIED_CONDITIONAL


def test_fgm_zero_term():
    with pytest.raises(ValueError):
        certify_fgm(SequencePrefix((0, 1), "t"), [2])


# -- weak minimality -------------------------------------------------------------------


def _per_copy(modulus, n):
    """Brute-force (|nC|, [C:nC], |t_n C|, |C/t_n C|) for one cyclic C; None means infinite."""
    if modulus == 0:
        return None, n, 1, None
    elems = range(modulus)
    image = {(n * a) % modulus for a in elems}
    tors = [a for a in elems if (n * a) % modulus == 0]
    return len(image), modulus // len(image), len(tors), modulus // len(tors)


def _combine(vals):
    """Product of per-summand cardinals with multiplicities; None = infinite."""
    total = 1
    for v, mult in vals:
        if v is None:
            return None
        if v == 1:
            continue
        if mult == "w":
            return None
        total *= v**mult
    return total


def oracle_weakly_minimal(g: GroupSpec, nmax=60):
    for n in range(1, nmax + 1):
        per = [(_per_copy(s.modulus, n), s.multiplicity) for s in g.summands]
        q = [_combine([(p[i], m) for p, m in per]) for i in range(4)]
        image, index, tors, tors_index = q
        if image is None and index is None:
            return False, n
        if tors is None and tors_index is None:
            return False, n
    return True, None


GROUPS = [
    "Z", "Z/2:w", "Z:1,Z/2:w", "Z:w", "Z/2:3,Z/3:w", "Z:2", "Z:1,Z/4:2", "Z/4:w", "Z/2:w,Z/4:w",
    "Z/6:w", "Z/2:w,Z/3:w", "Z:1,Z/3:5", "Z/9:w,Z/3:2", "Z/5:1,Z:3", "Z/2:w,Z/2:4", "Z/4:w,Z/2:1",
    "Z:1,Z/6:w", "Z/12:w", "Z/2:1,Z/3:1,Z:1", "Z/8:w,Z/4:w,Z/2:w",
]


@pytest.mark.parametrize("text", GROUPS)
def test_weak_minimality_vs_direct_oracle(text):
    g = GroupSpec.parse(text)
    res = decide_weak_minimality(g)
    ok, n = oracle_weakly_minimal(g)
    assert res.weakly_minimal == ok
    if not ok:
        assert oracle_weakly_minimal(g, res.witness.n)[0] is False


def test_weak_minimality_named():
    assert certify_weak_minimality("Z").verdict is Verdict.CERTIFIED_SUPERSTABLE
    assert certify_weak_minimality("Z/2:w").verdict is Verdict.CERTIFIED_SUPERSTABLE
    c = certify_weak_minimality("Z:1,Z/2:w")
    assert c.verdict is Verdict.REFUTED_HYPOTHESIS and c.evidence["witness"]["n"] == 2
    with pytest.raises(ValueError):
        decide_weak_minimality(GroupSpec.parse("Z/2:3"))


# -- certificates ---------------------------------------------------------------------


def _all_certificates():
    return [certify_recurrence(s) for s in CORPUS[:10]] + [
        certify_lacunary(LacunarySpec(Fraction(1), Base.parse("e"), 1, attest_transcendental=True)),
        certify_fgm(SequencePrefix((1, 2, 4), "t"), [2]),
        certify_fgm(SequencePrefix((1, 3), "t"), [2]),
        certify_weak_minimality("Z:1,Z/2:w"),
        certify_lacunary(LacunarySpec(Fraction(1), Base.parse("1/3"), 0)),
    ]


def test_citation_catalog():
    for key, text in CITATIONS.items():
        assert not re.search(r"(Theorem|Proposition|Remark|Lemma|Definition)\s*\d|§|\[\d", text), key
    for c in _all_certificates():
        assert all(k in CITATIONS for k in c.criteria)
        assert c.to_json()["citations"] == [CITATIONS[k] for k in c.criteria]


def test_json_roundtrip():
    for c in _all_certificates():
        text = emit_certificate(c, "json")
        back = parse_certificate(text)
        assert back == c
        assert emit_certificate(back, "json") == text
        assert emit_certificate(c, "text").startswith("verdict: ")


def test_certificate_validation():
    with pytest.raises(ValueError):
        Certificate({}, Verdict.CERTIFIED_SUPERSTABLE, ["lrr-separable"])
    with pytest.raises(KeyError):
        Certificate({}, Verdict.INCONCLUSIVE, ["made-up"])
    with pytest.raises(ValueError):
        Certificate({}, Verdict.CERTIFIED_CONDITIONAL, ["fgm-finite-rank"], chain=["x"], evidence={"a": 1})
    data = certify_recurrence(RecurrenceSpec((2,), (1,))).to_json()
    data["citations"] = ["tampered"] * len(data["citations"])
    with pytest.raises(ValueError):
        Certificate.from_json(data)


def test_exit_codes():
    assert Verdict.CERTIFIED_SUPERSTABLE.exit_code == 0
    assert Verdict.CERTIFIED_CONDITIONAL.exit_code == 0
    assert Verdict.INCONCLUSIVE.exit_code == 2
    assert Verdict.NOT_APPLICABLE.exit_code == 2
    assert Verdict.REFUTED_HYPOTHESIS.exit_code == 3
