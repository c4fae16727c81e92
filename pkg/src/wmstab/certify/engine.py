"""Hypothesis checks behind each certificate.

The engine never claims instability: a failed criterion ends in
INCONCLUSIVE with notes, and refuting a hypothesis says nothing about the
stability of the expansion itself.
"""

from __future__ import annotations

from typing import Iterable

from mpmath import iv

from ..algebra import (
    GeneratorSet,
    RatPolynomial,
    as_rational,
    cyclotomic_factors,
    degeneracy,
    format_rational,
    is_squarefree,
    lattice_membership,
    repeated_root_part,
)
from ..sequences import (
    ExplicitSpec,
    KeplerClass,
    KeplerConfig,
    LacunarySpec,
    RecurrenceSpec,
    SequencePrefix,
    berlekamp_massey,
    char_poly,
    eval_lacunary,
    eval_recurrence,
    kepler_profile,
    minimize_recurrence,
)
from .certificate import CLOSURE_NOTE, GROUP_SCOPE_NOTE, U_RANK_NOTE, Certificate, Verdict
from .groups import GroupSpec, decide_weak_minimality

X_MINUS_1 = RatPolynomial((-1, 1))
Z_GROUP = GroupSpec.parse("Z:1")


def _poly_evidence(p: RatPolynomial) -> dict:
    return {"text": str(p), "coefficients": p.to_json()}


def known_pattern_notes(p: RatPolynomial) -> list[str]:
    """Informational matches against characteristic polynomials of known unstable examples."""
    notes = []
    p = p.monic()
    d = p.degree
    if d >= 2 and p == X_MINUS_1**d:
        notes.append(
            f"characteristic polynomial matches the known-unstable pattern (x-1)^(k+1) with k={d - 1}: "
            f"it is the one enumerating {{n^{d - 1}}}, and (Z,+,{{n^k}}) defines the ordering by the "
            "Hilbert-Waring theorem"
        )
    if d == 3 and (X_MINUS_1**2).divides(p):
        q = -p.exquo(X_MINUS_1**2)[0]
        if q not in (0, 1):
            notes.append(
                f"characteristic polynomial matches the known-unstable pattern (x-q)(x-1)^2 with q={format_rational(q)}: "
                "the one enumerating {q^n+n}, whose expansion for integer q >= 2 is interdefinable with "
                "(Z,+,<,x -> q^x)"
            )
    return notes


def _ambient(spec: RecurrenceSpec) -> tuple[str, list[str]]:
    integral = all(b.denominator == 1 for b in spec.coefficients) and all(a.denominator == 1 for a in spec.initial)
    if integral:
        wm = decide_weak_minimality(Z_GROUP)
        assert wm.weakly_minimal
        return "Z", ["ambient group (Z,+) satisfies the weak minimality criterion"]
    return "Q", ["ambient group (Q,+) is torsion-free divisible, hence weakly minimal"]


def certify_recurrence(spec: RecurrenceSpec) -> Certificate:
    """Minimize, then test repeated roots of the characteristic polynomial for roots of unity."""
    if not isinstance(spec, RecurrenceSpec):
        raise TypeError("certify_recurrence needs a RecurrenceSpec")
    minimal = minimize_recurrence(spec)
    p_in = char_poly(spec)
    p = char_poly(minimal)
    rr = repeated_root_part(p)
    separable = rr.degree == 0
    cyc = cyclotomic_factors(rr) if rr.degree >= 1 else None
    hits = cyc is not None and cyc.has_root_of_unity
    ambient, ambient_chain = _ambient(minimal)
    deg = degeneracy(p)
    evidence = {
        "input_char_poly": _poly_evidence(p_in),
        "minimal_recurrence": minimal.to_json(),
        "minimal_order": minimal.order,
        "char_poly": _poly_evidence(p),
        "repeated_root_part": _poly_evidence(rr),
        "separable": separable,
        "cyclotomic_indices": [] if cyc is None else list(cyc.indices),
        "cyclotomic": None if cyc is None else cyc.to_json(),
        "degenerate": deg.degenerate,
        "degeneracy": deg.to_json(),
        "ambient_group": ambient,
    }
    chain = [
        f"recurrence minimized by Berlekamp-Massey over Q on {2 * spec.order} terms to order {minimal.order}",
        f"characteristic polynomial p(x) = {p}",
        f"repeated-root part gcd(p, p') = {rr}",
    ] + ambient_chain
    subject = {"kind": "recurrence", "spec": spec.to_json(), "text": str(spec)}
    if not hits:
        chain.append("no cyclotomic polynomial divides the repeated-root part")
        criteria = ["lrr-no-cyclotomic-repeated-root"]
        if separable:
            chain.append("p is separable")
            criteria.append("lrr-separable")
        return Certificate(
            subject,
            Verdict.CERTIFIED_SUPERSTABLE,
            criteria,
            chain=chain,
            evidence=evidence,
            closure_note=CLOSURE_NOTE,
            u_rank_note=U_RANK_NOTE if ambient == "Z" else None,
        )
    roots = ", ".join(f"Phi_{n}" for n in cyc.indices)
    notes = [f"repeated-root part is divisible by {roots}; the criterion does not apply"]
    if deg.degenerate:
        notes.append(
            "recurrence is degenerate (two distinct characteristic roots have a root-of-unity ratio); "
            "degenerate recurrences with cyclotomic repeated roots can still be stable, e.g. an "
            "enumeration of Z with characteristic polynomial (x-1)^2(x+1)^2"
        )
    else:
        notes.append("recurrence is non-degenerate: no two distinct roots have a root-of-unity ratio")
    notes += known_pattern_notes(p)
    return Certificate(subject, Verdict.INCONCLUSIVE, ["lrr-no-cyclotomic-repeated-root"], chain=chain, evidence=evidence, notes=notes)


def _base_interval(spec: LacunarySpec) -> tuple[str, str]:
    saved = iv.prec
    try:
        iv.prec = 80
        x = spec.base.interval()
        return str(x.a), str(x.b)
    finally:
        iv.prec = saved


def _short_recurrence(terms) -> int | None:
    conn = berlekamp_massey(terms)
    L = len(conn) - 1
    return L if 1 <= L and 2 * L + 8 <= len(terms) else None


def certify_lacunary(spec, N: int = 64, window: int | None = None, config: KeplerConfig | None = None) -> Certificate:
    """Strongly lacunary route: divergent, or convergent with attested transcendental limit."""
    if isinstance(spec, LacunarySpec):
        return _certify_closed_form(spec, N, window, config)
    if isinstance(spec, RecurrenceSpec):
        prefix = eval_recurrence(spec, N)
        subject = {"kind": "recurrence", "spec": spec.to_json(), "text": str(spec)}
        attested = False
        algebraic_reason = "the set is enumerated by a linear recurrence, so any Kepler limit is a characteristic root and algebraic"
    else:
        if isinstance(spec, ExplicitSpec):
            prefix = SequencePrefix(spec.terms[: N + 1], spec.origin, spec)
            subject = spec.to_json()
            attested = spec.attest_transcendental
        elif isinstance(spec, SequencePrefix):
            prefix = spec
            subject = {"kind": "explicit", "origin": spec.provenance, "count": len(spec.terms)}
            attested = False
        else:
            raise TypeError(f"cannot certify {type(spec).__name__} by the lacunary route")
        L = _short_recurrence(prefix.terms)
        algebraic_reason = (
            None if L is None else f"the prefix satisfies a linear recurrence of order {L}; its Kepler limit would be algebraic"
        )
    profile = kepler_profile(prefix, window=window, config=config)
    evidence = {"prefix_length": len(prefix.terms), "kepler_profile": profile.to_json()}
    chain = [f"Kepler profile on {len(prefix.terms)} terms: {profile.classification.value}"]
    crit = ["lacunary-kepler"]
    if profile.classification is KeplerClass.DIVERGENT_LIKE:
        chain.append("tail ratios are strictly increasing in modulus over the window")
        return Certificate(
            subject,
            Verdict.CERTIFIED_CONDITIONAL,
            crit,
            assumptions=["ratio divergence is inferred from a finite prefix, not proven"],
            chain=chain,
            evidence=evidence,
            closure_note=CLOSURE_NOTE,
            notes=["the conclusion concerns infinite B contained in A+F"],
        )
    if profile.classification is KeplerClass.CONVERGENT:
        lo, hi = profile.interval
        chain.append(f"ratios settle in [{float(lo):.12g}, {float(hi):.12g}], outside the closed unit disk")
        if algebraic_reason is None and attested:
            return Certificate(
                subject,
                Verdict.CERTIFIED_CONDITIONAL,
                crit,
                assumptions=[
                    "convergence of the ratios is inferred from a finite prefix",
                    "transcendence of the Kepler limit is attested by the user, not decided",
                ],
                chain=chain,
                evidence=evidence,
                closure_note=CLOSURE_NOTE,
                notes=["the conclusion concerns infinite B contained in A+F"],
            )
        notes = [algebraic_reason or "no transcendence attestation for the Kepler limit"]
        if isinstance(spec, RecurrenceSpec) or algebraic_reason:
            notes.append("the linear recurrence route (certify recurrence) is the applicable criterion")
        return Certificate(subject, Verdict.INCONCLUSIVE, crit, chain=chain, evidence=evidence, notes=notes)
    notes = ["ratio profile neither settles nor diverges within the configured thresholds"]
    if algebraic_reason:
        notes.append(algebraic_reason)
    return Certificate(subject, Verdict.INCONCLUSIVE, crit, chain=chain, evidence=evidence, notes=notes)


def _certify_closed_form(spec: LacunarySpec, N: int, window, config) -> Certificate:
    subject = {"kind": "lacunary", "spec": spec.to_json(), "text": str(spec)}
    crit = ["lacunary-kepler"]
    if not spec.base_magnitude_exceeds_one():
        return Certificate(
            subject, Verdict.NOT_APPLICABLE, crit, evidence={"base": str(spec.base)},
            notes=["|base| <= 1: the set is not strongly lacunary"],
        )
    prefix = eval_lacunary(spec, N)
    profile = kepler_profile(prefix, window=window, config=config)
    lo, hi = _base_interval(spec)
    evidence = {
        "prefix_length": len(prefix.terms),
        "prefix_tail": [str(t) for t in prefix.terms[-4:]],
        "kepler_limit": str(spec.base),
        "kepler_limit_interval": [lo, hi],
        "kepler_profile": profile.to_json(),
        "transcendence_attested": spec.transcendence_attested,
    }
    chain = [
        "terms floor(c * base^n * n^e) evaluated exactly by interval refinement",
        f"ratios of the closed form tend to the base {spec.base}, with |base| > 1 checked on [{lo}, {hi}]",
        f"empirical Kepler profile on the prefix: {profile.classification.value}",
    ]
    if profile.drift is not None:
        chain[-1] += f" (max relative drift {float(profile.drift):.3g})"
    if not spec.transcendence_attested:
        why = "the base is a rational literal, so the Kepler limit is algebraic" if spec.base.is_literal else "transcendence of the base is not attested"
        return Certificate(subject, Verdict.INCONCLUSIVE, crit, chain=chain, evidence=evidence, notes=[why])
    source = "the constant registry" if spec.base.registry_transcendental and not spec.attest_transcendental else "the user"
    return Certificate(
        subject,
        Verdict.CERTIFIED_CONDITIONAL,
        crit,
        assumptions=[
            f"transcendence of the Kepler limit {spec.base} is attested by {source}, not decided by the tool",
            "the Kepler limit is read off the closed form; the prefix profile is supporting evidence only",
        ],
        chain=chain,
        evidence=evidence,
        closure_note=CLOSURE_NOTE,
        notes=["the conclusion concerns infinite B contained in A+F"],
    )


def certify_fgm(prefix, gens) -> Certificate:
    """Containment of the prefix in the subgroup of Q* generated by ``gens``."""
    if not isinstance(gens, GeneratorSet):
        gens = GeneratorSet.from_generators(gens)
    terms = prefix.terms if hasattr(prefix, "terms") else tuple(prefix)
    provenance = getattr(prefix, "provenance", "explicit")
    vals = [as_rational(t) for t in terms]
    for i, v in enumerate(vals):
        if v == 0:
            raise ValueError(f"term {i} is 0, which is not in the multiplicative group")
    subject = {"kind": "prefix", "provenance": provenance, "count": len(vals), "generators": gens.to_json()}
    crit = ["fgm-finite-rank"]
    for i, v in enumerate(vals):
        if not lattice_membership(v, gens):
            return Certificate(
                subject,
                Verdict.REFUTED_HYPOTHESIS,
                crit,
                chain=[f"terms 0..{i - 1} lie in the generated subgroup", f"term {i} = {format_rational(v)} does not"],
                evidence={"witness_index": i, "witness_value": format_rational(v), "rank": gens.rank},
                notes=["refutes containment in this finite rank group only; says nothing about stability"],
            )
    sample = {format_rational(v): gens.vector(v) for v in vals[:8]}
    return Certificate(
        subject,
        Verdict.CERTIFIED_CONDITIONAL,
        crit,
        assumptions=[f"containment checked on the first {len(vals)} terms only", "the ambient group G is weakly minimal"],
        chain=[f"all {len(vals)} terms are products of powers of the generators (Hermite normal form membership)"],
        evidence={"rank": gens.rank, "exponent_vectors": sample, "basis": [list(r) for r in gens.basis]},
        closure_note=CLOSURE_NOTE,
    )


def certify_weak_minimality(g) -> Certificate:
    if not isinstance(g, GroupSpec):
        g = GroupSpec.parse(str(g))
    result = decide_weak_minimality(g)
    subject = {"kind": "group", "group": g.to_json()}
    crit = ["weak-minimality-criterion"]
    ns = [q.n for q in result.checked]
    chain = [
        f"every n >= 1 agrees with one of n in {ns} on gcd with the torsion moduli and on n > 1",
    ]
    evidence = result.to_json()
    if result.weakly_minimal:
        chain.append("for each representative n, nG and t_n(G) are finite or of finite index")
        return Certificate(
            subject, Verdict.CERTIFIED_SUPERSTABLE, crit, chain=chain, evidence=evidence,
            notes=["(G,+) is weakly minimal, in particular superstable of U-rank 1", GROUP_SCOPE_NOTE],
        )
    w = result.witness
    chain.append(f"n = {w.n}: " + "; ".join(w.failures()))
    return Certificate(
        subject, Verdict.REFUTED_HYPOTHESIS, crit, chain=chain, evidence=evidence,
        notes=[f"not weakly minimal, witness n = {w.n}", GROUP_SCOPE_NOTE],
    )


def certify_spec(spec, kind: str | None = None, N: int = 64, gens: Iterable | None = None) -> Certificate:
    """Dispatch helper used by the command line."""
    kind = kind or ("recurrence" if isinstance(spec, RecurrenceSpec) else "lacunary")
    if kind == "recurrence":
        return certify_recurrence(spec)
    if kind == "lacunary":
        return certify_lacunary(spec, N)
    if kind == "fgm":
        from ..sequences import prefix_of

        if gens is None:
            raise ValueError("fgm certification needs generators")
        return certify_fgm(prefix_of(spec, N), gens)
    raise ValueError(f"unknown certification kind {kind!r}")
