"""Verdicts for unary expansions of weakly minimal abelian groups."""

from .certificate import (
    CITATIONS,
    Certificate,
    Verdict,
    citation_for,
    emit_certificate,
    parse_certificate,
)
from .engine import (
    certify_fgm,
    certify_lacunary,
    certify_recurrence,
    certify_spec,
    certify_weak_minimality,
    known_pattern_notes,
)
from .groups import (
    INFINITE,
    OMEGA,
    GroupSpec,
    Quantities,
    Summand,
    WeakMinimality,
    decide_weak_minimality,
    direct_weak_minimality,
    quantities,
    representative_ns,
)

__all__ = [
    "CITATIONS",
    "INFINITE",
    "OMEGA",
    "Certificate",
    "GroupSpec",
    "Quantities",
    "Summand",
    "Verdict",
    "WeakMinimality",
    "certify_fgm",
    "certify_lacunary",
    "certify_recurrence",
    "certify_spec",
    "certify_weak_minimality",
    "citation_for",
    "decide_weak_minimality",
    "direct_weak_minimality",
    "emit_certificate",
    "known_pattern_notes",
    "parse_certificate",
    "quantities",
    "representative_ns",
]
