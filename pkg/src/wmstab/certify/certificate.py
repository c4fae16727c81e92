"""Certificates: verdict, cited criterion, assumptions and machine-checked evidence."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Verdict(str, Enum):
    CERTIFIED_SUPERSTABLE = "CERTIFIED_SUPERSTABLE"
    CERTIFIED_CONDITIONAL = "CERTIFIED_CONDITIONAL"
    INCONCLUSIVE = "INCONCLUSIVE"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    REFUTED_HYPOTHESIS = "REFUTED_HYPOTHESIS"

    @property
    def certified(self) -> bool:
        return self in (Verdict.CERTIFIED_SUPERSTABLE, Verdict.CERTIFIED_CONDITIONAL)

    @property
    def exit_code(self) -> int:
        if self.certified:
            return 0
        if self is Verdict.REFUTED_HYPOTHESIS:
            return 3
        return 2


_CONCLUSION = (
    "for any finite F contained in G and any B contained in A+F, (G,+,B) has nfcp "
    "and is superstable of U-rank at most omega"
)

CITATIONS: dict[str, str] = {
    "lrr-no-cyclotomic-repeated-root": (
        "Linear recurrence theorem: if G is a weakly minimal subgroup of the algebraic numbers "
        "and A is enumerated by a linear recurrence no repeated root of whose characteristic "
        "polynomial is a root of unity, then " + _CONCLUSION
    ),
    "lrr-separable": (
        "Separable recurrence theorem: if G is a weakly minimal subgroup of an algebraically closed "
        "field of characteristic 0 and A is enumerated by a linear recurrence with separable "
        "characteristic polynomial, then " + _CONCLUSION
    ),
    "lacunary-kepler": (
        "Strongly lacunary theorem: if G is a weakly minimal subgroup of the complex numbers and A is "
        "strongly lacunary and either divergent or convergent with transcendental Kepler limit, then "
        "for any finite F and infinite B contained in A+F, (G,+,B) has nfcp and is superstable of "
        "U-rank at most omega; the mechanism is that the induced structure on A is interdefinable "
        "with A in the language of equality"
    ),
    "fgm-finite-rank": (
        "Finite rank multiplicative group theorem: if G is weakly minimal and A is contained in a "
        "finite rank subgroup of the multiplicative group of an algebraically closed field of "
        "characteristic 0, then " + _CONCLUSION
    ),
    "weak-minimality-criterion": (
        "Weak minimality criterion for abelian groups: an infinite abelian group G is weakly "
        "minimal if and only if, for all n >= 1, nG and t_n(G) are each either finite or of finite index"
    ),
}

CLOSURE_NOTE = (
    "closure: the conclusion transfers to every B contained in A+F for any finite F contained in G"
)
U_RANK_NOTE = "over (Z,+) with B infinite the U-rank is exactly omega"
GROUP_SCOPE_NOTE = (
    "group specs are finite sums of cyclic summands with finite or countable multiplicity; "
    "Pruefer and Z[1/p]-type summands are outside this checker"
)


def citation_for(criterion: str) -> str:
    try:
        return CITATIONS[criterion]
    except KeyError:
        raise KeyError(f"no catalog entry for criterion {criterion!r}") from None


def _jsonable(x: Any) -> Any:
    return json.loads(json.dumps(x, sort_keys=True))


@dataclass(frozen=True)
class Certificate:
    subject: dict
    verdict: Verdict
    criteria: tuple[str, ...]
    assumptions: tuple[str, ...] = ()
    chain: tuple[str, ...] = ()
    evidence: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    closure_note: str | None = None
    u_rank_note: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "verdict", Verdict(self.verdict))
        object.__setattr__(self, "criteria", tuple(self.criteria))
        object.__setattr__(self, "assumptions", tuple(self.assumptions))
        object.__setattr__(self, "chain", tuple(self.chain))
        object.__setattr__(self, "notes", tuple(self.notes))
        object.__setattr__(self, "subject", _jsonable(self.subject))
        object.__setattr__(self, "evidence", _jsonable(self.evidence))
        if not self.criteria:
            raise ValueError("a certificate names at least one criterion")
        for c in self.criteria:
            citation_for(c)
        if self.verdict.certified and (not self.chain or not self.evidence):
            raise ValueError("certified verdicts need a checked hypothesis chain and evidence")
        if self.verdict is Verdict.CERTIFIED_CONDITIONAL and not self.assumptions:
            raise ValueError("conditional certificates must state their assumptions")

    @property
    def criterion(self) -> str:
        return self.criteria[0]

    @property
    def citations(self) -> tuple[str, ...]:
        return tuple(citation_for(c) for c in self.criteria)

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": self.verdict.value,
            "criterion": self.criterion,
            "criteria": list(self.criteria),
            "citations": list(self.citations),
            "assumptions": list(self.assumptions),
            "chain": list(self.chain),
            "evidence": self.evidence,
            "notes": list(self.notes),
            "closure_note": self.closure_note,
            "u_rank_note": self.u_rank_note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        criteria = tuple(data["criteria"])
        if list(data.get("citations", [])) != [citation_for(c) for c in criteria]:
            raise ValueError("citations do not match the catalog")
        return cls(
            subject=data["subject"],
            verdict=Verdict(data["verdict"]),
            criteria=criteria,
            assumptions=tuple(data.get("assumptions", ())),
            chain=tuple(data.get("chain", ())),
            evidence=data.get("evidence", {}),
            notes=tuple(data.get("notes", ())),
            closure_note=data.get("closure_note"),
            u_rank_note=data.get("u_rank_note"),
        )


def _text(c: Certificate) -> str:
    lines = [f"verdict: {c.verdict.value}", f"subject: {json.dumps(c.subject, sort_keys=True)}"]
    for crit, cit in zip(c.criteria, c.citations):
        lines.append(f"criterion [{crit}]: {cit}")
    for title, items in (("checked", c.chain), ("assumptions", c.assumptions), ("notes", c.notes)):
        if items:
            lines.append(f"{title}:")
            lines.extend(f"  - {x}" for x in items)
    if c.evidence:
        lines.append("evidence:")
        for k in sorted(c.evidence):
            lines.append(f"  {k}: {json.dumps(c.evidence[k], sort_keys=True)}")
    for note in (c.closure_note, c.u_rank_note):
        if note:
            lines.append(note)
    return "\n".join(lines) + "\n"


def emit_certificate(c: Certificate, format: str = "json") -> str:
    if format == "json":
        return json.dumps(c.to_json(), sort_keys=True, indent=2) + "\n"
    if format == "text":
        return _text(c)
    raise ValueError(f"unknown format {format!r}")


def parse_certificate(text: str) -> Certificate:
    return Certificate.from_json(json.loads(text))
