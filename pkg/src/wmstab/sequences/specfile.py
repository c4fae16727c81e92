"""Spec files describing the set A.

YAML or JSON mapping with ``kind`` one of ``recurrence``, ``lacunary``,
``explicit``::

    kind: recurrence
    coefficients: ["1", "1"]
    initial: ["0", "1"]

    kind: lacunary
    c: "1"
    e: 1
    base: e
    attest_transcendental: true

    kind: explicit
    path: terms.txt        # newline-delimited integers, relative to the spec file
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import yaml

from ..algebra import as_rational
from .lacunary import Base, LacunarySpec, eval_lacunary
from .recurrence import RecurrenceSpec, SequencePrefix, eval_recurrence


@dataclass(frozen=True)
class ExplicitSpec:
    terms: tuple[int, ...]
    origin: str = "explicit"
    attest_transcendental: bool = False

    def to_json(self) -> dict:
        return {"kind": "explicit", "origin": self.origin, "count": len(self.terms)}


AnySpec = Union[RecurrenceSpec, LacunarySpec, ExplicitSpec]


def _rationals(values) -> tuple:
    if isinstance(values, str):
        values = [v for v in values.replace(",", " ").split()]
    return tuple(as_rational(str(v)) for v in values)


def read_terms(path: Path) -> tuple[int, ...]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(int(line))
    return tuple(out)


def spec_from_mapping(data: dict, relative_to: Path | None = None) -> AnySpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("spec must be a mapping with a 'kind' field")
    kind = data["kind"]
    if kind == "recurrence":
        return RecurrenceSpec(_rationals(data["coefficients"]), _rationals(data["initial"]))
    if kind == "lacunary":
        base = data["base"]
        return LacunarySpec(
            c=as_rational(str(data.get("c", 1))),
            base=Base.parse(base if isinstance(base, str) else str(base)),
            e=int(data.get("e", 0)),
            start=int(data.get("start", 0)),
            attest_transcendental=bool(data.get("attest_transcendental", False)),
        )
    if kind == "explicit":
        if "terms" in data:
            terms = tuple(int(t) for t in data["terms"])
            origin = "inline"
        else:
            p = Path(data["path"])
            if relative_to is not None and not p.is_absolute():
                p = relative_to / p
            terms = read_terms(p)
            origin = str(p)
        return ExplicitSpec(terms, origin, bool(data.get("attest_transcendental", False)))
    raise ValueError(f"unknown spec kind {kind!r}")


def load_spec(path: str | Path) -> AnySpec:
    path = Path(path)
    data = yaml.safe_load(path.read_text())
    return spec_from_mapping(data, relative_to=path.parent)


def prefix_of(spec: AnySpec, N: int) -> SequencePrefix:
    """Terms a_0..a_N (explicit specs are truncated to what they contain)."""
    if isinstance(spec, RecurrenceSpec):
        return eval_recurrence(spec, N)
    if isinstance(spec, LacunarySpec):
        return eval_lacunary(spec, N)
    if isinstance(spec, ExplicitSpec):
        return SequencePrefix(spec.terms[: N + 1], provenance=spec.origin, source=spec)
    raise TypeError(f"not a sequence spec: {spec!r}")
