"""Weak minimality of finite direct sums of cyclic groups, decided symbolically.

A group spec is a list of summands Z or Z/m, each with multiplicity a positive
integer or omega (countably many copies).  Cardinals only matter up to
finite/infinite, so a finite cardinal is an int and INFINITE is a marker.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, lcm
from typing import Iterable, Union

OMEGA = "w"


class _Infinite:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()
Cardinal = Union[int, _Infinite]


def _card_str(c: Cardinal) -> str:
    return "infinite" if c is INFINITE else str(c)


def _power(base: int, mult) -> Cardinal:
    """base ** mult for mult a positive int or omega."""
    if base == 1:
        return 1
    return INFINITE if mult == OMEGA else base**mult


def _product(cs: Iterable[Cardinal]) -> Cardinal:
    out = 1
    for c in cs:
        if c is INFINITE:
            return INFINITE
        out *= c
    return out


@dataclass(frozen=True)
class Summand:
    modulus: int  # 0 stands for Z
    multiplicity: object  # positive int or OMEGA

    def __post_init__(self):
        if self.modulus == 1 or self.modulus < 0:
            raise ValueError("cyclic factor must be Z or Z/m with m >= 2")
        if self.multiplicity != OMEGA and (not isinstance(self.multiplicity, int) or self.multiplicity < 1):
            raise ValueError("multiplicity must be a positive integer or w")

    def __str__(self):
        f = "Z" if self.modulus == 0 else f"Z/{self.modulus}"
        return f"{f}:{self.multiplicity}"


_ENTRY = re.compile(r"^\s*Z(?:\s*/\s*(\d+))?\s*(?::\s*(\d+|w|omega|ω))?\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class GroupSpec:
    summands: tuple[Summand, ...]

    def __post_init__(self):
        if not self.summands:
            raise ValueError("a group spec needs at least one summand")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """``"Z:1,Z/2:w"``; a bare entry has multiplicity 1."""
        out = []
        for entry in re.split(r"[,\s]+(?=Z)", text.strip()):
            entry = entry.strip().rstrip(",")
            if not entry:
                continue
            m = _ENTRY.match(entry)
            if not m:
                raise ValueError(f"bad group spec entry {entry!r}")
            mod = int(m.group(1)) if m.group(1) else 0
            raw = (m.group(2) or "1").lower()
            mult = OMEGA if raw in ("w", "omega", "ω") else int(raw)
            out.append(Summand(mod, mult))
        return cls(tuple(out))

    @property
    def is_infinite(self) -> bool:
        return any(s.modulus == 0 or s.multiplicity == OMEGA for s in self.summands)

    @property
    def torsion_lcm(self) -> int:
        return lcm(1, *(s.modulus for s in self.summands if s.modulus))

    def __str__(self):
        return ",".join(str(s) for s in self.summands)

    def to_json(self) -> dict:
        return {
            "spec": str(self),
            "summands": [
                {"factor": "Z" if s.modulus == 0 else f"Z/{s.modulus}", "multiplicity": s.multiplicity}
                for s in self.summands
            ],
        }


@dataclass(frozen=True)
class Quantities:
    n: int
    image: Cardinal  # |nG|
    image_index: Cardinal  # [G : nG]
    torsion: Cardinal  # |t_n(G)|
    torsion_index: Cardinal  # [G : t_n(G)]

    @property
    def image_ok(self) -> bool:
        return self.image is not INFINITE or self.image_index is not INFINITE

    @property
    def torsion_ok(self) -> bool:
        return self.torsion is not INFINITE or self.torsion_index is not INFINITE

    @property
    def ok(self) -> bool:
        return self.image_ok and self.torsion_ok

    def failures(self) -> list[str]:
        out = []
        if not self.image_ok:
            out.append(f"{self.n}G is infinite of infinite index")
        if not self.torsion_ok:
            out.append(f"t_{self.n}(G) is infinite of infinite index")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "|nG|": _card_str(self.image),
            "[G:nG]": _card_str(self.image_index),
            "|t_n(G)|": _card_str(self.torsion),
            "[G:t_n(G)]": _card_str(self.torsion_index),
        }


def quantities(g: GroupSpec, n: int) -> Quantities:
    """The four cardinals, summand by summand.

    n(Z) = nZ has index n; n(Z/m) is cyclic of order m/gcd(n,m) with index
    gcd(n,m); the n-torsion of Z is 0 and of Z/m has order gcd(n,m); and
    G/t_n(G) is isomorphic to nG.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    image, index, tors = [], [], []
    for s in g.summands:
        if s.modulus == 0:
            image.append(INFINITE)
            index.append(_power(n, s.multiplicity))
            tors.append(1)
        else:
            d = gcd(n, s.modulus)
            image.append(_power(s.modulus // d, s.multiplicity))
            index.append(_power(d, s.multiplicity))
            tors.append(_power(d, s.multiplicity))
    im = _product(image)
    return Quantities(n, im, _product(index), _product(tors), im)


def least_prime_not_dividing(L: int) -> int:
    p = 2
    while True:
        if all(p % q for q in range(2, int(p**0.5) + 1)) and L % p:
            return p
        p += 1


def representative_ns(g: GroupSpec) -> list[int]:
    """Every n >= 1 behaves like one of these.

    The four quantities depend on n only through gcd(n, m) for each torsion
    modulus m (fixed by gcd(n, L)) and on whether n > 1.  The least n in each
    class is d or d * p0, with d | L and p0 the least prime not dividing L.
    """
    L = g.torsion_lcm
    p0 = least_prime_not_dividing(L)
    ds = [d for d in range(1, L + 1) if L % d == 0]
    return sorted(set(ds) | {d * p0 for d in ds})


@dataclass(frozen=True)
class WeakMinimality:
    group: GroupSpec
    weakly_minimal: bool
    checked: tuple[Quantities, ...]
    witness: Quantities | None

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "weakly_minimal": self.weakly_minimal,
            "checked_n": [q.n for q in self.checked],
            "witness": None
            if self.witness is None
            else {**self.witness.to_json(), "failures": self.witness.failures()},
        }


def decide_weak_minimality(g: GroupSpec) -> WeakMinimality:
    if not g.is_infinite:
        raise ValueError("the criterion applies to infinite groups; this spec is finite")
    checked = tuple(quantities(g, n) for n in representative_ns(g))
    bad = [q for q in checked if not q.ok]
    return WeakMinimality(g, not bad, checked, bad[0] if bad else None)


def direct_weak_minimality(g: GroupSpec, nmax: int = 60) -> tuple[bool, int | None]:
    """Brute evaluation over 1 <= n <= nmax; (verdict, first failing n)."""
    for n in range(1, nmax + 1):
        if not quantities(g, n).ok:
            return False, n
    return True, None
