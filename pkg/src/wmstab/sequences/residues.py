from __future__ import annotations

from dataclasses import dataclass

from ..algebra import as_rational
from .recurrence import RecurrenceSpec, SequencePrefix


@dataclass(frozen=True)
class ResidueProfile:
    modulus: int
    residues: tuple[int, ...]
    preperiod: int | None
    period: int | None
    exact: bool  # True when derived from the recurrence state cycle

    @property
    def pattern(self) -> tuple[int, ...]:
        if self.period is None:
            return ()
        return self.residues[self.preperiod : self.preperiod + self.period]

    def replay(self, length: int) -> list[int]:
        if self.period is None:
            raise ValueError("no period detected")
        mu, lam = self.preperiod, self.period
        head = list(self.residues[:mu])
        pat = self.pattern
        return (head + [pat[(i - mu) % lam] for i in range(mu, length)])[:length]

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "preperiod": self.preperiod,
            "period": self.period,
            "pattern": list(self.pattern),
            "exact": self.exact,
            "residues": list(self.residues),
        }


def _state_cycle(spec: RecurrenceSpec, n: int, max_states: int) -> tuple[int, int] | None:
    """(preperiod, period) of an integer recurrence mod n via its state vector."""
    if not all(b.denominator == 1 for b in spec.coefficients) or not all(a.denominator == 1 for a in spec.initial):
        return None
    b = [int(x) % n for x in spec.coefficients]
    state = tuple(int(a) % n for a in spec.initial)
    d = spec.order
    seen: dict[tuple, int] = {}
    i = 0
    while state not in seen:
        if i > max_states:
            return None
        seen[state] = i
        nxt = sum(b[j] * state[d - 1 - j] for j in range(d)) % n
        state = state[1:] + (nxt,)
        i += 1
    mu = seen[state]
    return mu, i - mu


def _scan_period(res: list[int]) -> tuple[int, int] | None:
    """Smallest (preperiod + period, period) such that the tail repeats at least twice."""
    L = len(res)
    best = None
    for lam in range(1, L // 2 + 1):
        mu = 0
        for i in range(L - lam - 1, -1, -1):
            if res[i] != res[i + lam]:
                mu = i + 1
                break
        if L - mu < 2 * lam:
            continue
        key = (mu + lam, lam)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return best[0] - best[1], best[1]


def residue_profile(prefix: SequencePrefix, n: int, max_states: int = 10**6) -> ResidueProfile:
    """Eventual periodicity of the terms modulo n."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    vals = []
    for t in prefix.terms:
        q = as_rational(t)
        if q.denominator != 1:
            raise ValueError(f"non-integer term {t}")
        vals.append(int(q) % n)
    res = tuple(vals)
    if n == 1:
        return ResidueProfile(1, res, 0, 1, True)
    src = prefix.source
    if isinstance(src, RecurrenceSpec) and len(prefix.terms) and int(as_rational(prefix.terms[0])) == int(src.initial[0]):
        cyc = _state_cycle(src, n, max_states)
        if cyc is not None:
            mu, lam = cyc
            return ResidueProfile(n, res, mu, lam, True)
    scanned = _scan_period(list(res))
    if scanned is None:
        return ResidueProfile(n, res, None, None, False)
    return ResidueProfile(n, res, scanned[0], scanned[1], False)
