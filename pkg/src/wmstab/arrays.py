"""Quantifier-free types and m-arrays in finite relational structures.

For a relation R of arity rho, variables x_1..x_l (1 <= l <= rho) and a finite
parameter set B, the complete quantifier-free type of a tuple records every
R-atom whose arguments come from the x's and B (with at least one x), and
every equality x_i = x_j and x_i = b.  A type supports an m-array when m of its
realizations have pairwise disjoint atom sets.

Which subtuple of R's variables plays the role of x only matters through its
length, so scans run over lengths.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExceeded

DEFAULT_NODE_CAP = 10**5
DEFAULT_SUBSET_CAP = 10**4
DEFAULT_SCAN_WORK = 5 * 10**7

DISJOINTNESS_NOTE = (
    "tuples are disjoint when their coordinate sets share no atom; repeated "
    "coordinates inside one tuple collapse to a single atom"
)
SCAN_NOTE = (
    "empirical falsifier on a finite structure: a respected bound is evidence, "
    "not a proof about any infinite structure"
)


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: frozenset


@dataclass(frozen=True)
class FinStructure:
    universe: tuple
    relations: Mapping[str, Relation] = field(hash=False)

    def __post_init__(self):
        universe = tuple(self.universe)
        if len(set(universe)) != len(universe):
            raise ValueError("universe atoms must be distinct")
        object.__setattr__(self, "universe", universe)
        members = set(universe)
        rels = {}
        for name, rel in dict(self.relations).items():
            if not isinstance(rel, Relation):
                arity, tuples = rel
                rel = Relation(int(arity), frozenset(tuple(t) for t in tuples))
            if rel.arity < 1:
                raise ValueError(f"relation {name} has arity < 1")
            for t in rel.tuples:
                if len(t) != rel.arity:
                    raise ValueError(f"relation {name}: tuple {t} has wrong arity")
                if not all(a in members for a in t):
                    raise ValueError(f"relation {name}: tuple {t} leaves the universe")
            rels[name] = rel
        object.__setattr__(self, "relations", rels)

    def relation(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise KeyError(f"no relation named {name!r}") from None

    @classmethod
    def from_json(cls, data: Mapping) -> "FinStructure":
        """Relations may be ``{"R": {"2": [...]}}``, ``{"R": {"arity": 2, "tuples": [...]}}``
        or ``{"R": [...]}``; a missing universe is read off the tuples."""
        rels = {}
        for name, spec in data.get("relations", {}).items():
            if isinstance(spec, Mapping) and "tuples" in spec:
                tuples = spec["tuples"]
                arity = int(spec.get("arity", len(tuples[0]) if tuples else 1))
            elif isinstance(spec, Mapping):
                if len(spec) != 1:
                    raise ValueError(f"relation {name}: expected a single arity key")
                (arity, tuples), = spec.items()
                arity = int(arity)
            else:
                tuples = spec
                if not tuples:
                    raise ValueError(f"relation {name}: empty tuple list needs an explicit arity")
                arity = len(tuples[0])
            rels[name] = Relation(arity, frozenset(tuple(t) for t in tuples))
        if "universe" in data:
            universe = tuple(data["universe"])
        else:
            universe = tuple(sorted({a for r in rels.values() for t in r.tuples for a in t}, key=repr))
        return cls(universe, rels)

    @classmethod
    def load(cls, path: str | Path) -> "FinStructure":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {
            "universe": list(self.universe),
            "relations": {
                n: {"arity": r.arity, "tuples": sorted(list(t) for t in r.tuples)} for n, r in self.relations.items()
            },
        }


# terms are ("x", i) for variable i or ("b", atom)
Term = tuple


def _term_str(t: Term) -> str:
    return f"x{t[1] + 1}" if t[0] == "x" else repr(t[1])


def atom_list(rel_name: str, arity: int, xlen: int, B: Sequence) -> tuple:
    """R-atoms with at least one variable, then equality atoms."""
    terms = [("x", i) for i in range(xlen)] + [("b", b) for b in B]
    atoms = [
        ("R", args)
        for args in itertools.product(terms, repeat=arity)
        if any(t[0] == "x" for t in args)
    ]
    atoms += [("=", ("x", i), ("x", j)) for i in range(xlen) for j in range(i + 1, xlen)]
    atoms += [("=", ("x", i), ("b", b)) for i in range(xlen) for b in B]
    return tuple(atoms)


def atom_str(rel_name: str, atom) -> str:
    if atom[0] == "R":
        return f"{rel_name}({','.join(_term_str(t) for t in atom[1])})"
    return f"{_term_str(atom[1])}={_term_str(atom[2])}"


def eval_atom(rel: Relation, atom, tup: Sequence) -> bool:
    def val(t):
        return tup[t[1]] if t[0] == "x" else t[1]

    if atom[0] == "R":
        return tuple(val(t) for t in atom[1]) in rel.tuples
    return val(atom[1]) == val(atom[2])


@dataclass(frozen=True)
class QfType:
    relation: str
    xlen: int
    B: tuple
    atoms: tuple
    diagram: tuple[bool, ...]
    realizations: tuple[tuple, ...]

    @property
    def equality_pattern(self) -> tuple[int, ...]:
        """Block label of each variable under the x_i = x_j atoms."""
        lab = list(range(self.xlen))
        for atom, truth in zip(self.atoms, self.diagram):
            if truth and atom[0] == "=" and atom[2][0] == "x":
                i, j = atom[1][1], atom[2][1]
                lab[j] = lab[i]
        return tuple(lab)

    @property
    def pinned(self) -> bool:
        """Some variable equals a parameter."""
        return any(t and a[0] == "=" and a[2][0] == "b" for a, t in zip(self.atoms, self.diagram))

    def positive_atoms(self) -> list[str]:
        return [atom_str(self.relation, a) for a, t in zip(self.atoms, self.diagram) if t]

    def to_json(self, limit: int | None = 20) -> dict:
        reals = self.realizations if limit is None else self.realizations[:limit]
        return {
            "relation": self.relation,
            "xlen": self.xlen,
            "B": list(self.B),
            "true_atoms": self.positive_atoms(),
            "equality_pattern": list(self.equality_pattern),
            "realization_count": len(self.realizations),
            "realizations": [list(r) for r in reals],
        }


def _xlen(xbar) -> int:
    if isinstance(xbar, int):
        n = xbar
    else:
        xbar = tuple(xbar)
        if len(set(xbar)) != len(xbar):
            raise ValueError("x positions must be distinct")
        n = len(xbar)
    if n < 1:
        raise ValueError("x must be nonempty")
    return n


def qf_types(structure: FinStructure, R: str, xbar, B: Iterable = ()) -> list[QfType]:
    """Partition of all |x|-tuples over the universe by atomic diagram.

    ``xbar`` is a length or a tuple of distinct variable positions of R.
    Types come out ordered by their first realization (lexicographic in
    universe order).
    """
    rel = structure.relation(R)
    xlen = _xlen(xbar)
    if not isinstance(xbar, int) and max(xbar) >= rel.arity:
        raise ValueError("x positions exceed the arity of R")
    if xlen > rel.arity:
        raise ValueError("x is longer than R's variable tuple")
    B = tuple(B)
    members = set(structure.universe)
    if not all(b in members for b in B):
        raise ValueError("B is not a subset of the universe")
    if len(set(B)) != len(B):
        raise ValueError("B has repeated atoms")
    atoms = atom_list(R, rel.arity, xlen, B)
    classes: dict[tuple, list] = {}
    for tup in itertools.product(structure.universe, repeat=xlen):
        diag = tuple(eval_atom(rel, a, tup) for a in atoms)
        classes.setdefault(diag, []).append(tup)
    return [QfType(R, xlen, B, atoms, d, tuple(r)) for d, r in classes.items()]


# -- packing ----------------------------------------------------------------------


def greedy_disjoint(tuples: Iterable[Sequence]) -> list[tuple]:
    """Greedy pairwise-disjoint selection in the given order."""
    used: set = set()
    out = []
    for t in tuples:
        s = set(t)
        if used.isdisjoint(s):
            out.append(tuple(t))
            used |= s
    return out


def find_m_array(qtype: QfType | Sequence[Sequence], m: int, node_cap: int = DEFAULT_NODE_CAP) -> list[tuple] | None:
    """m pairwise disjoint realizations, or None if none exist.

    Greedy in first-coordinate order first; otherwise exact branch and bound
    with free-atom pruning.  Exceeding ``node_cap`` raises rather than guesses.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    reals = list(qtype.realizations if isinstance(qtype, QfType) else (tuple(t) for t in qtype))
    if not reals:
        return None
    greedy = greedy_disjoint(reals)  # realizations arrive in universe-lex order
    if len(greedy) >= m:
        return greedy[:m]
    sets = sorted({frozenset(t): t for t in reals}.items(), key=lambda kv: (len(kv[0]), sorted(map(repr, kv[0]))))
    atoms_of = [s for s, _ in sets]
    reps = [t for _, t in sets]
    min_size = min(len(s) for s in atoms_of)
    universe = set().union(*atoms_of)
    nodes = 0
    chosen: list[int] = []

    def search(start: int, used: frozenset) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise BudgetExceeded(f"packing search exceeded {node_cap} nodes", nodes, node_cap)
        if len(chosen) >= m:
            return True
        need = m - len(chosen)
        if (len(universe) - len(used)) // min_size < need:
            return False
        cands = [i for i in range(start, len(atoms_of)) if used.isdisjoint(atoms_of[i])]
        if len(cands) < need:
            return False
        for pos, i in enumerate(cands):
            if len(cands) - pos < need:
                return False
            chosen.append(i)
            if search(i + 1, used | atoms_of[i]):
                return True
            chosen.pop()
        return False

    if search(0, frozenset()):
        return [reps[i] for i in chosen]
    return None


def supports_m_array(qtype: QfType, m: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return find_m_array(qtype, m, node_cap) is not None


def max_packing_bruteforce(tuples: Sequence[Sequence]) -> int:
    """Largest pairwise disjoint subfamily by subset enumeration (small inputs only)."""
    sets = [frozenset(t) for t in tuples]
    best = 0
    for mask in range(1 << len(sets)):
        chosen = [sets[i] for i in range(len(sets)) if mask >> i & 1]
        if len(chosen) <= best:
            continue
        total = sum(len(s) for s in chosen)
        if len(frozenset().union(*chosen)) == total:
            best = len(chosen)
    return best


# -- scan -------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceResult:
    xlen: int
    B: tuple
    type_count: int
    supporting: int
    by_pattern: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def max_pattern(self) -> int:
        return max((c for _, c in self.by_pattern), default=0)

    def measure(self, mode: str) -> int:
        return self.max_pattern if mode == "pattern" else self.supporting

    def to_json(self) -> dict:
        return {
            "xlen": self.xlen,
            "B": list(self.B),
            "types": self.type_count,
            "supporting": self.supporting,
            "supporting_by_equality_pattern": [{"pattern": list(p), "count": c} for p, c in self.by_pattern],
        }


@dataclass(frozen=True)
class ArrayWitness:
    xlen: int
    B: tuple
    pattern: tuple[int, ...] | None
    types: tuple[QfType, ...]
    arrays: tuple[tuple[tuple, ...], ...]

    def to_json(self) -> dict:
        return {
            "xlen": self.xlen,
            "B": list(self.B),
            "equality_pattern": None if self.pattern is None else list(self.pattern),
            "types": [
                {"true_atoms": t.positive_atoms(), "array": [list(r) for r in arr]}
                for t, arr in zip(self.types, self.arrays)
            ],
        }


@dataclass(frozen=True)
class ArrayReport:
    relation: str
    m: int
    N: int
    bcap: int
    count_mode: str
    instances: tuple[InstanceResult, ...]
    max_supporting: int
    respected: bool
    witness: ArrayWitness | None
    sampled: bool
    seed: int | None
    notes: tuple[str, ...] = (SCAN_NOTE, DISJOINTNESS_NOTE)

    @property
    def verdict(self) -> str:
        return "respected" if self.respected else "violated"

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "m": self.m,
            "N": self.N,
            "bcap": self.bcap,
            "count_mode": self.count_mode,
            "verdict": self.verdict,
            "max_supporting": self.max_supporting,
            "instances_scanned": len(self.instances),
            "sampled": self.sampled,
            "seed": self.seed,
            "witness": None if self.witness is None else self.witness.to_json(),
            "notes": list(self.notes),
            "instances": [i.to_json() for i in self.instances],
        }


def parameter_sets(universe: Sequence, bcap: int, cap: int = DEFAULT_SUBSET_CAP, seed: int = 0) -> tuple[list[tuple], bool]:
    """Subsets of size <= bcap in colex order; a seeded uniform sample when there are more than ``cap``."""
    n = len(universe)
    total = sum(comb(n, j) for j in range(bcap + 1))
    if total <= cap:
        idx_sets = [c for j in range(bcap + 1) for c in itertools.combinations(range(n), j)]
        sampled = False
    else:
        rng = random.Random(seed)
        weights = [comb(n, j) for j in range(bcap + 1)]
        seen: set = set()
        while len(seen) < cap:
            j = rng.choices(range(bcap + 1), weights=weights)[0]
            seen.add(tuple(sorted(rng.sample(range(n), j))))
        idx_sets = list(seen)
        sampled = True
    idx_sets.sort(key=lambda c: sum(1 << i for i in c))
    return [tuple(universe[i] for i in c) for c in idx_sets], sampled


def _instance(structure: FinStructure, R: str, xlen: int, B: tuple, m: int, node_cap: int):
    types = qf_types(structure, R, xlen, B)
    by_pattern: dict[tuple, list] = defaultdict(list)
    supporting = 0
    for t in types:
        arr = find_m_array(t, m, node_cap)
        if arr is not None:
            supporting += 1
            by_pattern[t.equality_pattern].append((t, tuple(arr)))
    res = InstanceResult(
        xlen, B, len(types), supporting, tuple(sorted((p, len(v)) for p, v in by_pattern.items()))
    )
    return res, dict(by_pattern)


def ub_array_scan(
    structure: FinStructure,
    R: str,
    m: int,
    N: int,
    bcap: int,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    seed: int = 0,
    count_mode: str = "pattern",
    node_cap: int = DEFAULT_NODE_CAP,
    work_budget: int = DEFAULT_SCAN_WORK,
    workers: int = 1,
) -> ArrayReport:
    """Scan every length of x and every B with |B| <= bcap for many m-array types.

    ``count_mode="pattern"`` bounds supporting types within each equality
    pattern on x (finitely many patterns, so a bound per pattern and a bound
    overall exist together); ``"total"`` counts all supporting types.
    """
    if count_mode not in ("pattern", "total"):
        raise ValueError("count_mode must be 'pattern' or 'total'")
    if m < 1 or N < 0:
        raise ValueError("need m >= 1 and N >= 0")
    rel = structure.relation(R)
    if bcap > len(structure.universe):
        raise ValueError("bcap exceeds the universe size")
    Bs, sampled = parameter_sets(structure.universe, bcap, subset_cap, seed)
    n = len(structure.universe)
    work = 0
    for xlen in range(1, rel.arity + 1):
        for B in Bs:
            work += n**xlen * ((xlen + len(B)) ** rel.arity + xlen * (xlen + len(B)))
    if work > work_budget:
        raise BudgetExceeded(f"array scan needs about {work} atom evaluations", work, work_budget)

    jobs = [(structure, R, xlen, B, m, node_cap) for xlen in range(1, rel.arity + 1) for B in Bs]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_instance, *zip(*jobs)))
    else:
        results = [_instance(*j) for j in jobs]

    instances = tuple(r for r, _ in results)
    best = max(range(len(results)), key=lambda i: (results[i][0].measure(count_mode), -i))
    best_res, best_groups = results[best]
    measure = best_res.measure(count_mode)
    witness = None
    if measure > N:
        if count_mode == "pattern":
            pattern = max(best_groups, key=lambda p: (len(best_groups[p]), tuple(-x for x in p)))
            chosen = best_groups[pattern][: N + 1]
        else:
            pattern = None
            chosen = [x for p in sorted(best_groups) for x in best_groups[p]][: N + 1]
        witness = ArrayWitness(
            best_res.xlen, best_res.B, pattern, tuple(t for t, _ in chosen), tuple(a for _, a in chosen)
        )
    return ArrayReport(
        R, m, N, bcap, count_mode, instances, measure, measure <= N, witness, sampled, seed if sampled else None
    )


def verify_array_witness(structure: FinStructure, report: ArrayReport) -> bool:
    """Independent check: each array is m disjoint tuples realizing its recorded diagram."""
    w = report.witness
    if w is None:
        return report.respected
    rel = structure.relation(report.relation)
    if len(w.types) != report.N + 1 or len({t.diagram for t in w.types}) != len(w.types):
        return False
    for t, arr in zip(w.types, w.arrays):
        if len(arr) != report.m:
            return False
        sets = [set(a) for a in arr]
        if sum(len(s) for s in sets) != len(set().union(*sets)):
            return False
        for a in arr:
            if tuple(eval_atom(rel, atom, a) for atom in t.atoms) != t.diagram:
                return False
        if w.pattern is not None and t.equality_pattern != w.pattern:
            return False
    return True
