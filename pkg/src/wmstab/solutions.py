"""Solutions of signed linear equations over a finite prefix of A.

A query fixes nonzero integer coefficients d_1..d_k, a target r and a finite
forbidden set V.  Its solution set is the set of ordered tuples a in A^k with
d_1 a_1 + ... + d_k a_k = r; the subsum filter additionally discards tuples
having a proper nonempty signed subsum in V.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, lcm
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .algebra import as_rational, format_rational
from .errors import BudgetExceeded, DuplicateValues

DEFAULT_CAP = 10**6
DEFAULT_COEFF_CAP = 8
DEFAULT_WORK = 2 * 10**7
DEFAULT_ESS_WORK = 10**9
DEFAULT_PY_WORK = 2 * 10**6
DEFAULT_WITNESS_CAP = 10**4

_INT64_SAFE = 1 << 60


def _norm(q):
    q = as_rational(q)
    return q.numerator if q.denominator == 1 else q


def _fmt(v) -> str:
    return format_rational(as_rational(v))


@dataclass(frozen=True)
class SignedQuery:
    coefficients: tuple[int, ...]
    target: object = 0
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if len(coeffs) < 1:
            raise ValueError("arity k must be >= 1")
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                raise TypeError(f"coefficients must be integers, got {c!r}")
            if c == 0:
                raise ValueError("coefficients must be nonzero")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coeffs))
        object.__setattr__(self, "target", _norm(self.target))
        object.__setattr__(self, "forbidden", frozenset(_norm(v) for v in self.forbidden))

    @classmethod
    def signs(cls, signs: Sequence[int], target=0, forbidden: Iterable = ()) -> "SignedQuery":
        if any(s not in (1, -1) for s in signs):
            raise ValueError("sign vector entries must be +1 or -1")
        return cls(tuple(signs), target, frozenset(forbidden))

    @property
    def k(self) -> int:
        return len(self.coefficients)

    def negated(self) -> "SignedQuery":
        return SignedQuery(tuple(-c for c in self.coefficients), -self.target, self.forbidden)

    def permuted(self, perm: Sequence[int]) -> "SignedQuery":
        """Coordinate i of the result is coordinate perm[i] of this query."""
        if sorted(perm) != list(range(self.k)):
            raise ValueError("not a permutation of the coordinates")
        return SignedQuery(tuple(self.coefficients[p] for p in perm), self.target, self.forbidden)

    def check_cap(self, coeff_cap: int | None) -> None:
        if coeff_cap is not None and any(abs(c) > coeff_cap for c in self.coefficients):
            raise ValueError(f"coefficient magnitude exceeds cap {coeff_cap}")

    def satisfied_by(self, tup: Sequence) -> bool:
        return len(tup) == self.k and sum(c * a for c, a in zip(self.coefficients, tup)) == self.target

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "coefficients": list(self.coefficients),
            "target": _fmt(self.target),
            "forbidden": sorted((_fmt(v) for v in self.forbidden), key=lambda s: as_rational(s)),
        }


def distinct_values(prefix) -> list:
    """Prefix values as exact numbers; duplicates are an error, not merged."""
    terms = prefix.terms if hasattr(prefix, "terms") else prefix
    vals = [_norm(t) for t in terms]
    seen: dict = {}
    for i, v in enumerate(vals):
        if v in seen:
            raise DuplicateValues(f"value {_fmt(v)} appears at indices {seen[v]} and {i}")
        seen[v] = i
    return vals


# -- enumeration --------------------------------------------------------------


def _half_sums(vals: list, coeffs: Sequence[int]) -> Counter:
    out: Counter = Counter()
    for tup in itertools.product(vals, repeat=len(coeffs)):
        out[sum(c * a for c, a in zip(coeffs, tup))] += 1
    return out


def _check_work(n: int, k: int, work_budget: int) -> int:
    h = ceil(k / 2)
    work = n**h + n ** (k - h)
    if work > work_budget:
        raise BudgetExceeded(
            f"meet-in-the-middle needs about {work} half-tuples for |A|={n}, k={k}", work, work_budget
        )
    return h


def iter_solutions(vals: Sequence, query: SignedQuery, work_budget: int = DEFAULT_WORK) -> Iterator[tuple]:
    """Solutions in lexicographic order of ascending values.

    The left ceil(k/2) coordinates are walked in lex order; for each, the
    matching right halves come from a table whose lists are built in lex
    order, so the concatenation is lex ordered overall.
    """
    vals = sorted(vals)
    k = query.k
    h = _check_work(len(vals), k, work_budget)
    left_c, right_c = query.coefficients[:h], query.coefficients[h:]
    table: dict = defaultdict(list)
    for tup in itertools.product(vals, repeat=k - h):
        table[sum(c * a for c, a in zip(right_c, tup))].append(tup)
    r = query.target
    for left in itertools.product(vals, repeat=h):
        rest = table.get(r - sum(c * a for c, a in zip(left_c, left)))
        if rest:
            for right in rest:
                yield left + right


def _iter_int_solutions(arr: np.ndarray, coeffs: Sequence[int], r: int) -> Iterator[tuple]:
    """Lex-ordered solutions over a sorted int64 array; numpy solves the last coordinate."""
    k = len(coeffs)
    if k == 1:
        if r % coeffs[0] == 0:
            x = r // coeffs[0]
            pos = int(np.searchsorted(arr, x))
            if pos < len(arr) and arr[pos] == x:
                yield (x,)
        return
    cb, cl = coeffs[-2], coeffs[-1]
    lst = arr.tolist()
    top = len(arr) - 1
    for combo in itertools.product(lst, repeat=k - 2):
        num = (r - sum(c * a for c, a in zip(coeffs, combo))) - cb * arr
        ok = num % cl == 0
        cand = num[ok] // cl
        hit = arr[np.minimum(np.searchsorted(arr, cand), top)] == cand
        for b, c in zip(arr[ok][hit].tolist(), cand[hit].tolist()):
            yield combo + (b, c)


def count_solutions(prefix, query: SignedQuery, work_budget: int = DEFAULT_WORK, coeff_cap: int | None = DEFAULT_COEFF_CAP) -> int:
    """Exact |A(d;r)| without materializing tuples."""
    query.check_cap(coeff_cap)
    vals = distinct_values(prefix)
    h = _check_work(len(vals), query.k, work_budget)
    left = _half_sums(vals, query.coefficients[:h])
    right = _half_sums(vals, query.coefficients[h:])
    r = query.target
    return sum(m * right.get(r - s, 0) for s, m in left.items())


@dataclass(frozen=True)
class SolutionSet:
    query: SignedQuery
    count: int
    tuples: tuple[tuple, ...]
    truncated: bool

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "count": self.count,
            "truncated": self.truncated,
            "tuples": [[_fmt(a) for a in t] for t in self.tuples],
        }


def solution_set(
    prefix,
    query: SignedQuery,
    cap: int = DEFAULT_CAP,
    work_budget: int = DEFAULT_WORK,
    coeff_cap: int | None = DEFAULT_COEFF_CAP,
) -> SolutionSet:
    """Tuples up to ``cap`` plus the exact count."""
    query.check_cap(coeff_cap)
    vals = distinct_values(prefix)
    tuples = list(itertools.islice(iter_solutions(vals, query, work_budget), cap + 1))
    if len(tuples) <= cap:
        return SolutionSet(query, len(tuples), tuple(tuples), False)
    total = count_solutions(vals, query, work_budget, coeff_cap)
    return SolutionSet(query, total, tuple(tuples[:cap]), True)


def enumerate_solutions(
    prefix,
    query: SignedQuery,
    cap: int = DEFAULT_CAP,
    work_budget: int = DEFAULT_WORK,
    coeff_cap: int | None = DEFAULT_COEFF_CAP,
) -> list[tuple]:
    """All ordered k-tuples over the prefix solving the equation."""
    sol = solution_set(prefix, query, cap, work_budget, coeff_cap)
    if sol.truncated:
        raise BudgetExceeded(f"{sol.count} solutions exceed the materialization cap {cap}", sol.count, cap)
    return list(sol.tuples)


# -- subsum filter ------------------------------------------------------------


def _proper_subsets(k: int) -> list[tuple[int, ...]]:
    return [I for size in range(1, k) for I in itertools.combinations(range(k), size)]


def passes_subsum_filter(tup: Sequence, coefficients: Sequence[int], forbidden) -> bool:
    if not forbidden:
        return True
    for I in _proper_subsets(len(coefficients)):
        if sum(coefficients[i] * tup[i] for i in I) in forbidden:
            return False
    return True


def filter_subsums(solutions: Iterable[Sequence], query: SignedQuery) -> list[tuple]:
    """Keep tuples whose proper nonempty signed subsums all avoid V."""
    sols = [tuple(t) for t in solutions]
    V = query.forbidden
    if not V or query.k == 1:
        return sols
    subsets = _proper_subsets(query.k)
    c = query.coefficients
    return [t for t in sols if all(sum(c[i] * t[i] for i in I) not in V for I in subsets)]


# -- ESS profile ----------------------------------------------------------------


@dataclass(frozen=True)
class ESSWitness:
    coefficients: tuple[int, ...]
    target: object
    tuples: tuple[tuple, ...]
    truncated: bool

    def to_json(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "target": _fmt(self.target),
            "truncated": self.truncated,
            "tuples": [[_fmt(a) for a in t] for t in self.tuples],
        }


@dataclass(frozen=True)
class ESSArity:
    k: int
    U: frozenset
    V: frozenset
    n_k: int
    witness: ESSWitness | None
    engine: str
    patterns: tuple[tuple[int, ...], ...]
    targets_scanned: int

    def to_json(self) -> dict:
        key = lambda s: as_rational(s)  # noqa: E731
        return {
            "k": self.k,
            "U": sorted((_fmt(u) for u in self.U), key=key),
            "V": sorted((_fmt(v) for v in self.V), key=key),
            "n_k": self.n_k,
            "engine": self.engine,
            "sign_patterns": [list(p) for p in self.patterns],
            "targets_scanned": self.targets_scanned,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass(frozen=True)
class ESSProfile:
    size: int
    kmax: int
    arities: tuple[ESSArity, ...]
    note: str = field(
        default="exact for this prefix; evidence about A, not a proof of the ESS property"
    )

    def n(self, k: int) -> int:
        return self.arities[k - 1].n_k

    def to_json(self) -> dict:
        return {"prefix_size": self.size, "kmax": self.kmax, "note": self.note, "arities": [a.to_json() for a in self.arities]}


def _sign_patterns(k: int, all_vectors: bool) -> list[tuple[int, ...]]:
    if all_vectors:
        return sorted(itertools.product((1, -1), repeat=k), reverse=True)
    # permuting coordinates is a bijection on solutions and preserves the
    # filter, so counts depend only on how many signs are positive
    return [(1,) * p + (-1,) * (k - p) for p in range(k, -1, -1)]


def _scaled(vals: list, U: Iterable, V: Iterable) -> tuple[list[int], int, set[int], set[int]]:
    qs = [as_rational(v) for v in vals]
    scale = lcm(*(q.denominator for q in qs)) if qs else 1

    def ints(xs):
        out = set()
        for x in xs:
            y = as_rational(x) * scale
            if y.denominator == 1:
                out.add(int(y))
        return out

    return [int(q * scale) for q in qs], scale, ints(U), ints(V)


def _at(f: np.ndarray, off: int, x: np.ndarray) -> np.ndarray:
    idx = x - off
    ok = (idx >= 0) & (idx < len(f))
    out = np.zeros(len(x), dtype=np.int64)
    out[ok] = f[idx[ok]]
    return out


def _conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer convolution: direct for short inputs, rounded FFT when float64 error is provably small."""
    if min(len(a), len(b)) <= 64 or len(a) * len(b) <= 4 * 10**6:
        return np.convolve(a, b)
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    # roundoff is about eps * log2(size) * |a|_2 * |b|_2; keep it far below 1/2
    bound = 2.3e-16 * 8 * size.bit_length() * float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if bound >= 0.05:
        return np.convolve(a, b)
    out = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:n]
    out = np.rint(out).astype(np.int64)
    if int(out.sum()) != int(a.sum()) * int(b.sum()):
        raise AssertionError("FFT convolution lost exactness")
    return out


def _dense_counts(vals: list[int], signs: tuple[int, ...], V: frozenset) -> tuple[np.ndarray, np.ndarray]:
    """Filtered counts for every target via convolution of indicator vectors (k <= 3)."""
    k = len(signs)
    ind = []
    for s in signs:
        xs = [s * a for a in vals if not (k >= 2 and s * a in V)]
        if not xs:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        lo = min(xs)
        f = np.zeros(max(xs) - lo + 1, dtype=np.int64)
        f[np.asarray(xs, dtype=np.int64) - lo] = 1
        ind.append((f, lo))
    pairs = {}
    total, off = ind[0]
    for idx, (f, o) in enumerate(ind[1:], start=1):
        total = _conv(total, f)
        off += o
        if idx == 1:
            pairs[(0, 1)] = total
    good = total.copy()
    if k == 3 and V:
        r = np.arange(off, off + len(good), dtype=np.int64)
        Vs = sorted(V)
        for i, j, l in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            gij = pairs[(i, j)] if (i, j) in pairs else _conv(ind[i][0], ind[j][0])
            goff = ind[i][1] + ind[j][1]
            fl, lo_l = ind[l]
            for v in Vs:
                if 0 <= v - goff < len(gij) and gij[v - goff]:
                    good -= gij[v - goff] * _at(fl, lo_l, r - v)
        # two pair events sharing coordinate i: x_i = v + w - r, x_j = r - w, x_l = r - v
        for i, j, l in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
            fi, oi = ind[i]
            fj, oj = ind[j]
            fl, ol = ind[l]
            for v in Vs:
                for w in Vs:
                    good += _at(fi, oi, v + w - r) * _at(fj, oj, r - w) * _at(fl, ol, r - v)
        # all three pair sums in V: x_1 = r - v23, x_2 = r - v13, x_3 = r - v12 with 2r = v12 + v13 + v23
        (f1, o1), (f2, o2), (f3, o3) = ind
        for v12, v13, v23 in itertools.product(Vs, repeat=3):
            twice = v12 + v13 + v23
            if twice % 2:
                continue
            t = twice // 2
            x1, x2, x3 = t - v23, t - v13, t - v12
            if all(0 <= x - o < len(f) and f[x - o] for x, f, o in ((x1, f1, o1), (x2, f2, o2), (x3, f3, o3))):
                good[t - off] -= 1
    nz = np.flatnonzero(good)
    return np.arange(off, off + len(good), dtype=np.int64)[nz], good[nz]


def _merge_counts(u1, c1, u2, c2):
    u = np.concatenate([u1, u2])
    c = np.concatenate([c1, c2])
    order = np.argsort(u, kind="stable")
    u, c = u[order], c[order]
    if len(u) == 0:
        return u, c
    starts = np.flatnonzero(np.r_[True, u[1:] != u[:-1]])
    return u[starts], np.add.reduceat(c, starts)


def _numpy_counts(vals: list[int], signs: tuple[int, ...], V: frozenset, flush: int = 4 * 10**6) -> tuple[np.ndarray, np.ndarray]:
    """Filtered counts by chunked enumeration: Python over k-2 coordinates, numpy over the last two."""
    k = len(signs)
    Vs = np.asarray(sorted(V), dtype=np.int64)
    xs = []
    for s in signs:
        arr = np.asarray([s * a for a in vals], dtype=np.int64)
        if k >= 2 and len(Vs):
            arr = arr[~np.isin(arr, Vs)]
        xs.append(arr)
    if k == 1:
        u, c = np.unique(xs[0], return_counts=True)
        return u, c.astype(np.int64)
    acc_u = np.zeros(0, dtype=np.int64)
    acc_c = np.zeros(0, dtype=np.int64)
    pending: list[np.ndarray] = []
    pending_size = 0
    xa, xb = xs[k - 2], xs[k - 1]
    nfix = k - 2
    full = (1 << nfix) - 1
    fixed_lists = [x.tolist() for x in xs[:nfix]]
    Vset = set(V)
    for combo in itertools.product(*fixed_lists):
        fs = [0] * (1 << nfix)
        for m in range(1, 1 << nfix):
            low = (m & -m).bit_length() - 1
            fs[m] = fs[m & (m - 1)] + combo[low]
        # subsets inside the fixed coordinates (k >= 3 makes them proper)
        if any(fs[m] in Vset for m in range(1, 1 << nfix)):
            continue
        S = fs[full] + xa[:, None] + xb[None, :]
        if len(Vs):
            bad = np.zeros(S.shape, dtype=bool)
            for m in range(1 << nfix):
                if m:
                    bad |= np.isin(fs[m] + xa, Vs)[:, None]
                    bad |= np.isin(fs[m] + xb, Vs)[None, :]
                if m != full:
                    bad |= np.isin(fs[m] + xa[:, None] + xb[None, :], Vs)
            S = S[~bad]
        else:
            S = S.ravel()
        pending.append(S)
        pending_size += S.size
        if pending_size >= flush:
            u, c = np.unique(np.concatenate(pending), return_counts=True)
            acc_u, acc_c = _merge_counts(acc_u, acc_c, u, c.astype(np.int64))
            pending, pending_size = [], 0
    if pending:
        u, c = np.unique(np.concatenate(pending), return_counts=True)
        acc_u, acc_c = _merge_counts(acc_u, acc_c, u, c.astype(np.int64))
    return acc_u, acc_c


def _python_counts(vals: list[int], signs: tuple[int, ...], V: frozenset) -> tuple[list, list]:
    k = len(signs)
    counts: Counter = Counter()
    for tup in itertools.product(vals, repeat=k):
        if k >= 2 and not passes_subsum_filter(tup, signs, V):
            continue
        counts[sum(s * a for s, a in zip(signs, tup))] += 1
    keys = sorted(counts)
    return keys, [counts[r] for r in keys]


def _pattern_counts(engine: str, vals: list[int], signs: tuple[int, ...], V: frozenset):
    if engine == "dense":
        return _dense_counts(vals, signs, V)
    if engine == "numpy":
        return _numpy_counts(vals, signs, V)
    return _python_counts(vals, signs, V)


def _choose_engine(vals: list[int], k: int, work_budget: int, py_budget: int, engine: str | None) -> str:
    n = len(vals)
    big = max((abs(a) for a in vals), default=0)
    int64_ok = big * k < _INT64_SAFE
    span = (max(vals) - min(vals) + 1) if vals else 0
    # FFT convolutions of length about k * span, four of them per pattern at k = 3
    dense_cost = 8 * k * span * max(1, (k * span).bit_length()) if k <= 3 and int64_ok else None
    enum_cost = n**k
    if engine is not None:
        if engine == "dense" and dense_cost is None:
            raise ValueError("dense engine needs k <= 3 and int64-range values")
        if engine == "numpy" and not int64_ok:
            raise ValueError("numpy engine needs int64-range values")
        return engine
    if dense_cost is not None and dense_cost <= min(enum_cost, work_budget):
        return "dense"
    if int64_ok and enum_cost <= work_budget:
        return "numpy"
    if enum_cost <= py_budget:
        return "python"
    cheapest = min(enum_cost, dense_cost) if dense_cost is not None else enum_cost
    raise BudgetExceeded(
        f"exact profile at k={k} for |A|={n} needs about {cheapest} operations", cheapest, work_budget
    )


def _normalize_per_k(spec, kmax: int) -> dict[int, frozenset]:
    if spec is None:
        return {k: frozenset() for k in range(1, kmax + 1)}
    if isinstance(spec, Mapping):
        return {k: frozenset(_norm(x) for x in spec.get(k, ())) for k in range(1, kmax + 1)}
    same = frozenset(_norm(x) for x in spec)
    return {k: same for k in range(1, kmax + 1)}


def ess_profile(
    prefix,
    kmax: int,
    U=None,
    V=None,
    work_budget: int = DEFAULT_ESS_WORK,
    py_budget: int = DEFAULT_PY_WORK,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    workers: int = 1,
    all_sign_vectors: bool = False,
    engine: str | None = None,
) -> ESSProfile:
    """Exact n_k for k <= kmax over all sign vectors and achievable targets outside U_k.

    ``U`` and ``V`` are either mappings k -> set or one set used for every k.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    vals = distinct_values(prefix)
    if not vals:
        raise ValueError("prefix is empty")
    Uk = _normalize_per_k(U, kmax)
    Vk = _normalize_per_k(V, kmax)
    ivals, scale, _, _ = _scaled(vals, (), ())

    jobs = []
    plan = []
    for k in range(1, kmax + 1):
        _, _, u_int, v_int = _scaled(vals, Uk[k], Vk[k])
        eng = _choose_engine(ivals, k, work_budget, py_budget, engine)
        patterns = _sign_patterns(k, all_sign_vectors)
        plan.append((k, eng, patterns, u_int, frozenset(v_int)))
        for p in patterns:
            jobs.append((eng, ivals, p, frozenset(v_int)))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pattern_counts, *zip(*jobs)))
    else:
        results = [_pattern_counts(*job) for job in jobs]

    arities = []
    pos = 0
    for k, eng, patterns, u_int, v_int in plan:
        best = (0, None, None)
        scanned = 0
        for p in patterns:
            rs, cs = results[pos]
            pos += 1
            rs = np.asarray(rs, dtype=object if eng == "python" else np.int64)
            cs = np.asarray(cs, dtype=np.int64)
            if u_int and len(rs):
                if eng == "python":
                    keep = np.asarray([r not in u_int for r in rs], dtype=bool)
                else:
                    keep = ~np.isin(rs, np.asarray(sorted(u_int), dtype=np.int64))
                rs, cs = rs[keep], cs[keep]
            scanned += len(rs)
            if len(cs):
                i = int(np.argmax(cs))
                if cs[i] > best[0]:
                    best = (int(cs[i]), p, int(rs[i]))
        n_k, p, r_int = best
        witness = None
        if p is not None:
            r = _norm(Fraction(r_int, scale))
            q = SignedQuery(p, r, Vk[k])
            if eng == "python":
                sols = iter_solutions(vals, q, work_budget=max(DEFAULT_WORK, work_budget))
            else:
                back = {iv: v for iv, v in zip(ivals, vals)}
                found = _iter_int_solutions(np.asarray(sorted(ivals), dtype=np.int64), p, r_int)
                sols = (tuple(back[a] for a in t) for t in found)
            gen = (t for t in sols if passes_subsum_filter(t, p, q.forbidden))
            tuples = tuple(itertools.islice(gen, witness_cap + 1))
            truncated = len(tuples) > witness_cap
            tuples = tuples[:witness_cap]
            if not truncated and len(tuples) != n_k:
                raise AssertionError(
                    f"engine {eng} counted {n_k} at k={k}, r={_fmt(r)} but enumeration found {len(tuples)}"
                )
            witness = ESSWitness(p, r, tuples, truncated)
        arities.append(ESSArity(k, Uk[k], Vk[k], n_k, witness, eng, tuple(patterns), scanned))
    return ESSProfile(len(vals), kmax, tuple(arities))


def verify_witness(prefix, arity: ESSArity) -> bool:
    """Independent re-check of a witness: membership, equation, filter, count."""
    w = arity.witness
    if w is None:
        return arity.n_k == 0
    A = set(distinct_values(prefix))
    q = SignedQuery(w.coefficients, w.target, arity.V)
    if w.target in arity.U:
        return False
    if len(set(w.tuples)) != len(w.tuples):
        return False
    for t in w.tuples:
        if not all(a in A for a in t) or not q.satisfied_by(t):
            return False
        if arity.k > 1 and not passes_subsum_filter(t, q.coefficients, q.forbidden):
            return False
    return w.truncated or len(w.tuples) == arity.n_k


# -- fibers ---------------------------------------------------------------------


@dataclass(frozen=True)
class FiberSpectrum:
    arity: int
    per_coordinate: tuple[int, ...]
    N: int
    witness: tuple[int, object] | None  # (coordinate, value) attaining N

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "per_coordinate": list(self.per_coordinate),
            "N": self.N,
            "witness": None if self.witness is None else {"coordinate": self.witness[0], "value": _fmt(self.witness[1])},
        }


def fiber_spectrum(tuples: Iterable[Sequence]) -> FiberSpectrum:
    tuples = [tuple(t) for t in tuples]
    if not tuples:
        return FiberSpectrum(0, (), 0, None)
    k = len(tuples[0])
    if any(len(t) != k for t in tuples):
        raise ValueError("tuples have mixed arities")
    per = []
    best: tuple[int, tuple[int, object] | None] = (0, None)
    for i in range(k):
        counts = Counter(t[i] for t in tuples)
        value, size = max(counts.items(), key=lambda kv: kv[1])  # first seen wins ties
        per.append(size)
        if size > best[0]:
            best = (size, (i, value))
    return FiberSpectrum(k, tuple(per), best[0], best[1])


# -- sumsets --------------------------------------------------------------------


@dataclass(frozen=True)
class SumsetReport:
    n: int
    window: int
    signed: bool
    elements: tuple
    ap_length: int
    ap_start: object
    ap_difference: object

    @property
    def progression(self) -> tuple:
        if self.ap_length == 0:
            return ()
        return tuple(self.ap_start + i * self.ap_difference for i in range(self.ap_length))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "window": self.window,
            "signed": self.signed,
            "size": len(self.elements),
            "elements": [_fmt(x) for x in self.elements],
            "longest_ap": {
                "length": self.ap_length,
                "start": None if self.ap_start is None else _fmt(self.ap_start),
                "difference": None if self.ap_difference is None else _fmt(self.ap_difference),
            },
        }


def restricted_sumset(vals: Sequence, n: int, M, signed: bool = True, budget: int = 10**7) -> set:
    """Sums of between 1 and n elements of A (or of A and -A) lying in [-M, M]."""
    base = set(vals) | ({-v for v in vals} if signed else set())
    if not base:
        return set()
    amax = max(abs(v) for v in base)
    found = set()
    level = {0}
    for j in range(1, n + 1):
        reach = M + (n - j) * amax
        nxt = set()
        for s in level:
            for a in base:
                t = s + a
                if -reach <= t <= reach:
                    nxt.add(t)
        if len(nxt) > budget:
            raise BudgetExceeded(f"sumset level {j} has {len(nxt)} elements", len(nxt), budget)
        level = nxt
        found.update(t for t in level if -M <= t <= M)
    return found


def longest_ap(elements: Iterable) -> tuple[int, object, object]:
    """(length, start, difference) of a longest AP inside a finite set.

    Ties go to the smaller difference, then the smaller start.  A single
    element is a progression of length 1 with difference 0.
    """
    s = sorted(set(elements))
    if not s:
        return 0, None, None
    members = set(s)
    best = (1, s[0], 0)
    top = s[-1]
    for i, x in enumerate(s):
        for y in s[i + 1 :]:
            d = y - x
            if (top - x) // d + 1 < best[0]:
                break
            if x - d in members:
                continue
            length = 2
            z = y + d
            while z in members:
                length += 1
                z += d
            if (length, -d, -x) > (best[0], -best[2], -best[1]):
                best = (length, x, d)
    return best


def sumset_ap(prefix, n: int, M, signed: bool = True) -> SumsetReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    if M < 1:
        raise ValueError("window bound M must be >= 1")
    vals = distinct_values(prefix)
    elems = tuple(sorted(restricted_sumset(vals, n, M, signed)))
    length, start, diff = longest_ap(elems)
    return SumsetReport(n, M, signed, elems, length, start, diff)
