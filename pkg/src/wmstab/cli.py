"""Command line front end.

Exit codes: 0 certified (any class) or computation done, 2 inconclusive,
3 refuted hypothesis, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import as_rational, format_rational
from .arrays import FinStructure, ub_array_scan
from .certify import (
    Certificate,
    certify_fgm,
    certify_lacunary,
    certify_recurrence,
    certify_weak_minimality,
    emit_certificate,
)
from .sequences import RecurrenceSpec, SequencePrefix, load_spec, prefix_of, residue_profile
from .sequences.specfile import read_terms
from .solutions import SignedQuery, ess_profile, filter_subsums, solution_set, sumset_ap

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_REFUTED = 0, 1, 2, 3


def _values(text: str) -> list:
    return [as_rational(v) for v in text.replace(",", " ").split()] if text.strip() else []


def _load_set(arg: str, N: int):
    """A spec file, a plain list file, or an inline comma list."""
    p = Path(arg)
    if p.exists():
        try:
            spec = load_spec(p)
        except (ValueError, AttributeError, TypeError):
            return SequencePrefix(read_terms(p), provenance=str(p))
        return prefix_of(spec, N)
    vals = tuple(int(v) if as_rational(v).denominator == 1 else as_rational(v) for v in _values(arg))
    if not vals:
        raise ValueError(f"{arg!r} is neither a file nor a list of numbers")
    return SequencePrefix(vals, provenance="inline")


def _emit(args, payload: dict, text: str) -> None:
    if args.json == "-":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    if args.json:
        Path(args.json).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _certify_one(kind: str, path: str, N: int, gens) -> Certificate:
    spec = load_spec(path)
    if kind == "recurrence":
        if not isinstance(spec, RecurrenceSpec):
            raise ValueError(f"{path}: not a recurrence spec")
        return certify_recurrence(spec)
    if kind == "lacunary":
        return certify_lacunary(spec, N)
    if gens is None:
        raise ValueError("fgm needs --gens")
    return certify_fgm(prefix_of(spec, N), gens)


def cmd_certify(args) -> int:
    gens = _values(args.gens) if args.gens else None
    paths = args.spec
    if len(paths) == 1:
        results = [_certify_one(args.kind, paths[0], args.prefix, gens)]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
            futures = [pool.submit(_certify_one, args.kind, p, args.prefix, gens) for p in paths]
        results = []
        for p, f in zip(paths, futures):
            try:
                results.append(f.result())
            except Exception as exc:  # noqa: BLE001
                print(f"error: {p}: {exc}", file=sys.stderr)
                results.append(None)
    certs = [c for c in results if c is not None]
    fmt = "json" if args.format == "json" else "text"
    text = "\n".join(emit_certificate(c, fmt) for c in certs)
    payload = certs[0].to_json() if len(paths) == 1 else [c.to_json() for c in certs]
    _emit(args, payload, text)
    if any(c is None for c in results):
        return EXIT_ERROR
    return max(c.exit_code for c in certs)


def cmd_weakmin(args) -> int:
    c = certify_weak_minimality(args.group)
    _emit(args, c.to_json(), emit_certificate(c, "json" if args.format == "json" else "text"))
    return c.exit_code


def cmd_solutions(args) -> int:
    prefix = _load_set(args.set, args.prefix)
    coeffs = tuple(int(c) for c in args.coeffs.split(","))
    q = SignedQuery(coeffs, as_rational(args.target), frozenset(_values(args.forbid or "")))
    sol = solution_set(prefix, q, cap=args.cap, coeff_cap=args.coeff_cap)
    kept = filter_subsums(sol.tuples, q)
    payload = {**sol.to_json(), "filtered_count": len(kept) if not sol.truncated else None,
               "filtered": [[format_rational(as_rational(a)) for a in t] for t in kept]}
    lines = [f"{sol.count} solutions" + (" (materialized list truncated)" if sol.truncated else "")]
    if q.forbidden:
        lines.append(f"{len(kept)} after the subsum filter" + (" (of the materialized part)" if sol.truncated else ""))
    lines += [" ".join(format_rational(as_rational(a)) for a in t) for t in kept[: args.show]]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _per_k(default: str | None, overrides: Sequence[str] | None) -> dict | None:
    if default is None and not overrides:
        return None
    out: dict = {}
    base = _values(default) if default is not None else []
    for k in range(1, 65):
        out[k] = list(base)
    for item in overrides or []:
        k, _, vals = item.partition("=")
        out[int(k)] = _values(vals)
    return out


def cmd_ess(args) -> int:
    prefix = _load_set(args.set, args.prefix)
    U = _per_k(args.u0, args.u)
    V = _per_k(args.v0, args.v)
    prof = ess_profile(prefix, args.kmax, U=U, V=V, workers=args.workers)
    lines = [f"|A| = {prof.size}"]
    for a in prof.arities:
        w = a.witness
        wtxt = "" if w is None else f" at signs {w.coefficients}, r = {format_rational(as_rational(w.target))}"
        lines.append(f"n_{a.k} = {a.n_k}{wtxt} [{a.engine}]")
    lines.append(prof.note)
    _emit(args, prof.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_arrays(args) -> int:
    s = FinStructure.load(args.structure)
    rep = ub_array_scan(s, args.relation, args.m, args.cap_n, args.bcap, seed=args.seed, count_mode=args.mode)
    lines = [
        f"{rep.verdict}: max supporting types {rep.max_supporting} vs N = {rep.N} "
        f"({rep.count_mode} count, m = {rep.m}, {len(rep.instances)} instances)"
    ]
    if rep.witness is not None:
        lines.append(f"witness: |x| = {rep.witness.xlen}, B = {list(rep.witness.B)}")
        for t, arr in zip(rep.witness.types, rep.witness.arrays):
            lines.append(f"  {t.positive_atoms()} array {list(arr)}")
    lines += list(rep.notes)
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_residues(args) -> int:
    prefix = _load_set(args.set, args.prefix)
    prof = residue_profile(prefix, args.modulus)
    if prof.period is None:
        text = f"no period detected in {len(prefix.terms)} terms mod {args.modulus}"
    else:
        text = f"preperiod {prof.preperiod}, period {prof.period}, pattern {list(prof.pattern)}" + (
            " (from the recurrence state cycle)" if prof.exact else " (scanned)"
        )
    _emit(args, prof.to_json(), text)
    return EXIT_OK


def cmd_sumset(args) -> int:
    prefix = _load_set(args.set, args.prefix)
    rep = sumset_ap(prefix, args.n, args.window, signed=not args.unsigned)
    text = (
        f"|sumset within [-{args.window}, {args.window}]| = {len(rep.elements)}; longest AP length {rep.ap_length}"
        + ("" if rep.ap_length == 0 else f" start {rep.ap_start} difference {rep.ap_difference}")
    )
    _emit(args, rep.to_json(), text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write JSON output to PATH ('-' for stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prefix", type=int, default=64, metavar="N", help="prefix length (default 64)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="wmstab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common], help="certify a set A given by spec files")
    c.add_argument("kind", choices=("recurrence", "lacunary", "fgm"))
    c.add_argument("spec", nargs="+")
    c.add_argument("--gens", help="generators for fgm, e.g. 2,3")
    c.set_defaults(func=cmd_certify)

    w = sub.add_parser("weakmin", parents=[common], help="weak minimality of a group spec such as Z:1,Z/2:w")
    w.add_argument("group")
    w.set_defaults(func=cmd_weakmin)

    s = sub.add_parser("solutions", parents=[common], help="solutions of a signed linear equation")
    s.add_argument("--set", required=True)
    s.add_argument("--coeffs", required=True)
    s.add_argument("--target", default="0")
    s.add_argument("--forbid", default="")
    s.add_argument("--cap", type=int, default=10**6)
    s.add_argument("--coeff-cap", type=int, default=8)
    s.add_argument("--show", type=int, default=20)
    s.set_defaults(func=cmd_solutions)

    e = sub.add_parser("ess-profile", parents=[common], help="observed ESS bounds n_k")
    e.add_argument("--set", required=True)
    e.add_argument("--kmax", type=int, default=3)
    e.add_argument("--u0", help="exceptional targets U_k used for every k")
    e.add_argument("--v0", help="forbidden subsums V_k used for every k")
    e.add_argument("--u", action="append", metavar="K=VALUES", help="override U_k")
    e.add_argument("--v", action="append", metavar="K=VALUES", help="override V_k")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_ess)

    a = sub.add_parser("arrays", parents=[common], help="uniformly bounded arrays scan")
    a.add_argument("--structure", required=True)
    a.add_argument("--relation", required=True)
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--cap-n", type=int, default=5)
    a.add_argument("--bcap", type=int, default=2)
    a.add_argument("--mode", choices=("pattern", "total"), default="pattern")
    a.set_defaults(func=cmd_arrays)

    r = sub.add_parser("residues", parents=[common], help="eventual periodicity modulo n")
    r.add_argument("--set", required=True)
    r.add_argument("--modulus", type=int, required=True)
    r.set_defaults(func=cmd_residues)

    t = sub.add_parser("sumset-ap", parents=[common], help="longest AP in a restricted sumset")
    t.add_argument("--set", required=True)
    t.add_argument("--n", type=int, default=2)
    t.add_argument("--window", type=int, required=True)
    t.add_argument("--unsigned", action="store_true", help="use A instead of A and -A")
    t.set_defaults(func=cmd_sumset)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
