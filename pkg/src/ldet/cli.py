"""ldet: determinants of Legendre-symbol matrices, from the command line.

    ldet det --family D --p 5 --m 1
    ldet verify --statement thm1.4 --min 5 --max 1000 --jobs 4 --out thm14.jsonl
    ldet search-e --m 7
    ldet selftest
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import ff, matrices, scan, selftest, theorems as th
from .ntheory import is_prime_power

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"ldet: error: {msg}", file=sys.stderr)


def _parse_d(ctx: ff.FieldCtx, raw: str | None) -> ff.FieldElem:
    # "3" is an integer mapped into the prime field, "1,2" a coefficient vector
    if raw is None:
        return ctx.one()
    try:
        parts = [int(t) for t in raw.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --d {raw!r}") from None
    return ctx(parts[0]) if len(parts) == 1 else ctx(parts)


def _prime_or_power(args) -> int:
    q = args.q if args.q is not None else args.p
    if q is None:
        raise UsageError("--p/--q is required")
    return q


def cmd_det(args) -> int:
    q = _prime_or_power(args)
    fam = args.family
    if args.m is None:
        raise UsageError("--m is required")
    pk = is_prime_power(q)
    if fam == "D" and q >= 3 and q % 2 and (pk is None or pk[1] > 1):
        return _det_composite_D(q, args.m, args.print_matrix)
    if pk is None or pk[0] == 2:
        raise UsageError(f"{q} is not an odd prime power")
    if fam != "Ttilde" and pk[1] != 1:
        raise UsageError(f"family {fam} needs a prime, got {q}")
    if args.ext_degree is not None and args.ext_degree != pk[1]:
        raise UsageError(f"q={q} does not have extension degree {args.ext_degree}")
    m = args.m
    if fam == "Ttilde":
        ctx = ff.field_create(*pk)
        A = matrices.build_T_tilde(ctx, _parse_d(ctx, args.d), m)
    elif fam == "T":
        A = matrices.build_T(q, int(args.d or 1), m)
    elif fam == "S":
        A = matrices.build_S(q, int(args.d or 1), m)
    else:
        A = matrices.build_D(q, m)

    if args.print_matrix:
        for row in A.rows_str():
            print(" ".join(row))
    print(f"det = {matrices.det(A)}")
    if A.n % 2 == 0 and A.is_skew():
        print(f"pfaffian = {matrices.pfaffian(A)}")
    return EXIT_OK


def _det_composite_D(n: int, m: int, print_matrix: bool) -> int:
    # Z/nZ is not a field; report the determinant modulo each prime factor
    A = matrices.build_D(n, m)
    if print_matrix:
        for row in A.data.tolist():
            print(" ".join(map(str, row)))
    for p in A.prime_factors():
        Ap = A.mod_prime(p)
        line = f"det mod {p} = {matrices.det(Ap)}"
        if Ap.n % 2 == 0 and Ap.is_skew():
            line += f", pfaffian mod {p} = {matrices.pfaffian(Ap)}"
        print(line)
    return EXIT_OK


def _task_from_args(args) -> scan.ScanTask:
    lo, hi = args.min, args.max
    single = args.q if args.q is not None else args.p
    if args.statement != "lemma2.1" and single is not None:
        lo = hi = single
    if args.statement == "thm1.3" and args.m is not None:
        lo = hi = args.m
    if lo is None or hi is None:
        raise UsageError("--min and --max (or a single --p/--q) are required")
    ext = tuple(args.ext_degree_list) if args.ext_degree_list else (1,)
    if args.statement == "lemma2.1" and not args.ext_degree_list:
        ext = (1, 2)
    try:
        return scan.ScanTask(
            statement_id=args.statement,
            min=lo,
            max=hi,
            d_class=args.d_class,
            ext_degrees=ext,
            d=int(args.d) if args.d is not None else None,
            p=args.p if args.statement == "lemma2.1" else None,
            direct_bound=args.direct_bound,
            trials=args.trials,
            out=args.out,
            checkpoint=args.checkpoint,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> int:
    task = _task_from_args(args)
    if task.checkpoint and not task.out:
        raise UsageError("--checkpoint needs --out")
    try:
        records = scan.run_scan(task, sys.stdout, timing=args.timings)
    except scan.CheckpointMismatch as exc:
        raise UsageError(str(exc)) from None
    summary, failures = scan.summarize(records)
    print(summary, file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_search_e(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    if args.m < 1 or args.m % 2 == 0:
        raise UsageError(f"m must be an odd positive integer, got {args.m}")
    report = th.compute_E(args.m, args.direct_bound)
    text = json.dumps(report.to_dict(), sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(
        f"E({args.m}) = {{{', '.join(map(str, report.members))}}}; bound M = {report.bound_M}; "
        f"factorization {'complete' if report.complete else 'INCOMPLETE'}",
        file=sys.stderr,
    )
    for p, prov in report.provenance.items():
        print(f"  {p}: {prov}", file=sys.stderr)
    return EXIT_OK if report.complete else EXIT_INCOMPLETE


def cmd_selftest(args) -> int:
    results = selftest.run_all(print)
    bad = [r.name for r in results if not r.ok]
    print(f"{len(results) - len(bad)}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ldet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_args(p):
        p.add_argument("--p", type=int, help="odd prime (or prime power for Ttilde)")
        p.add_argument("--q", type=int, help="odd prime power")
        p.add_argument("--d", help="integer, or comma-separated coefficients low degree first")

    p_det = sub.add_parser("det", help="determinant of one matrix")
    p_det.add_argument("--family", choices=["T", "Ttilde", "D", "S"], required=True)
    field_args(p_det)
    p_det.add_argument("--ext-degree", type=int)
    p_det.add_argument("--m", type=int, help="exponent (for S: e, with 0 meaning the symbol matrix)")
    p_det.add_argument("--print-matrix", action="store_true")
    p_det.set_defaults(func=cmd_det)

    p_ver = sub.add_parser("verify", help="scan a statement over a parameter range")
    p_ver.add_argument("--statement", choices=th.STATEMENTS, required=True)
    field_args(p_ver)
    p_ver.add_argument("--ext-degree", dest="ext_degree_list", type=int, action="append",
                       help="extension degree to include (repeatable; default 1)")
    p_ver.add_argument("--d-class", choices=["square", "nonsquare", "both"], default="both")
    p_ver.add_argument("--m", type=int, help="single m for thm1.3")
    p_ver.add_argument("--min", type=int)
    p_ver.add_argument("--max", type=int)
    p_ver.add_argument("--jobs", type=int, default=1)
    p_ver.add_argument("--out")
    p_ver.add_argument("--checkpoint")
    p_ver.add_argument("--direct-bound", type=int, default=th.DEFAULT_DIRECT_BOUND)
    p_ver.add_argument("--trials", type=int, default=20, help="lemma2.1 trials per (field, n)")
    p_ver.add_argument("--timings", action="store_true", help="record wall time (output no longer reproducible)")
    p_ver.set_defaults(func=cmd_verify)

    p_e = sub.add_parser("search-e", help="compute E(m)")
    p_e.add_argument("--m", type=int, required=True)
    p_e.add_argument("--direct-bound", type=int, default=th.DEFAULT_DIRECT_BOUND)
    p_e.add_argument("--out")
    p_e.set_defaults(func=cmd_search_e)

    p_st = sub.add_parser("selftest", help="run the invariant battery")
    p_st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
