"""Command-line interface.

Exit codes: 0 when every check passed, 1 when a mathematical check failed
(which points at a bug), 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys

from . import identities, reports
from .klsum import (
    DegenerateSumError,
    batch_kloosterman,
    kloosterman_angles,
    kloosterman_exact,
    kloosterman_r_exact,
)
from .modfield import ModulusError, make_modulus, odd_primes

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CHECK_ALIASES = {
    "sq": identities.SQ_IDENTITY,
    "y": identities.Y_DECOMPOSITION,
    "suml": identities.SUM_OVER_L,
    "moment": identities.SECOND_MOMENT,
    "bounds": identities.BOUNDS,
}


class UsageError(Exception):
    pass


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _modulus(p: int):
    try:
        return make_modulus(p)
    except ModulusError as exc:
        raise UsageError(str(exc)) from exc


def _parse_checks(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("--checks needs at least one check")
    out = []
    for name in names:
        if name in CHECK_ALIASES:
            out.append(CHECK_ALIASES[name])
        elif name in identities.CHECKS:
            out.append(name)
        else:
            raise UsageError(f"unknown check {name!r}; choose from {', '.join(CHECK_ALIASES)}")
    return out


def _policy(args) -> identities.ParameterPolicy:
    try:
        return identities.ParameterPolicy(args.policy, args.samples or 0, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _range(args) -> tuple[int, int]:
    if args.lo > args.hi:
        raise UsageError(f"empty prime range: --from {args.lo} > --to {args.hi}")
    if not odd_primes(args.lo, args.hi):
        raise UsageError(f"no odd primes in [{args.lo}, {args.hi}]")
    return args.lo, args.hi


def _jobs(args) -> int:
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    return args.jobs or default_jobs()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    m = _modulus(args.p)
    if args.r < 1:
        raise UsageError("-r must be a positive integer")
    a, b = args.a % m.p, args.b % m.p
    if a * b == 0 and not args.degenerate:
        raise UsageError(f"p={m.p} divides ab; pass --degenerate to evaluate anyway")
    try:
        if args.r == 1:
            kv = kloosterman_exact(m, a, b, degenerate=args.degenerate)
        else:
            if a * b == 0:
                raise UsageError("--degenerate is only supported with r=1")
            kv = kloosterman_r_exact(m, args.r, a, b)
    except DegenerateSumError as exc:
        raise UsageError(str(exc)) from exc
    if args.r == 1:
        print(reports.fmt_float(kv.approx))
    else:
        z = kv.value
        print(f"{reports.fmt_float(z.real)} {reports.fmt_float(z.imag)}i "
              f"abs={reports.fmt_float(abs(z))}")
    if args.exact:
        print(kv.exact.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    lo, hi = _range(args)
    checks = _parse_checks(args.checks)
    report = identities.scan_primes(
        lo, hi, _policy(args), checks,
        mode=args.mode, jobs=_jobs(args), keep_going=args.keep_going,
        sentinel=args.sentinel,
    )
    if args.format == "json":
        text = reports.to_json(report, records=args.records, timing=args.timing)
    elif args.format == "csv":
        text = reports.to_csv(report)
    else:
        text = reports.to_human(report)
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_batch(args) -> int:
    m = _modulus(args.p)
    values = batch_kloosterman(m, method=args.method)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t", "value"] + (["angle"] if args.angles else [])
    writer.writerow(header)
    angles = kloosterman_angles(values, m.p) if args.angles else None
    for t, v in enumerate(values, 1):
        row = [t, reports.fmt_float(float(v))]
        if angles is not None:
            row.append(reports.fmt_float(float(angles[t - 1])))
        writer.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_kr(args) -> int:
    if args.r < 1:
        raise UsageError("-r must be a positive integer")
    lo, hi = _range(args)
    report = identities.kr_scan(args.r, lo, hi, _policy(args), jobs=_jobs(args),
                                keep_going=args.keep_going)
    if args.format == "json":
        text = reports.to_json(report, records=args.records, timing=args.timing)
    elif args.format == "csv":
        text = reports.kr_csv(report)
    else:
        text = reports.kr_human(report)
    _emit(text, args.out)
    return EXIT_OK if not report.counterexamples else EXIT_FAILED


def _add_scan_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--from", dest="lo", type=int, required=True, help="smallest prime candidate")
    sp.add_argument("--to", dest="hi", type=int, required=True, help="largest prime candidate")
    sp.add_argument("--policy", default="fixed_a_all_b",
                    choices=identities.ParameterPolicy.KINDS)
    sp.add_argument("--samples", type=int, default=0, help="pairs per prime for --policy sampled")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("human", "json", "csv"), default="human")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: available CPUs)")
    sp.add_argument("--keep-going", action="store_true",
                    help="collect every failure instead of stopping at the first")
    sp.add_argument("--records", action="store_true", help="include per-check rows in JSON")
    sp.add_argument("--timing", action="store_true",
                    help="include per-check timings in JSON (breaks byte-determinism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloosterman",
        description="Kloosterman sums over prime fields and exact identity checks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("compute", help="evaluate one K(p; a, b) or K_r(p; a, b)")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-a", type=int, required=True)
    sp.add_argument("-b", type=int, required=True)
    sp.add_argument("-r", type=int, default=1)
    sp.add_argument("--exact", action="store_true", help="also print the canonical coefficients")
    sp.add_argument("--degenerate", action="store_true",
                    help="allow exactly one of a, b to vanish mod p")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify", help="scan primes and check the identities and bounds")
    _add_scan_options(sp)
    sp.add_argument("--checks", default=",".join(CHECK_ALIASES),
                    help="comma list from sq,y,suml,moment,bounds (default: all)")
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.add_argument("--sentinel", type=float, default=None,
                    help="fail unless the largest Weil ratio reaches this value")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("batch", help="write K(1, t) for every t as CSV")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--angles", action="store_true",
                    help="add arccos(K / (2 sqrt p)) in [0, pi]")
    sp.add_argument("--method", choices=("direct", "fft"), default="direct")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("kr", help="report max |K_r| / p^(3/4) over a prime range")
    sp.add_argument("-r", type=int, required=True)
    _add_scan_options(sp)
    sp.set_defaults(func=cmd_kr)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kloosterman {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
