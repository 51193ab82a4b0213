"""JSON, CSV and plain-text renderings of verification results.

Floats are written with 10 significant digits and keys in a fixed order so
that identical runs give byte-identical files. Timings are left out unless
asked for, since they are the only nondeterministic field.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .identities import BoundReport, IdentityReport, ScanRecord, ScanReport

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "p", "a", "b", "check", "passed", "exact_pass", "float_residual",
    "abs_value", "weil_ratio", "kloos_ratio", "corollary_ratio", "kr_ratio",
)


def fmt_float(x: float) -> str:
    return f"{x:.10g}"


def _num(x):
    if x is None:
        return None
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(fmt_float(x))
    return x


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return _num(obj)


def record_dict(rec: ScanRecord, timing: bool = False) -> dict:
    out = {
        "p": rec.p,
        "a": rec.a,
        "b": rec.b,
        "check": rec.check,
        "passed": rec.passed,
        "exact_pass": rec.exact_pass,
        "float_residual": _num(rec.float_residual),
        "abs_value": _num(rec.abs_value),
        "weil_ratio": _num(rec.weil_ratio),
        "kloos_ratio": _num(rec.kloos_ratio),
        "corollary_ratio": _num(rec.corollary_ratio),
        "kr_ratio": _num(rec.kr_ratio),
    }
    if timing:
        out["elapsed"] = rec.elapsed
    return out


def single_report_dict(rep: IdentityReport | BoundReport, timing: bool = False) -> dict:
    return record_dict(ScanRecord.from_report(rep), timing)


def scan_dict(report: ScanReport, *, records: bool = False, timing: bool = False) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "kr_scan" if report.r is not None else "scan",
        "prime_range": list(report.prime_range),
        "policy": report.policy.to_dict(),
        "checks": list(report.checks),
        "mode": report.mode,
        "r": report.r,
        "primes_scanned": len(report.primes),
        "run": report.run,
        "passed": report.passed,
        "ok": report.ok,
        "totals": {k: dict(v) for k, v in sorted(report.totals.items())},
        "worst": _round_tree({k: report.worst[k] for k in sorted(report.worst)}),
        "sentinel": _round_tree(report.sentinel),
        "counterexamples": report.counterexamples,
        "per_prime": _round_tree(report.per_prime),
    }
    if records:
        out["records"] = [record_dict(r, timing) for r in report.records]
    return out


def to_json(report: ScanReport, *, records: bool = False, timing: bool = False) -> str:
    return json.dumps(scan_dict(report, records=records, timing=timing), indent=2) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def to_csv(report: ScanReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in report.records:
        writer.writerow([_csv_cell(getattr(rec, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def to_human(report: ScanReport) -> str:
    lo, hi = report.prime_range
    lines = [
        f"primes {lo}..{hi} ({len(report.primes)} scanned), policy {report.policy.kind}, "
        f"mode {report.mode}",
        f"{'check':<18}{'run':>10}{'passed':>10}",
    ]
    for name, t in report.totals.items():
        lines.append(f"{name:<18}{t['run']:>10}{t['passed']:>10}")
    for key in sorted(report.worst):
        w = report.worst[key]
        lines.append(f"max {key:<32} {fmt_float(w['value']):>16}  at p={w['p']} a={w['a']} b={w['b']}")
    if report.sentinel is not None:
        s = report.sentinel
        state = "not enforced" if s["ok"] is None else ("ok" if s["ok"] else "FAILED")
        lines.append(f"sharpness sentinel: max weil_ratio {fmt_float(s['max_weil_ratio'])} "
                     f"(threshold {s['threshold']}, {state})")
    if report.counterexamples:
        lines.append(f"COUNTEREXAMPLES: {len(report.counterexamples)}")
        lines.extend(f"  {c}" for c in report.counterexamples)
    else:
        lines.append("no counterexamples")
    return "\n".join(lines) + "\n"


def decade_table(report: ScanReport) -> list[dict]:
    """Group per-prime K_r maxima by decade ``[10^k, 10^(k+1))``."""
    rows: dict[int, dict] = {}
    for row in report.per_prime:
        k = int(math.log10(row["p"]))
        cur = rows.get(k)
        if cur is None:
            rows[k] = cur = {"decade_lo": 10**k, "decade_hi": 10 ** (k + 1) - 1,
                             "primes": 0, "max_ratio": -1.0, "p": 0, "a": 0, "b": 0,
                             "max_abs": 0.0}
        cur["primes"] += 1
        if row["max_ratio"] > cur["max_ratio"]:
            cur.update(max_ratio=row["max_ratio"], p=row["p"], a=row["a"], b=row["b"],
                       max_abs=row["max_abs"])
    return [rows[k] for k in sorted(rows)]


def kr_human(report: ScanReport) -> str:
    lines = [
        f"K_r scan, r={report.r}, primes {report.prime_range[0]}..{report.prime_range[1]}, "
        f"policy {report.policy.kind}",
        f"{'decade':<14}{'primes':>8}{'max |K_r|/p^(3/4)':>20}{'2 p^(-1/4)':>14}  at",
    ]
    for row in decade_table(report):
        envelope = 2.0 * row["p"] ** -0.25
        lines.append(
            f"{row['decade_lo']:>5}..{row['decade_hi']:<7}{row['primes']:>8}"
            f"{fmt_float(row['max_ratio']):>20}{fmt_float(envelope):>14}"
            f"  p={row['p']} a={row['a']} b={row['b']}"
        )
    if report.counterexamples:
        lines.append(f"TRIVIAL BOUND VIOLATIONS: {len(report.counterexamples)}")
        lines.extend(f"  {c}" for c in report.counterexamples)
    return "\n".join(lines) + "\n"


def kr_csv(report: ScanReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("p", "a", "b", "max_abs", "max_ratio"))
    for row in report.per_prime:
        writer.writerow((row["p"], row["a"], row["b"], fmt_float(row["max_abs"]),
                         fmt_float(row["max_ratio"])))
    return buf.getvalue()
