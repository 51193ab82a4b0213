"""Exact and numerical checks of the square identity and its proof chain.

For p not dividing ab:

* ``K(a,b)^2 = p + sum_{l=1}^{p} ((l^2-4l)/p) K(a, lb)``
* ``K(a,b)^2 = p - 1 + Y(a,b)`` with ``Y = sum_{l=1}^{p-1} lambda_l K(a, lb)``
* ``sum_{l=1}^{p-1} K(a, lb) = 1``
* ``sum_{l=1}^{p} K(a, lb)^2 = p (p - 1)``
* ``|K| <= 2 sqrt(p)``, ``|K| <= 3^(1/4) p^(3/4)``, ``|K| <= sqrt(p + p^(3/2))``

The exact checks form the residual in Z[zeta_p] and test it for zero. Terms
with ``l = p`` use the degenerate value ``K(a, 0) = -1``.
"""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import _backend
from .cyclotomic import CyclotomicInt, cyc_from_histogram, cyc_from_int, cyc_is_zero
from .klsum import (
    exponent_histogram,
    kloosterman_float,
    kloosterman_r_exact,
    lambda_brute,
)
from .modfield import PrimeModulus, legendre, make_modulus, odd_primes

log = logging.getLogger(__name__)

FLOAT_TOL_FACTOR = 1e-6
BOUND_SLACK = 1e-9
DEFAULT_SENTINEL = 0.9

SQ_IDENTITY = "sq_identity"
Y_DECOMPOSITION = "Y_decomposition"
SUM_OVER_L = "sum_over_l"
SECOND_MOMENT = "second_moment"
BOUNDS = "bounds"
KR = "kr"

CHECKS = (SQ_IDENTITY, Y_DECOMPOSITION, SUM_OVER_L, SECOND_MOMENT, BOUNDS)
RATIO_NAMES = ("weil_ratio", "kloos_ratio", "corollary_ratio")


class HypothesisError(ValueError):
    """The parameters violate p not dividing ab."""


class CounterexampleError(AssertionError):
    def __init__(self, message: str, report=None) -> None:
        super().__init__(message)
        self.report = report


@dataclass(slots=True)
class IdentityReport:
    p: int
    a: int
    b: int
    check_name: str
    exact_pass: bool | None
    float_residual: float
    tolerance: float
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.exact_pass is not False and self.float_residual < self.tolerance


@dataclass(slots=True)
class BoundReport:
    p: int
    a: int
    b: int
    abs_value: float
    weil_ratio: float
    kloos_ratio: float
    corollary_ratio: float
    elapsed: float = 0.0

    check_name = BOUNDS

    @property
    def passed(self) -> bool:
        return max(self.weil_ratio, self.kloos_ratio, self.corollary_ratio) <= 1.0 + BOUND_SLACK


def _require_hypotheses(m: PrimeModulus, a: int, b: int) -> tuple[int, int]:
    a %= m.p
    b %= m.p
    if a == 0 or b == 0:
        raise HypothesisError(f"identity hypotheses violated: p={m.p} divides ab (a={a}, b={b})")
    return a, b


def _tolerance(m: PrimeModulus) -> float:
    return FLOAT_TOL_FACTOR * m.p


def _exact_family(m: PrimeModulus, a: int, b: int, last: int) -> list[CyclotomicInt]:
    """``[K(a, l b) for l in 1..last]`` exactly; l = p gives the degenerate -1."""
    return [cyc_from_histogram(exponent_histogram(m, a, l * b % m.p), m)
            for l in range(1, last + 1)]


def _exact_value(m: PrimeModulus, a: int, b: int) -> CyclotomicInt:
    return cyc_from_histogram(exponent_histogram(m, a, b), m)


def _check_mode(mode: str) -> None:
    if mode not in ("exact", "float"):
        raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")


def _float_family(m: PrimeModulus, a: int, b: int, last: int) -> list[float]:
    return [kloosterman_float(m, a, l * b, degenerate=True) for l in range(1, last + 1)]


def _quadratic_weights(m: PrimeModulus) -> list[int]:
    """``((l^2 - 4 l) / p)`` for l = 1..p; the l = p weight is 0."""
    return [legendre(l * l - 4 * l, m) for l in range(1, m.p + 1)]


def verify_identity_sq(m: PrimeModulus, a: int, b: int, mode: str = "exact") -> IdentityReport:
    """Check ``K(a,b)^2 = p + sum_{l=1}^{p} ((l^2-4l)/p) K(a, lb)``.

    ``mode="exact"`` evaluates the residual in Z[zeta_p] and also reports the
    float residual; ``mode="float"`` only does the latter.
    """
    _check_mode(mode)
    start = time.perf_counter()
    a, b = _require_hypotheses(m, a, b)
    p = m.p
    weights = _quadratic_weights(m)

    k = kloosterman_float(m, a, b)
    rhs = float(p) + math.fsum(w * v for w, v in zip(weights, _float_family(m, a, b, p)))
    residual = abs(k * k - rhs)

    exact_pass = None
    if mode == "exact":
        kx = _exact_value(m, a, b)
        rhs_x = cyc_from_int(p, m)
        for w, v in zip(weights, _exact_family(m, a, b, p)):
            if w:
                rhs_x = rhs_x + w * v
        exact_pass = cyc_is_zero(kx * kx - rhs_x)
    return IdentityReport(p, a, b, SQ_IDENTITY, exact_pass, residual, _tolerance(m),
                          time.perf_counter() - start)


def y_direct(m: PrimeModulus, a: int, b: int) -> CyclotomicInt:
    """``Y(a, b)`` from its defining double sum over h and y, with p not dividing y + h."""
    counts = _backend.kernels().y_histogram(a, b, m.inv_lookup, m.p)
    return cyc_from_histogram(counts, m)


def verify_Y_decomposition(m: PrimeModulus, a: int, b: int, mode: str = "exact") -> IdentityReport:
    """Check ``K^2 = p - 1 + Y`` and that both forms of Y coincide."""
    _check_mode(mode)
    start = time.perf_counter()
    a, b = _require_hypotheses(m, a, b)
    p = m.p
    lam = lambda_brute(m)

    k = kloosterman_float(m, a, b)
    y_float = math.fsum(lam[l] * v for l, v in enumerate(_float_family(m, a, b, p - 1), 1))
    residual = abs(k * k - (p - 1) - y_float)

    exact_pass = None
    if mode == "exact":
        kx = _exact_value(m, a, b)
        y_dir = y_direct(m, a, b)
        y_lam = cyc_from_int(0, m)
        for l, v in enumerate(_exact_family(m, a, b, p - 1), 1):
            if lam[l]:
                y_lam = y_lam + lam[l] * v
        exact_pass = cyc_is_zero(kx * kx - (p - 1) - y_dir) and y_dir == y_lam
    return IdentityReport(p, a, b, Y_DECOMPOSITION, exact_pass, residual, _tolerance(m),
                          time.perf_counter() - start)


def verify_sum_over_l(m: PrimeModulus, a: int, b: int, mode: str = "exact") -> IdentityReport:
    """Check ``sum_{l=1}^{p-1} K(a, lb) = 1``."""
    _check_mode(mode)
    start = time.perf_counter()
    a, b = _require_hypotheses(m, a, b)
    residual = abs(math.fsum(_float_family(m, a, b, m.p - 1)) - 1.0)
    exact_pass = None
    if mode == "exact":
        total = cyc_from_int(0, m)
        for v in _exact_family(m, a, b, m.p - 1):
            total = total + v
        exact_pass = cyc_is_zero(total - 1)
    return IdentityReport(m.p, a, b, SUM_OVER_L, exact_pass, residual, _tolerance(m),
                          time.perf_counter() - start)


def verify_second_moment(m: PrimeModulus, a: int, b: int, mode: str = "exact") -> IdentityReport:
    """Check ``sum_{l=1}^{p} K(a, lb)^2 = p (p - 1)``, the l = p term being (-1)^2."""
    _check_mode(mode)
    start = time.perf_counter()
    a, b = _require_hypotheses(m, a, b)
    p = m.p
    residual = abs(math.fsum(v * v for v in _float_family(m, a, b, p)) - p * (p - 1))
    exact_pass = None
    if mode == "exact":
        total = cyc_from_int(0, m)
        for v in _exact_family(m, a, b, p):
            total = total + v * v
        exact_pass = cyc_is_zero(total - p * (p - 1))
    return IdentityReport(p, a, b, SECOND_MOMENT, exact_pass, residual, _tolerance(m),
                          time.perf_counter() - start)


def bound_values(p: int) -> tuple[float, float, float]:
    """Weil, Kloosterman and corollary bounds for modulus p."""
    return (
        2.0 * math.sqrt(p),
        3.0**0.25 * p**0.75,
        math.sqrt(p + p**1.5),
    )


def check_bounds(m: PrimeModulus, a: int, b: int) -> BoundReport:
    """Ratios of ``|K(a, b)|`` to each of the three bounds.

    Raises :class:`CounterexampleError` if a ratio exceeds ``1 + 1e-9``; that
    would mean the sum was computed wrongly.
    """
    start = time.perf_counter()
    a, b = _require_hypotheses(m, a, b)
    value = abs(kloosterman_float(m, a, b))
    weil, kloos, cor = bound_values(m.p)
    report = BoundReport(m.p, a, b, value, value / weil, value / kloos, value / cor,
                         time.perf_counter() - start)
    if not report.passed:
        raise CounterexampleError(
            f"|K({m.p}; {a}, {b})| = {value!r} exceeds a bound: "
            f"weil={report.weil_ratio!r} kloos={report.kloos_ratio!r} "
            f"corollary={report.corollary_ratio!r}",
            report,
        )
    return report


# -- scans ------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterPolicy:
    """How (a, b) pairs are enumerated for each prime.

    ``all_pairs`` walks the full grid, ``fixed_a_all_b`` takes a = 1 and every b
    (enough since K(a, b) = K(1, ab)), and ``sampled`` draws ``k`` pairs from a
    generator seeded by ``(seed, p)``.
    """

    kind: str = "fixed_a_all_b"
    k: int = 0
    seed: int = 0

    KINDS = ("all_pairs", "fixed_a_all_b", "sampled")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown policy {self.kind!r}; expected one of {self.KINDS}")
        if self.kind == "sampled" and self.k < 1:
            raise ValueError("sampled policy needs k >= 1")

    def pairs(self, p: int) -> Iterator[tuple[int, int]]:
        if self.kind == "all_pairs":
            for a in range(1, p):
                for b in range(1, p):
                    yield a, b
        elif self.kind == "fixed_a_all_b":
            for b in range(1, p):
                yield 1, b
        else:
            rng = random.Random(self.seed * 1_000_003 + p)
            for _ in range(self.k):
                yield rng.randrange(1, p), rng.randrange(1, p)

    def to_dict(self) -> dict:
        if self.kind == "sampled":
            return {"kind": self.kind, "k": self.k, "seed": self.seed}
        return {"kind": self.kind}


@dataclass(slots=True)
class ScanRecord:
    """One row of a scan: a single check at a single (p, a, b)."""

    p: int
    a: int
    b: int
    check: str
    passed: bool
    exact_pass: bool | None = None
    float_residual: float | None = None
    abs_value: float | None = None
    weil_ratio: float | None = None
    kloos_ratio: float | None = None
    corollary_ratio: float | None = None
    kr_ratio: float | None = None
    elapsed: float = 0.0

    @classmethod
    def from_report(cls, rep: IdentityReport | BoundReport) -> ScanRecord:
        if isinstance(rep, BoundReport):
            return cls(rep.p, rep.a, rep.b, BOUNDS, rep.passed, None, None, rep.abs_value,
                       rep.weil_ratio, rep.kloos_ratio, rep.corollary_ratio,
                       elapsed=rep.elapsed)
        return cls(rep.p, rep.a, rep.b, rep.check_name, rep.passed, rep.exact_pass,
                   rep.float_residual, elapsed=rep.elapsed)


@dataclass
class PrimeResult:
    p: int
    records: list[ScanRecord]
    counterexamples: list[dict]


@dataclass
class ScanReport:
    prime_range: tuple[int, int]
    policy: ParameterPolicy
    checks: tuple[str, ...]
    mode: str
    primes: list[int] = field(default_factory=list)
    totals: dict[str, dict[str, int]] = field(default_factory=dict)
    worst: dict[str, dict] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    records: list[ScanRecord] = field(default_factory=list)
    per_prime: list[dict] = field(default_factory=list)
    sentinel: dict | None = None
    r: int | None = None

    @property
    def run(self) -> int:
        return sum(t["run"] for t in self.totals.values())

    @property
    def passed(self) -> int:
        return sum(t["passed"] for t in self.totals.values())

    @property
    def ok(self) -> bool:
        if self.counterexamples:
            return False
        return self.sentinel is None or self.sentinel["ok"] is not False

    def worst_value(self, key: str) -> float:
        return self.worst[key]["value"] if key in self.worst else float("nan")

    def merge(self, part: PrimeResult) -> None:
        """Fold one prime's results in; call in ascending prime order."""
        self.primes.append(part.p)
        best: dict | None = None
        for rec in part.records:
            t = self.totals.setdefault(rec.check, {"run": 0, "passed": 0})
            t["run"] += 1
            t["passed"] += int(rec.passed)
            if rec.float_residual is not None:
                self._update_worst(f"float_residual:{rec.check}", rec.float_residual, rec)
            for name in RATIO_NAMES + ("kr_ratio",):
                value = getattr(rec, name)
                if value is not None:
                    self._update_worst(name, value, rec)
            if rec.kr_ratio is not None and (best is None or rec.kr_ratio > best["max_ratio"]):
                best = {"p": part.p, "a": rec.a, "b": rec.b,
                        "max_ratio": rec.kr_ratio, "max_abs": rec.abs_value}
        if best is not None:
            self.per_prime.append(best)
        self.records.extend(part.records)
        self.counterexamples.extend(part.counterexamples)

    def _update_worst(self, key: str, value: float, rec: ScanRecord) -> None:
        cur = self.worst.get(key)
        if cur is None or value > cur["value"]:
            self.worst[key] = {"value": value, "p": rec.p, "a": rec.a, "b": rec.b}


_DISPATCH: dict[str, Callable[..., IdentityReport | BoundReport]] = {
    SQ_IDENTITY: verify_identity_sq,
    Y_DECOMPOSITION: verify_Y_decomposition,
    SUM_OVER_L: verify_sum_over_l,
    SECOND_MOMENT: verify_second_moment,
    BOUNDS: check_bounds,
}


def _counterexample(rec: ScanRecord, detail: str) -> dict:
    return {"p": rec.p, "a": rec.a, "b": rec.b, "check": rec.check, "detail": detail}


def _scan_prime(task: tuple) -> PrimeResult:
    p, policy, checks, mode, keep_going, backend = task
    _backend.use(backend)
    m = make_modulus(p)
    records: list[ScanRecord] = []
    failures: list[dict] = []
    for a, b in policy.pairs(p):
        for check in checks:
            fn = _DISPATCH[check]
            try:
                rep = fn(m, a, b) if check == BOUNDS else fn(m, a, b, mode)
            except CounterexampleError as exc:
                rec = ScanRecord.from_report(exc.report)
                records.append(rec)
                failures.append(_counterexample(rec, str(exc)))
            else:
                rec = ScanRecord.from_report(rep)
                records.append(rec)
                if not rec.passed:
                    failures.append(_counterexample(
                        rec, f"exact_pass={rec.exact_pass} float_residual={rec.float_residual!r}"
                    ))
            if failures and not keep_going:
                return PrimeResult(p, records, failures)
    return PrimeResult(p, records, failures)


def _kr_prime(task: tuple) -> PrimeResult:
    p, r, policy, keep_going, backend = task
    _backend.use(backend)
    m = make_modulus(p)
    scale = p**0.75
    weil = 2.0 * math.sqrt(p)
    records: list[ScanRecord] = []
    failures: list[dict] = []
    for a, b in policy.pairs(p):
        start = time.perf_counter()
        value = abs(kloosterman_r_exact(m, r, a, b).value)
        rec = ScanRecord(p, a, b, KR, True, abs_value=value, kr_ratio=value / scale,
                         elapsed=time.perf_counter() - start)
        if value > (p - 1) * (1.0 + BOUND_SLACK):
            rec.passed = False
            failures.append(_counterexample(rec, f"|K_{r}| = {value!r} exceeds p - 1"))
        elif r == 1 and value > weil * (1.0 + BOUND_SLACK):
            rec.passed = False
            failures.append(_counterexample(rec, f"|K_1| = {value!r} exceeds 2 sqrt(p)"))
        records.append(rec)
        if failures and not keep_going:
            break
    return PrimeResult(p, records, failures)


def _run(worker: Callable[[tuple], PrimeResult], tasks: list[tuple], report: ScanReport,
         jobs: int, keep_going: bool) -> None:
    def consume(results: Iterable[PrimeResult]) -> None:
        for part in results:
            report.merge(part)
            if part.counterexamples and not keep_going:
                log.warning("stopping scan at p=%d: %s", part.p, part.counterexamples[0])
                return

    if jobs <= 1 or len(tasks) <= 1:
        consume(worker(t) for t in tasks)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        try:
            consume(pool.map(worker, tasks))
        finally:
            pool.shutdown(wait=True, cancel_futures=True)


def _primes_for(lo: int, hi: int) -> list[int]:
    if lo > hi:
        raise ValueError(f"empty prime range: {lo} > {hi}")
    primes = odd_primes(lo, hi)
    if not primes:
        raise ValueError(f"no odd primes in [{lo}, {hi}]")
    return primes


def scan_primes(
    lo: int,
    hi: int,
    policy: ParameterPolicy | None = None,
    checks: Iterable[str] = CHECKS,
    *,
    mode: str = "exact",
    jobs: int = 1,
    keep_going: bool = False,
    sentinel: float | None = None,
) -> ScanReport:
    """Run ``checks`` for every odd prime in [lo, hi].

    Results do not depend on ``jobs``. The scan stops at the first failing
    prime unless ``keep_going`` is set. If ``sentinel`` is given and bounds are
    checked, the report is only ``ok`` when the largest Weil ratio reaches it;
    this guards against a broken |K| that is silently tiny.
    """
    policy = policy or ParameterPolicy()
    requested = set(checks)
    unknown = requested - set(CHECKS)
    if unknown or not requested:
        raise ValueError(f"unknown or empty check set: {sorted(unknown)}")
    checks = tuple(c for c in CHECKS if c in requested)
    _check_mode(mode)
    primes = _primes_for(lo, hi)
    report = ScanReport((lo, hi), policy, checks, mode)
    backend = _backend.name()
    tasks = [(p, policy, checks, mode, keep_going, backend) for p in primes]
    _run(_scan_prime, tasks, report, jobs, keep_going)
    if BOUNDS in checks:
        max_weil = report.worst_value("weil_ratio")
        report.sentinel = {
            "threshold": sentinel,
            "max_weil_ratio": max_weil,
            "ok": None if sentinel is None else bool(max_weil >= sentinel),
        }
    return report


def kr_scan(
    r: int,
    lo: int,
    hi: int,
    policy: ParameterPolicy | None = None,
    *,
    jobs: int = 1,
    keep_going: bool = False,
) -> ScanReport:
    """Largest ``|K_r| / p^(3/4)`` over a scan; report only.

    The hard checks are ``|K_r| <= p - 1`` and, for r = 1, ``|K_1| <= 2 sqrt(p)``.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    policy = policy or ParameterPolicy()
    primes = _primes_for(lo, hi)
    report = ScanReport((lo, hi), policy, (KR,), "exact", r=r)
    backend = _backend.name()
    tasks = [(p, r, policy, keep_going, backend) for p in primes]
    _run(_kr_prime, tasks, report, jobs, keep_going)
    return report


__all__ = [
    "BOUNDS",
    "BoundReport",
    "CHECKS",
    "CounterexampleError",
    "HypothesisError",
    "IdentityReport",
    "ParameterPolicy",
    "ScanRecord",
    "ScanReport",
    "bound_values",
    "check_bounds",
    "kr_scan",
    "scan_primes",
    "verify_Y_decomposition",
    "verify_identity_sq",
    "verify_second_moment",
    "verify_sum_over_l",
    "y_direct",
]
