"""Arithmetic modulo an odd prime.

Everything here is a pure function of its inputs. :class:`PrimeModulus` is
immutable once built and can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _backend

MAX_MODULUS = 2**31 - 1

# Deterministic Miller-Rabin witnesses for n < 3,215,031,751.
_MR_BASES = (2, 3, 5, 7)


class ModulusError(ValueError):
    """Raised when an integer cannot serve as the field modulus."""

    code = "invalid_modulus"

    def __init__(self, n: int, message: str) -> None:
        super().__init__(message)
        self.n = n


class NotPrimeError(ModulusError):
    code = "not_prime"


class UnsupportedPrimeError(ModulusError):
    code = "p2_unsupported"


class ModulusTooLargeError(ModulusError):
    code = "too_large"


class ZeroInverseError(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic primality test, valid for every n below 3.2e9."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes in the closed interval [lo, hi], ascending."""
    lo = max(lo, 3)
    if hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(hi) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(q) for q in np.flatnonzero(sieve[lo:]) + lo if q != 2]


@dataclass(frozen=True, eq=False)
class PrimeModulus:
    """A validated odd prime together with its table of inverses.

    ``inv_table[x]`` holds the inverse of ``x`` for ``1 <= x <= p - 1``;
    entry 0 is unused and set to 0. Build instances with :func:`make_modulus`.
    """

    p: int
    inv_table: np.ndarray | None = field(default=None, repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeModulus) and other.p == self.p

    def __hash__(self) -> int:
        return hash(self.p)

    def __reduce__(self):
        # Ship only p across process boundaries; the table is rebuilt on arrival.
        return (make_modulus, (self.p, self.inv_table is not None))

    @cached_property
    def residues(self) -> np.ndarray:
        """``[1, 2, ..., p-1]`` as int64."""
        out = np.arange(1, self.p, dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def inverses(self) -> np.ndarray:
        """Inverses of ``residues`` in the same order."""
        if self.inv_table is not None:
            return self.inv_table[1:]
        out = np.array([egcd_inverse(x, self.p) for x in range(1, self.p)], dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def inv_lookup(self) -> np.ndarray:
        """Length-p inverse table, built on demand when ``inv_table`` is absent."""
        if self.inv_table is not None:
            return self.inv_table
        out = np.concatenate(([0], self.inverses)).astype(np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def cos_table(self) -> np.ndarray:
        """``cos(2 pi k / p)`` for k = 0..p-1, one libm call per entry."""
        p = self.p
        out = np.array([math.cos(2.0 * math.pi * k / p) for k in range(p)])
        out.setflags(write=False)
        return out

    @cached_property
    def sin_table(self) -> np.ndarray:
        p = self.p
        out = np.array([math.sin(2.0 * math.pi * k / p) for k in range(p)])
        out.setflags(write=False)
        return out

    @cached_property
    def pair_order(self) -> np.ndarray:
        """Residues ordered so each x is immediately followed by its inverse.

        Self-inverse residues (1 and p-1) appear once.
        """
        inv = self.inverses
        order = []
        for x in range(1, self.p):
            y = int(inv[x - 1])
            if x < y:
                order.extend((x, y))
            elif x == y:
                order.append(x)
        out = np.array(order, dtype=np.int64)
        out.setflags(write=False)
        return out


def make_modulus(n: int, with_table: bool = True) -> PrimeModulus:
    """Validate ``n`` as an odd prime and precompute its inverse table.

    >>> make_modulus(5).inv_table.tolist()
    [0, 1, 3, 2, 4]
    """
    n = int(n)
    if n == 2:
        raise UnsupportedPrimeError(n, "p=2 unsupported: the modulus must be an odd prime")
    if n > MAX_MODULUS:
        raise ModulusTooLargeError(n, f"{n} exceeds the modulus cap 2^31-1")
    if n < 3 or not is_prime(n):
        raise NotPrimeError(n, f"{n} is not an odd prime")
    table = None
    if with_table:
        table = _backend.kernels().inverse_table(n)
        table.setflags(write=False)
    return PrimeModulus(n, table)


def mod_inverse(x: int, m: PrimeModulus) -> int:
    """Inverse of ``x`` modulo ``m.p``."""
    x %= m.p
    if x == 0:
        raise ZeroInverseError("zero has no inverse")
    if m.inv_table is not None:
        return int(m.inv_table[x])
    return egcd_inverse(x, m.p)


def egcd_inverse(x: int, p: int) -> int:
    """Table-free inverse by the extended Euclidean algorithm."""
    r0, r1 = p, x % p
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ZeroInverseError("zero has no inverse")
    return s0 % p


def mod_pow(base: int, exp: int, m: PrimeModulus) -> int:
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    p = m.p
    result, base = 1, base % p
    while exp:
        if exp & 1:
            result = result * base % p
        base = base * base % p
        exp >>= 1
    return result


def legendre(a: int, m: PrimeModulus) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    t = mod_pow(a % m.p, (m.p - 1) // 2, m)
    return -1 if t == m.p - 1 else t

