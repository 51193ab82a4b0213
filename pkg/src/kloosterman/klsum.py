"""Kloosterman sums over a prime field, exactly and in floating point.

``K(p; a, b) = sum_{x=1}^{p-1} e_p(a x + b x^-1)`` with ``e_p(t) = exp(2 pi i t / p)``.
The exact value is the exponent histogram of ``a x + b x^-1 (mod p)`` read as an
element of Z[zeta_p].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .cyclotomic import CyclotomicInt, cyc_from_histogram, cyc_to_complex
from .modfield import PrimeModulus, legendre


class DegenerateSumError(ValueError):
    """Raised for parameter choices outside the supported sums."""


@dataclass(frozen=True, eq=False)
class KloostermanValue:
    modulus: PrimeModulus
    a: int
    b: int
    exact: CyclotomicInt
    approx: float
    r: int = 1

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def value(self) -> complex:
        """Complex embedding of the exact value."""
        return cyc_to_complex(self.exact)

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True, eq=False)
class LambdaTable:
    """``counts[l]`` for l = 1..p-1; ``counts[0]`` is always 0 and unused."""

    modulus: PrimeModulus
    counts: np.ndarray

    def __getitem__(self, l: int) -> int:
        if not 1 <= l <= self.modulus.p - 1:
            raise IndexError(f"l={l} outside 1..{self.modulus.p - 1}")
        return int(self.counts[l])

    def as_dict(self) -> dict[int, int]:
        return {l: int(self.counts[l]) for l in range(1, self.modulus.p)}


def _reduce_params(m: PrimeModulus, a: int, b: int, degenerate: bool) -> tuple[int, int]:
    a %= m.p
    b %= m.p
    if a == 0 and b == 0:
        raise DegenerateSumError("a and b both vanish mod p; K would be p-1")
    if (a == 0 or b == 0) and not degenerate:
        raise DegenerateSumError(
            f"p | ab for p={m.p}, a={a}, b={b}; pass degenerate=True for the Ramanujan sum"
        )
    return a, b


def exponent_histogram(m: PrimeModulus, a: int, b: int) -> np.ndarray:
    """Counts of ``a x + b x^-1 mod p`` over x = 1..p-1 (mass p-1)."""
    return _backend.kernels().affine_histogram(m.residues, m.inverses, a, b, m.p)


def kloosterman_float(m: PrimeModulus, a: int, b: int, *, degenerate: bool = False) -> float:
    """Double-precision K(p; a, b).

    Only cosines are accumulated since the imaginary parts cancel. Terms are
    added with each x adjacent to its inverse.
    """
    a, b = _reduce_params(m, a, b, degenerate)
    return _backend.kernels().paired_cos_sum(
        m.residues, m.inverses, a, b, m.p, m.cos_table, m.pair_order
    )


def kloosterman_exact(m: PrimeModulus, a: int, b: int, *, degenerate: bool = False) -> KloostermanValue:
    """K(p; a, b) as an element of Z[zeta_p].

    ``approx`` comes from :func:`kloosterman_float`, an independent float
    evaluation, so comparing it with ``value`` is a real consistency check.
    With ``degenerate=True`` exactly one of a, b may vanish mod p, giving
    the Ramanujan sum -1.

    >>> from kloosterman.modfield import make_modulus
    >>> kloosterman_exact(make_modulus(5), 1, 1).exact.coeffs.tolist()
    [2, 0, 1, 1, 0]
    """
    a, b = _reduce_params(m, a, b, degenerate)
    exact = cyc_from_histogram(exponent_histogram(m, a, b), m)
    return KloostermanValue(m, a, b, exact, kloosterman_float(m, a, b, degenerate=True))


def power_table(m: PrimeModulus, r: int) -> np.ndarray:
    """``x**r mod p`` for x = 1..p-1 by square-and-multiply on the whole vector."""
    p = m.p
    out = np.ones(p - 1, dtype=np.int64)
    base = m.residues.copy()
    while r:
        if r & 1:
            out = out * base % p
        base = base * base % p
        r >>= 1
    return out


def kloosterman_r_exact(m: PrimeModulus, r: int, a: int, b: int) -> KloostermanValue:
    """``K_r(p; a, b) = sum_x e_p(a x**r + b x^-1)`` exactly.

    For r >= 2 the value need not be real; ``approx`` then holds the real
    part of the embedding and ``abs(value)`` gives the magnitude.
    """
    if r < 1:
        raise DegenerateSumError("r must be a positive integer")
    a, b = _reduce_params(m, a, b, degenerate=False)
    if r == 1:
        return kloosterman_exact(m, a, b)
    counts = _backend.kernels().affine_histogram(power_table(m, r), m.inverses, a, b, m.p)
    exact = cyc_from_histogram(counts, m)
    return KloostermanValue(m, a, b, exact, cyc_to_complex(exact).real, r=r)


def batch_kloosterman(m: PrimeModulus, method: str = "direct") -> np.ndarray:
    """``K(1, t)`` for t = 1..p-1; entry ``t - 1`` holds K(1, t).

    Any K(a, b) with p not dividing ab equals K(1, ab mod p). ``method="direct"``
    is the O(p^2) baseline; ``method="fft"`` reads the values off a length-p
    DFT of ``y -> e_p(y^-1)``.
    """
    p = m.p
    if method == "direct":
        return _backend.kernels().batch_direct(m.inv_lookup, p, m.cos_table)
    if method == "fft":
        f = np.zeros(p, dtype=np.complex128)
        inv = m.inverses
        f[1:] = m.cos_table[inv] + 1j * m.sin_table[inv]
        # sum_y f(y) e^{2 pi i t y / p} == p * ifft(f)[t]
        return (p * np.fft.ifft(f)).real[1:].copy()
    raise ValueError(f"unknown method {method!r}")


def kloosterman_angles(values: np.ndarray, p: int) -> np.ndarray:
    """``theta`` in [0, pi] with ``K = 2 sqrt(p) cos(theta)``."""
    return np.arccos(np.clip(np.asarray(values) / (2.0 * math.sqrt(p)), -1.0, 1.0))


def lambda_brute(m: PrimeModulus) -> LambdaTable:
    """Count z in 1..p-2 by the class of ``(z+1)^-1 - z^-1 mod p``."""
    p = m.p
    z = np.arange(1, p - 1, dtype=np.int64)
    inv = m.inv_lookup
    l = (inv[z + 1] - inv[z]) % p
    counts = np.bincount(l, minlength=p).astype(np.int64)
    if counts[0]:
        raise AssertionError("a difference of distinct inverses vanished")
    counts.setflags(write=False)
    return LambdaTable(m, counts)


def lambda_formula(m: PrimeModulus, l: int) -> int:
    """``1 + ((l^2 - 4 l) / p)``, the root count of ``l z^2 + l z + 1``."""
    if not 1 <= l <= m.p - 1:
        raise ValueError(f"l={l} outside 1..{m.p - 1}")
    return 1 + legendre(l * l - 4 * l, m)
