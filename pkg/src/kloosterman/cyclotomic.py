"""Exact arithmetic in Z[zeta_p].

An element is stored as a length-p integer vector ``c`` standing for
``sum_k c[k] * zeta**k``. Multiplication is cyclic convolution (indices mod p)
and the single relation ``1 + zeta + ... + zeta**(p-1) = 0`` is used to force
``c[p-1] = 0``. With that canonical form, equality is vector equality.
"""

from __future__ import annotations

import json

import numpy as np

from . import _backend
from .modfield import PrimeModulus

_INT64_LIMIT = 2**63 - 1


class ModulusMismatchError(ValueError):
    pass


class CoefficientOverflowError(OverflowError):
    """A result coefficient would not fit in a signed 64-bit integer."""


def _maxabs(c: np.ndarray) -> int:
    return int(np.max(np.abs(c))) if c.size else 0


def _canonical(c: np.ndarray) -> np.ndarray:
    top = int(c[-1])
    if top:
        if _maxabs(c) + abs(top) > _INT64_LIMIT:
            raise CoefficientOverflowError("canonical reduction overflows int64")
        c = c - top
    c.setflags(write=False)
    return c


class CyclotomicInt:
    """Immutable element of Z[zeta_p] in canonical form."""

    __slots__ = ("modulus", "coeffs")

    def __init__(self, modulus: PrimeModulus, coeffs) -> None:
        c = np.array(coeffs, dtype=np.int64)
        if c.shape != (modulus.p,):
            raise ValueError(f"expected {modulus.p} coefficients, got shape {c.shape}")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", _canonical(c))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicInt is immutable")

    def __reduce__(self):
        return (CyclotomicInt, (self.modulus, self.coeffs.tolist()))

    @property
    def p(self) -> int:
        return self.modulus.p

    def _check(self, other: CyclotomicInt) -> None:
        if other.modulus.p != self.modulus.p:
            raise ModulusMismatchError(
                f"modulus mismatch: p={self.modulus.p} vs p={other.modulus.p}"
            )

    def _coerce(self, other) -> CyclotomicInt:
        if isinstance(other, CyclotomicInt):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return cyc_from_int(int(other), self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cyc_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cyc_sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return cyc_sub(other, self)

    def __neg__(self):
        return cyc_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return cyc_scale(self, int(other))
        if isinstance(other, CyclotomicInt):
            return cyc_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = cyc_from_int(int(other), self.modulus)
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return other.p == self.p and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"CyclotomicInt(p={self.p}, {self.coeffs.tolist()})"

    def conjugate(self) -> CyclotomicInt:
        return cyc_conjugate(self)

    def __complex__(self) -> complex:
        return cyc_to_complex(self)

    def is_zero(self) -> bool:
        return cyc_is_zero(self)

    def is_real(self) -> bool:
        return self == cyc_conjugate(self)

    def to_json(self) -> str:
        return json.dumps(self.coeffs.tolist(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, modulus: PrimeModulus) -> CyclotomicInt:
        return cls(modulus, json.loads(text))


def cyc_from_int(n: int, m: PrimeModulus) -> CyclotomicInt:
    if abs(n) > _INT64_LIMIT:
        raise CoefficientOverflowError(f"{n} does not fit in int64")
    c = np.zeros(m.p, dtype=np.int64)
    c[0] = n
    return CyclotomicInt(m, c)


def cyc_basis(k: int, m: PrimeModulus) -> CyclotomicInt:
    """``zeta**k``; the exponent is reduced mod p."""
    c = np.zeros(m.p, dtype=np.int64)
    c[k % m.p] = 1
    return CyclotomicInt(m, c)


def cyc_from_histogram(counts, m: PrimeModulus) -> CyclotomicInt:
    """``sum_k counts[k] * zeta**k`` for a vector of exponent counts."""
    return CyclotomicInt(m, counts)


def _checked_sum(x: np.ndarray, y: np.ndarray, sign: int) -> np.ndarray:
    if _maxabs(x) + _maxabs(y) > _INT64_LIMIT // 2:
        raise CoefficientOverflowError("addition overflows int64")
    return x + y if sign > 0 else x - y


def cyc_add(x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    x._check(y)
    return CyclotomicInt(x.modulus, _checked_sum(x.coeffs, y.coeffs, 1))


def cyc_sub(x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    x._check(y)
    return CyclotomicInt(x.modulus, _checked_sum(x.coeffs, y.coeffs, -1))


def cyc_scale(x: CyclotomicInt, n: int) -> CyclotomicInt:
    n = int(n)
    if _maxabs(x.coeffs) * abs(n) > _INT64_LIMIT // 2:
        raise CoefficientOverflowError("scaling overflows int64")
    return CyclotomicInt(x.modulus, x.coeffs * n)


def cyc_mul(x: CyclotomicInt, y: CyclotomicInt) -> CyclotomicInt:
    """Product by length-p cyclic convolution, O(p^2)."""
    x._check(y)
    # Every output coefficient is bounded by sum|x| * max|y|.
    bound = int(np.abs(x.coeffs).sum()) * _maxabs(y.coeffs)
    if bound > _INT64_LIMIT // 2:
        raise CoefficientOverflowError(
            f"product coefficients may reach {bound}, beyond the int64 budget"
        )
    return CyclotomicInt(x.modulus, _backend.kernels().cyclic_mul(x.coeffs, y.coeffs))


def cyc_conjugate(x: CyclotomicInt) -> CyclotomicInt:
    c = x.coeffs
    return CyclotomicInt(x.modulus, np.concatenate((c[:1], c[:0:-1])))


def cyc_to_complex(x: CyclotomicInt) -> complex:
    """Embed via ``zeta -> exp(2 pi i / p)`` in double precision."""
    m = x.modulus
    c = x.coeffs.astype(np.float64)
    return complex(float(c @ m.cos_table), float(c @ m.sin_table))


def cyc_is_zero(x: CyclotomicInt) -> bool:
    return not x.coeffs.any()


def embedding_bound(x: CyclotomicInt) -> float:
    """``sum |c_k|``, the trivial bound on the embedded absolute value."""
    return float(np.abs(x.coeffs).sum())


__all__ = [
    "CoefficientOverflowError",
    "CyclotomicInt",
    "ModulusMismatchError",
    "cyc_add",
    "cyc_basis",
    "cyc_conjugate",
    "cyc_from_histogram",
    "cyc_from_int",
    "cyc_is_zero",
    "cyc_mul",
    "cyc_scale",
    "cyc_sub",
    "cyc_to_complex",
    "embedding_bound",
]
