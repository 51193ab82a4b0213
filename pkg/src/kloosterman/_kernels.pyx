# cython: language_level=3
"""Compiled hot loops. See ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

NAME = "cython"


def inverse_table(Py_ssize_t p):
    out = np.zeros(p, dtype=np.int64)
    cdef int64_t[::1] inv = out
    cdef Py_ssize_t i
    if p > 1:
        inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return out


def cyclic_mul(const int64_t[::1] x, const int64_t[::1] y):
    cdef Py_ssize_t p = x.shape[0]
    out = np.zeros(p, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, j
    cdef int64_t xi
    with nogil:
        for i in range(p):
            xi = x[i]
            if xi == 0:
                continue
            # split at the wrap point so both inner loops are branch-free
            for j in range(p - i):
                o[i + j] += xi * y[j]
            for j in range(p - i, p):
                o[i + j - p] += xi * y[j]
    return out


def affine_histogram(const int64_t[::1] u, const int64_t[::1] v,
                     int64_t a, int64_t b, int64_t p):
    out = np.zeros(p, dtype=np.int64)
    cdef int64_t[::1] c = out
    cdef Py_ssize_t i, n = u.shape[0]
    a = a % p
    b = b % p
    if a < 0:
        a += p
    if b < 0:
        b += p
    with nogil:
        for i in range(n):
            c[(a * u[i] % p + b * v[i] % p) % p] += 1
    return out


def paired_cos_sum(const int64_t[::1] u, const int64_t[::1] v,
                   int64_t a, int64_t b, int64_t p,
                   const double[::1] cos_table, const int64_t[::1] order):
    cdef Py_ssize_t i, x, n = order.shape[0]
    cdef double s = 0.0
    a = a % p
    b = b % p
    if a < 0:
        a += p
    if b < 0:
        b += p
    with nogil:
        for i in range(n):
            x = order[i] - 1
            s += cos_table[(a * u[x] % p + b * v[x] % p) % p]
    return s


def batch_direct(const int64_t[::1] inv, int64_t p, const double[::1] cos_table):
    out = np.empty(p - 1, dtype=np.float64)
    cdef double[::1] o = out
    cdef int64_t t, x
    cdef double s
    with nogil:
        for t in range(1, p):
            s = 0.0
            for x in range(1, p):
                s += cos_table[(x + t * inv[x] % p) % p]
            o[t - 1] = s
    return out


def y_histogram(int64_t a, int64_t b, const int64_t[::1] inv, int64_t p):
    out = np.zeros(p, dtype=np.int64)
    cdef int64_t[::1] c = out
    cdef int64_t h, y, s, d
    a = a % p
    b = b % p
    if a < 0:
        a += p
    if b < 0:
        b += p
    with nogil:
        for h in range(1, p):
            for y in range(1, p):
                s = y + h
                if s >= p:
                    s -= p
                if s == 0:
                    continue
                d = inv[s] - inv[y]
                if d < 0:
                    d += p
                c[(a * h + b * d % p) % p] += 1
    return out
