"""Pure-Python/numpy versions of the hot kernels.

Each function mirrors one in ``_kernels.pyx`` and must return identical
integers. Float kernels sum in the same sequential order as the compiled
loops (``np.cumsum`` accumulates left to right), so results agree bit for bit.
"""

import numpy as np

NAME = "python"

_CHUNK = 1 << 22  # max matrix entries materialised at once


def inverse_table(p):
    inv = [0] * p
    inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i] % p) % p
    return np.array(inv, dtype=np.int64)


def cyclic_mul(x, y):
    p = len(x)
    full = np.convolve(x, y)
    out = full[:p].copy()
    out[: p - 1] += full[p:]
    return out


def affine_histogram(u, v, a, b, p):
    exps = ((a % p) * u % p + (b % p) * v % p) % p
    return np.bincount(exps, minlength=p).astype(np.int64)


def paired_cos_sum(u, v, a, b, p, cos_table, order):
    idx = order - 1
    exps = ((a % p) * u[idx] % p + (b % p) * v[idx] % p) % p
    if len(exps) == 0:
        return 0.0
    return float(np.cumsum(cos_table[exps])[-1])


def batch_direct(inv, p, cos_table):
    x = np.arange(1, p, dtype=np.int64)
    xinv = inv[1:]
    out = np.empty(p - 1)
    rows = max(1, _CHUNK // max(p, 1))
    for start in range(1, p, rows):
        t = np.arange(start, min(p, start + rows), dtype=np.int64)
        exps = (x[None, :] + t[:, None] * xinv[None, :] % p) % p
        out[start - 1 : start - 1 + len(t)] = np.cumsum(cos_table[exps], axis=1)[:, -1]
    return out


def y_histogram(a, b, inv, p):
    a %= p
    b %= p
    y = np.arange(1, p, dtype=np.int64)
    counts = np.zeros(p, dtype=np.int64)
    rows = max(1, _CHUNK // max(p, 1))
    for start in range(1, p, rows):
        h = np.arange(start, min(p, start + rows), dtype=np.int64)
        s = (y[None, :] + h[:, None]) % p
        keep = s != 0
        diff = (inv[s] - inv[y][None, :]) % p
        exps = (a * h[:, None] + b * diff) % p
        counts += np.bincount(exps[keep], minlength=p)
    return counts
