"""Selects the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred; when it is not importable
the numpy versions in ``_pykernels`` are used instead. Both expose the same
functions and produce identical integer results.
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active: ModuleType = _compiled if _compiled is not None else _pykernels


def kernels() -> ModuleType:
    return _active


def available() -> list[str]:
    return sorted(_BACKENDS)


def name() -> str:
    return _active.NAME


def use(backend: str) -> str:
    """Switch the process-wide kernel backend; returns the previous name.

    Intended for benchmarks and cross-backend tests.
    """
    global _active
    if backend not in _BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {available()}")
    previous = _active.NAME
    _active = _BACKENDS[backend]
    return previous
