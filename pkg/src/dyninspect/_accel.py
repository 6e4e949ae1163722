"""Backend selection for the hot numeric kernels.

Set ``DYNINSPECT_DISABLE_NUMBA=1`` to force the vectorized numpy path. When
numba is not importable the numpy path is used automatically.
"""
from __future__ import annotations

import os

_TRUTHY = {"1", "true", "yes", "on"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False

NUMBA_DISABLED = os.environ.get("DYNINSPECT_DISABLE_NUMBA", "").strip().lower() in _TRUTHY

BACKENDS = ("numba", "numpy")
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


def jit(func):
    """``numba.njit(cache=True, nogil=True)`` when numba is active, else the plain function."""
    if HAVE_NUMBA and not NUMBA_DISABLED:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def resolve_backend(backend: str | None) -> str:
    if backend is None:
        return DEFAULT_BACKEND
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "numba" and not (HAVE_NUMBA and not NUMBA_DISABLED):
        raise ValueError("numba backend requested but numba is disabled or unavailable")
    return backend
