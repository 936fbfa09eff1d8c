"""Kernel backend selection.

The compiled extension is used when it imports and the problem fits its
fixed-size buffers; otherwise the pure-Python module is used. Set
``FLATFORGE_PURE_PYTHON=1`` to force the fallback everywhere.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_FORCE_PURE = os.environ.get("FLATFORGE_PURE_PYTHON", "") not in ("", "0")


def compiled_available() -> bool:
    return _ckernels is not None


def backend_name() -> str:
    return "python" if (_ckernels is None or _FORCE_PURE) else "cython"


def _use_compiled(n: int, dim: int = 0) -> bool:
    return (
        _ckernels is not None
        and not _FORCE_PURE
        and n <= _ckernels.MAX_ELEMENTS
        and dim <= _ckernels.MAX_DIM
    )


def rank_kernel(p: int, dim: int, vectors, backend: str | None = None):
    if backend == "python" or (backend is None and not _use_compiled(len(vectors), dim)):
        return _pykernels.RankKernel(p, dim, vectors)
    if _ckernels is None:
        raise RuntimeError("compiled kernels are not built")
    return _ckernels.RankKernel(p, dim, vectors)


def _module(n: int, backend: str | None):
    if backend == "python":
        return _pykernels
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built")
        return _ckernels
    return _ckernels if _use_compiled(n) else _pykernels


def max_flatfree(n: int, flats, backend: str | None = None) -> tuple[int, int]:
    return _module(n, backend).max_flatfree(n, list(flats))


def free_coloring(n: int, flats, palette: int, backend: str | None = None):
    return _module(n, backend).free_coloring(n, list(flats), palette)


def flatfree_sets(n: int, flats, min_size: int, backend: str | None = None) -> list[int]:
    return _module(n, backend).flatfree_sets(n, list(flats), min_size)
