"""Kernel dispatch: compiled extension if importable, pure Python otherwise.

Set ``SL3K_PURE_PYTHON=1`` to force the fallback.  The wrappers here own
argument normalisation and the int64 overflow guards, so both backends can
assume small non-negative inputs.
"""
import os

import numpy as np

from . import _pykernels

_INT64_SAFE = 1 << 62

if os.environ.get("SL3K_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"


def _backend(pure):
    return _pykernels if pure else _impl


def kloosterman_histogram(m, n, c, *, pure=False):
    """Counts of (m*a + n*a^-1) mod c over units a mod c."""
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    m %= c
    n %= c
    if c >= 1 << 31:
        return _pykernels.kloosterman_histogram(m, n, c)
    return _backend(pure).kloosterman_histogram(m, n, c)


def phase_histogram(coords, weights, L, *, pure=False):
    """Counts of (weights . row) mod L over the rows of an (k, 4) array."""
    coords = np.ascontiguousarray(np.mod(coords, L), dtype=np.int64)
    w = [int(x) % L for x in weights]
    if L >= 1 << 31:
        return _pykernels.phase_histogram(coords, *w, L)
    return _backend(pure).phase_histogram(coords, *w, L)


def accumulate_product(h1, h2, s1, s2, weight, out, *, pure=False):
    """out[(i*s1 + j*s2) mod len(out)] += weight*h1[i]*h2[j], in place.

    ``out`` must be an int64 array unless the caller passes an object array,
    in which case Python integers are used throughout.
    """
    L = len(out)
    s1 %= L
    s2 %= L
    if out.dtype == object:
        _pykernels.accumulate_product(h1, h2, s1, s2, weight, out)
        return
    bound = abs(weight) * int(np.abs(h1).sum()) * int(np.abs(h2).sum())
    if bound + int(np.abs(out).max(initial=0)) >= _INT64_SAFE:
        raise OverflowError("histogram accumulation would overflow int64")
    h1 = np.ascontiguousarray(h1, dtype=np.int64)
    h2 = np.ascontiguousarray(h2, dtype=np.int64)
    _backend(pure).accumulate_product(h1, h2, s1, s2, weight, out)
