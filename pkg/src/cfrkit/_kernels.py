"""Hot loops of the concrete box interpreter.

``satisfied_mask`` decides, for every (state, candidate) pair, whether all
atoms of an edge formula hold.  A numba ``@njit`` kernel is used when numba is
importable and ``CFRKIT_DISABLE_NUMBA`` is not set to a true value; otherwise a
broadcasting numpy implementation is used.  Both return identical results.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["satisfied_mask", "satisfied_mask_numpy", "USE_NUMBA", "REL_GE", "REL_GT",
           "REL_EQ"]

REL_GE, REL_GT, REL_EQ = 0, 1, 2


def _numba_wanted() -> bool:
    return os.environ.get("CFRKIT_DISABLE_NUMBA", "").strip().lower() not in (
        "1", "true", "yes", "on")


def satisfied_mask_numpy(lx: np.ndarray, lp: np.ndarray, rel: np.ndarray) -> np.ndarray:
    """``lx``: (k, a) state part of each atom value (constant included);
    ``lp``: (c, a) candidate part; ``rel``: (a,) relation codes.
    Returns a (k, c) boolean mask."""
    vals = lx[:, None, :] + lp[None, :, :]
    ok = np.where(rel == REL_GE, vals >= 0, np.where(rel == REL_GT, vals > 0, vals == 0))
    return ok.all(axis=2)


try:
    if not _numba_wanted():
        raise ImportError("numba disabled by CFRKIT_DISABLE_NUMBA")
    from numba import njit

    @njit(cache=True)
    def _mask_numba(lx, lp, rel):
        k, a = lx.shape
        c = lp.shape[0]
        out = np.zeros((k, c), dtype=np.bool_)
        for i in range(k):
            for j in range(c):
                ok = True
                for r in range(a):
                    v = lx[i, r] + lp[j, r]
                    code = rel[r]
                    if code == 0:
                        if v < 0:
                            ok = False
                            break
                    elif code == 1:
                        if v <= 0:
                            ok = False
                            break
                    elif v != 0:
                        ok = False
                        break
                out[i, j] = ok
        return out

    USE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    _mask_numba = None
    USE_NUMBA = False


def satisfied_mask(lx: np.ndarray, lp: np.ndarray, rel: np.ndarray) -> np.ndarray:
    lx = np.ascontiguousarray(lx, dtype=np.int64)
    lp = np.ascontiguousarray(lp, dtype=np.int64)
    rel = np.ascontiguousarray(rel, dtype=np.int64)
    if lx.shape[1] == 0:
        return np.ones((lx.shape[0], lp.shape[0]), dtype=bool)
    if USE_NUMBA:
        return _mask_numba(lx, lp, rel)
    return satisfied_mask_numpy(lx, lp, rel)
