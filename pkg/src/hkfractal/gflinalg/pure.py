"""NumPy fallback for the rank kernels.

Same contracts as the compiled module: both functions run forward Gaussian
elimination and destroy their input. Row operations are vectorized per pivot,
so the Python-level loop runs once per column.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gf2_rank", "gfp_rank"]


def gf2_rank(packed: np.ndarray, ncols: int) -> int:
    """Rank over GF(2) of a bit-packed matrix.

    packed: (nrows, nwords) uint64; bit j of word w in a row is column 64w+j.
    """
    nrows = packed.shape[0]
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        nz = np.nonzero(packed[rank:, w] & bit)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            packed[[rank, piv]] = packed[[piv, rank]]
        below = rank + 1 + np.nonzero(packed[rank + 1 :, w] & bit)[0]
        if below.size:
            packed[below, w:] ^= packed[rank, w:]
        rank += 1
    return rank


def gfp_rank(mat: np.ndarray, p: int) -> int:
    """Rank over F_p of a dense matrix with entries in [0, p)."""
    work = mat.astype(np.int64, copy=False)
    nrows, ncols = work.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(work[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            work[[rank, piv]] = work[[piv, rank]]
        inv = pow(int(work[rank, col]), -1, p)
        if inv != 1:
            work[rank, col:] = (work[rank, col:] * inv) % p
        below = rank + 1 + np.nonzero(work[rank + 1 :, col])[0]
        if below.size:
            factors = work[below, col][:, None]
            work[below, col:] = (work[below, col:] - factors * work[rank, col:]) % p
        rank += 1
    return rank
