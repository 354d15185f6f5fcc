# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled Gaussian-elimination rank kernels over F_p.

GF(2) rows are bit-packed into uint64 words so one XOR touches 64 columns;
odd p uses byte-valued rows with modular row operations. Both destroy input.
"""

import numpy as np

cimport numpy as cnp


cdef int _inv_mod(int a, int p) noexcept:
    cdef int t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def gf2_rank(cnp.uint64_t[:, ::1] packed, Py_ssize_t ncols):
    """Rank over GF(2). packed: (nrows, nwords) uint64, bit j of word w of a
    row is column 64*w + j."""
    cdef Py_ssize_t nrows = packed.shape[0]
    cdef Py_ssize_t nwords = packed.shape[1]
    cdef Py_ssize_t rank = 0, col, w, r, j, piv
    cdef cnp.uint64_t bit, tmp
    for col in range(ncols):
        if rank == nrows:
            break
        w = col >> 6
        bit = (<cnp.uint64_t>1) << (col & 63)
        piv = -1
        for r in range(rank, nrows):
            if packed[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        # rows at or below `rank` are zero in every column left of `col`,
        # so swaps and eliminations may start at word w
        if piv != rank:
            for j in range(w, nwords):
                tmp = packed[rank, j]
                packed[rank, j] = packed[piv, j]
                packed[piv, j] = tmp
        for r in range(rank + 1, nrows):
            if packed[r, w] & bit:
                for j in range(w, nwords):
                    packed[r, j] ^= packed[rank, j]
        rank += 1
    return rank


def gfp_rank(cnp.uint8_t[:, ::1] mat, int p):
    """Rank over F_p (odd p < 256). mat entries must lie in [0, p)."""
    cdef Py_ssize_t nrows = mat.shape[0]
    cdef Py_ssize_t ncols = mat.shape[1]
    cdef Py_ssize_t rank = 0, col, r, j, piv
    cdef int inv, f, v, tmp
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if mat[r, col]:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, ncols):
                tmp = mat[rank, j]
                mat[rank, j] = mat[piv, j]
                mat[piv, j] = <cnp.uint8_t>tmp
        inv = _inv_mod(mat[rank, col], p)
        if inv != 1:
            for j in range(col, ncols):
                mat[rank, j] = <cnp.uint8_t>((mat[rank, j] * inv) % p)
        for r in range(rank + 1, nrows):
            v = mat[r, col]
            if v:
                f = p - v
                for j in range(col, ncols):
                    mat[r, j] = <cnp.uint8_t>((mat[r, j] + f * mat[rank, j]) % p)
        rank += 1
    return rank
