# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Signatures mirror :mod:`strfp._kernels_py`."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()


cdef inline uint64_t _fp(const unsigned char[:] table, const unsigned char* s, Py_ssize_t n) noexcept nogil:
    cdef uint64_t bits = 0
    cdef Py_ssize_t i
    for i in range(n):
        bits |= (<uint64_t>1) << table[s[i]]
    return bits


def fingerprint(const unsigned char[:] table, bytes s):
    cdef const unsigned char* p = s
    return int(_fp(table, p, len(s)))


def fingerprint_many(const unsigned char[:] table, strings):
    cdef Py_ssize_t n = len(strings)
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[:] view = out
    cdef Py_ssize_t i
    cdef bytes s
    for i in range(n):
        s = strings[i]
        view[i] = _fp(table, <const unsigned char*>s, len(s))
    return out


def candidate_mask(fps, uint64_t mask, int threads=1):
    if threads <= 1:
        m = np.uint64(mask)
        return (fps & m) == m
    return _candidate_mask_par(fps, mask, threads)


def _candidate_mask_par(const uint64_t[:] fps, uint64_t mask, int threads):
    cdef Py_ssize_t n = fps.shape[0]
    out = np.empty(n, dtype=np.bool_)
    cdef cnp.npy_bool[:] view = out
    cdef Py_ssize_t i
    for i in prange(n, nogil=True, num_threads=threads, schedule="static"):
        view[i] = (fps[i] & mask) == mask
    return out


def count_candidates(const uint64_t[:] fps, uint64_t mask):
    cdef Py_ssize_t n = fps.shape[0]
    cdef Py_ssize_t i, c = 0
    with nogil:
        for i in range(n):
            if (fps[i] & mask) == mask:
                c += 1
    return c


def count_separated(const uint64_t[:] qfps, const uint64_t[:] wfps,
                    const int64_t[:] pair_q, const int64_t[:] pair_w):
    cdef Py_ssize_t n = pair_q.shape[0]
    cdef Py_ssize_t i, c = 0
    with nogil:
        for i in range(n):
            if qfps[pair_q[i]] & ~wfps[pair_w[i]]:
                c += 1
    return c
