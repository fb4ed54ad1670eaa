# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled histogram kernels.

Same contracts as ``_pykernels``; callers in ``_kernels`` have already
reduced every input into [0, L) and checked that int64 cannot overflow.
"""
import numpy as np


cdef long long _inverse(long long a, long long c) nogil:
    # -1 when a is not a unit mod c
    cdef long long t = 0, nt = 1, r = c, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if r != 1:
        return -1
    if t < 0:
        t += c
    return t


def kloosterman_histogram(long long m, long long n, long long c):
    counts = np.zeros(c, dtype=np.int64)
    cdef long long[::1] out = counts
    cdef long long a, inv
    if c == 1:
        out[0] = 1
        return counts
    with nogil:
        for a in range(1, c):
            inv = _inverse(a, c)
            if inv >= 0:
                out[(m * a + n * inv) % c] += 1
    return counts


def phase_histogram(const long long[:, ::1] coords, long long w0, long long w1,
                    long long w2, long long w3, long long L):
    counts = np.zeros(L, dtype=np.int64)
    cdef long long[::1] out = counts
    cdef Py_ssize_t i, k = coords.shape[0]
    cdef long long ph
    with nogil:
        for i in range(k):
            ph = (w0 * coords[i, 0]) % L
            ph = (ph + w1 * coords[i, 1]) % L
            ph = (ph + w2 * coords[i, 2]) % L
            ph = (ph + w3 * coords[i, 3]) % L
            out[ph] += 1
    return counts


def accumulate_product(const long long[::1] h1, const long long[::1] h2,
                       long long s1, long long s2, long long weight,
                       long long[::1] out):
    cdef Py_ssize_t i, j, n1 = h1.shape[0], n2 = h2.shape[0]
    cdef long long L = out.shape[0], a, base
    with nogil:
        for i in range(n1):
            if h1[i] == 0:
                continue
            a = weight * h1[i]
            base = (i * s1) % L
            for j in range(n2):
                if h2[j] != 0:
                    out[(base + j * s2) % L] += a * h2[j]
