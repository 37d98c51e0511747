# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled rank kernels.

Signatures and results match ``xicor._kernels_py`` exactly; sums are
accumulated in 128-bit integers and handed back as Python ints.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.float64_t f64

cdef extern from *:
    """
    typedef unsigned __int128 xi_u128;
    static inline unsigned long long xi_hi64(xi_u128 v) { return (unsigned long long)(v >> 64); }
    static inline unsigned long long xi_lo64(xi_u128 v) { return (unsigned long long)v; }
    """
    ctypedef unsigned long long u128 "xi_u128"
    unsigned long long hi64 "xi_hi64"(u128 v) nogil
    unsigned long long lo64 "xi_lo64"(u128 v) nogil


cdef object _to_int(u128 v):
    return (int(hi64(v)) << 64) | int(lo64(v))


def tie_ranks(const f64[::1] ys, const i64[::1] idx):
    cdef Py_ssize_t n = ys.shape[0]
    cdef Py_ssize_t i = 0, j, k
    cdef f64 val
    R = np.empty(n, dtype=np.int64)
    L = np.empty(n, dtype=np.int64)
    cdef i64[::1] Rv = R
    cdef i64[::1] Lv = L
    with nogil:
        while i < n:
            val = ys[idx[i]]
            j = i
            while j + 1 < n and ys[idx[j + 1]] == val:
                j += 1
            for k in range(i, j + 1):
                Rv[idx[k]] = j + 1
                Lv[idx[k]] = n - i
            i = j + 1
    return R, L


def xi_sums(const i64[::1] R, const i64[::1] L, const i64[::1] order):
    cdef Py_ssize_t n = R.shape[0]
    cdef Py_ssize_t i
    cdef u128 num = 0
    cdef u128 den = 0
    cdef i64 d
    cdef bint tied = False
    with nogil:
        for i in range(n - 1):
            d = R[order[i + 1]] - R[order[i]]
            num += <u128>(d if d >= 0 else -d)
        for i in range(n):
            den += <u128>L[i] * <u128>(n - L[i])
            tied |= R[i] + L[i] != n + 1
    return _to_int(num), _to_int(den), tied


def xi_parts(const f64[::1] ys, const i64[::1] idx, const i64[::1] order):
    """xi_sums(R, L, order) straight from ys and its argsort ``idx``.

    Only R is materialized; the denominator and the tie flag come from the
    sweep over tie groups in sorted order.
    """
    cdef Py_ssize_t n = ys.shape[0]
    cdef Py_ssize_t i = 0, j, k
    cdef f64 val
    cdef u128 num = 0
    cdef u128 den = 0
    cdef i64 d, lft
    cdef bint tied = False
    R = np.empty(n, dtype=np.int64)
    cdef i64[::1] Rv = R
    with nogil:
        while i < n:
            val = ys[idx[i]]
            j = i
            while j + 1 < n and ys[idx[j + 1]] == val:
                j += 1
            lft = n - i
            den += <u128>(j - i + 1) * <u128>lft * <u128>(n - lft)
            tied |= j > i
            for k in range(i, j + 1):
                Rv[idx[k]] = j + 1
            i = j + 1
        for i in range(n - 1):
            d = Rv[order[i + 1]] - Rv[order[i]]
            num += <u128>(d if d >= 0 else -d)
    return _to_int(num), _to_int(den), tied


def adjacent_ties(const f64[::1] xs, const i64[::1] order):
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i
    cdef bint found = False
    with nogil:
        for i in range(n - 1):
            if xs[order[i + 1]] == xs[order[i]]:
                found = True
                break
    return found


def abs_diff_sums(const i64[::1] ranks, const i64[:, ::1] perms):
    cdef Py_ssize_t B = perms.shape[0]
    cdef Py_ssize_t n = perms.shape[1]
    cdef Py_ssize_t b, i
    cdef i64 acc, d
    out = np.empty(B, dtype=np.int64)
    cdef i64[::1] ov = out
    with nogil:
        for b in range(B):
            acc = 0
            for i in range(n - 1):
                d = ranks[perms[b, i + 1]] - ranks[perms[b, i]]
                acc += d if d >= 0 else -d
            ov[b] = acc
    return out


def tau_sums(const i64[::1] u, const i64[::1] L):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i
    cdef u128 A = 0, B = 0, C = 0, D = 0
    cdef u128 v = 0, w, wt
    with nogil:
        for i in range(n):
            # i is 0-based here; (2n - 2i' + 1) with i' = i + 1
            wt = <u128>(2 * n - 2 * i - 1)
            v += <u128>u[i]
            A += wt * <u128>u[i] * <u128>u[i]
            C += wt * <u128>u[i]
            w = v + <u128>(n - i - 1) * <u128>u[i]
            B += w * w
            D += <u128>L[i] * <u128>(n - L[i])
    return _to_int(A), _to_int(B), _to_int(C), _to_int(D)
