# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled column reduction of sparse boundary matrices."""
from libcpp.vector cimport vector

import numpy as np


cdef void _symdiff(vector[long long]& a, const vector[long long]& b, vector[long long]& out) noexcept nogil:
    cdef size_t i = 0, j = 0
    out.clear()
    while i < a.size() and j < b.size():
        if a[i] < b[j]:
            out.push_back(a[i]); i += 1
        elif b[j] < a[i]:
            out.push_back(b[j]); j += 1
        else:
            i += 1; j += 1
    while i < a.size():
        out.push_back(a[i]); i += 1
    while j < b.size():
        out.push_back(b[j]); j += 1


def reduce_z2(const long long[::1] indptr, const long long[::1] indices, Py_ssize_t n):
    """Standard left-to-right reduction over Z/2; returns the pivot row of each column (-1 if zero)."""
    cdef vector[vector[long long]] cols
    cdef vector[long long] pivot_of
    cdef vector[long long] col, tmp
    cdef long long[::1] low = np.full(n, -1, dtype=np.int64)
    cdef Py_ssize_t j, t
    cdef long long r, k
    cols.resize(n)
    pivot_of.assign(n, -1)
    with nogil:
        for j in range(n):
            col.clear()
            for t in range(indptr[j], indptr[j + 1]):
                col.push_back(indices[t])
            while col.size() > 0:
                r = col.back()
                k = pivot_of[r]
                if k < 0:
                    break
                _symdiff(col, cols[k], tmp)
                col.swap(tmp)
            if col.size() > 0:
                r = col.back()
                pivot_of[r] = j
                low[j] = r
                cols[j] = col
    return np.asarray(low)


cdef void _axpy(vector[long long]& ar, vector[long long]& ac, const vector[long long]& br,
                const vector[long long]& bc, long long f, long long p,
                vector[long long]& outr, vector[long long]& outc) noexcept nogil:
    # out = a + f * b  (mod p), dropping zeros
    cdef size_t i = 0, j = 0
    cdef long long v
    outr.clear(); outc.clear()
    while i < ar.size() or j < br.size():
        if j == br.size() or (i < ar.size() and ar[i] < br[j]):
            outr.push_back(ar[i]); outc.push_back(ac[i]); i += 1
        elif i == ar.size() or br[j] < ar[i]:
            v = (f * bc[j]) % p
            if v != 0:
                outr.push_back(br[j]); outc.push_back(v)
            j += 1
        else:
            v = (ac[i] + f * bc[j]) % p
            if v != 0:
                outr.push_back(ar[i]); outc.push_back(v)
            i += 1; j += 1


cdef long long _inv(long long a, long long p) noexcept nogil:
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt; t = newt; newt = tmp
        tmp = r - q * newr; r = newr; newr = tmp
    if t < 0:
        t += p
    return t


def reduce_zp(const long long[::1] indptr, const long long[::1] indices, const long long[::1] coefs,
              Py_ssize_t n, long long p):
    """Column reduction over Z/p with coefficients in ``coefs`` (taken mod p)."""
    cdef vector[vector[long long]] rows_of, coef_of
    cdef vector[long long] pivot_of
    cdef vector[long long] cr, cc, tr, tc
    cdef long long[::1] low = np.full(n, -1, dtype=np.int64)
    cdef Py_ssize_t j, t
    cdef long long r, k, f, c
    rows_of.resize(n)
    coef_of.resize(n)
    pivot_of.assign(n, -1)
    with nogil:
        for j in range(n):
            cr.clear(); cc.clear()
            for t in range(indptr[j], indptr[j + 1]):
                c = coefs[t] % p
                if c < 0:
                    c += p
                if c != 0:
                    cr.push_back(indices[t]); cc.push_back(c)
            while cr.size() > 0:
                r = cr.back()
                k = pivot_of[r]
                if k < 0:
                    break
                f = (p - (cc.back() * _inv(coef_of[k].back(), p)) % p) % p
                _axpy(cr, cc, rows_of[k], coef_of[k], f, p, tr, tc)
                cr.swap(tr); cc.swap(tc)
            if cr.size() > 0:
                r = cr.back()
                pivot_of[r] = j
                low[j] = r
                rows_of[j] = cr
                coef_of[j] = cc
    return np.asarray(low)
