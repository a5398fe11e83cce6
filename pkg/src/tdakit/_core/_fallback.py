"""Pure-Python column reduction, used when the compiled core is unavailable."""
import numpy as np


def reduce_z2(indptr, indices, n):
    low = np.full(n, -1, dtype=np.int64)
    pivot_of = {}
    cols = {}
    for j in range(n):
        col = set(int(x) for x in indices[indptr[j]:indptr[j + 1]])
        while col:
            r = max(col)
            k = pivot_of.get(r)
            if k is None:
                break
            col ^= cols[k]
        if col:
            r = max(col)
            pivot_of[r] = j
            low[j] = r
            cols[j] = col
    return low


def reduce_zp(indptr, indices, coefs, n, p):
    low = np.full(n, -1, dtype=np.int64)
    pivot_of = {}
    cols = {}
    for j in range(n):
        col = {}
        for t in range(indptr[j], indptr[j + 1]):
            c = int(coefs[t]) % p
            if c:
                col[int(indices[t])] = c
        while col:
            r = max(col)
            k = pivot_of.get(r)
            if k is None:
                break
            other = cols[k]
            f = (-col[r] * pow(other[r], -1, p)) % p
            for row, c in other.items():
                v = (col.get(row, 0) + f * c) % p
                if v:
                    col[row] = v
                else:
                    col.pop(row, None)
        if col:
            r = max(col)
            pivot_of[r] = j
            low[j] = r
            cols[j] = col
    return low
