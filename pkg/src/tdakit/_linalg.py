"""Dense linear algebra over the prime field Z/p."""
from __future__ import annotations

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` mod ``p`` and its pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True) % p
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = (M[r] * inv_mod(M[r, c], p)) % p
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            M[nzr] = (M[nzr] - np.outer(col[nzr], M[r])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}`` mod ``p``; shape ``(ncols, nullity)``."""
    A = np.asarray(A, dtype=np.int64)
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    N = np.zeros((ncols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        N[f, k] = 1
        for r, pc in enumerate(piv):
            N[pc, k] = (-R[r, f]) % p
    return N


def solve(A, b, p: int):
    """One solution of ``A x = b`` mod ``p`` (b may be a matrix), or ``None``."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, ncols = A.shape
    if rows == 0:
        x = np.zeros((ncols, B.shape[1]), dtype=np.int64)
        return x[:, 0] if vec else x
    R, piv = rref(np.hstack([A, B]), p)
    if any(c >= ncols for c in piv):
        return None
    x = np.zeros((ncols, B.shape[1]), dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, ncols:]
    return x[:, 0] if vec else x


def column_basis(A, p: int) -> np.ndarray:
    """Linearly independent subset of the columns of ``A`` spanning its column space."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[1] == 0:
        return A
    _, piv = rref(A, p)
    return A[:, piv] % p


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        M = rng.integers(0, p, size=(n, n))
        if rank(M, p) == n:
            return M.astype(np.int64)


def inverse(A, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    x = solve(A, np.eye(n, dtype=np.int64), p)
    if x is None:
        raise ValueError("matrix is singular mod p")
    return x
