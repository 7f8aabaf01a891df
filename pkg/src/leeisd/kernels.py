"""Hot integer kernels over Z_2 / Z_4.

Each kernel exists twice: a loop version compiled with numba (``*_loops``) and
a vectorised numpy version (``*_numpy``). The module-level names dispatch to
one of them according to :data:`leeisd._accel.USE_NUMBA`. All inputs are
``int64`` arrays with entries already reduced modulo ``m``.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "matmul_mod",
    "gauss_jordan",
    "intermediate_sums",
    "first_extension",
    "weights",
]


# --------------------------------------------------------------------------
# matrix product


@njit
def matmul_mod_loops(a, b, m):
    r, k = a.shape
    c = b.shape[1]
    out = np.zeros((r, c), dtype=np.int64)
    for i in range(r):
        for j in range(k):
            x = a[i, j]
            if x == 0:
                continue
            for col in range(c):
                out[i, col] += x * b[j, col]
        for col in range(c):
            out[i, col] %= m
    return out


def matmul_mod_numpy(a, b, m):
    return (a @ b) % m


# --------------------------------------------------------------------------
# Gauss-Jordan on a prescribed list of pivot columns


@njit
def gauss_jordan_loops(mat, cols, m):
    """In-place elimination; the i-th pivot (a unit) for ``cols[i]`` lands in row i.

    Returns the number of pivots placed. A value below ``len(cols)`` means the
    column ``cols[return value]`` had no unit entry in the remaining rows.
    """
    rows, width = mat.shape
    for i in range(cols.shape[0]):
        c = cols[i]
        piv = -1
        for r in range(i, rows):
            if mat[r, c] & 1:
                piv = r
                break
        if piv < 0:
            return i
        if piv != i:
            for j in range(width):
                tmp = mat[i, j]
                mat[i, j] = mat[piv, j]
                mat[piv, j] = tmp
        u = mat[i, c]
        # units of Z_4 and Z_2 are self-inverse
        if u != 1:
            for j in range(width):
                mat[i, j] = (mat[i, j] * u) % m
        for r in range(rows):
            if r == i:
                continue
            f = mat[r, c]
            if f == 0:
                continue
            for j in range(width):
                mat[r, j] = (mat[r, j] - f * mat[i, j]) % m
    return cols.shape[0]


def gauss_jordan_numpy(mat, cols, m):
    rows = mat.shape[0]
    for i, c in enumerate(cols):
        cand = np.flatnonzero(mat[i:, c] & 1)
        if cand.size == 0:
            return i
        piv = i + cand[0]
        if piv != i:
            mat[[i, piv]] = mat[[piv, i]]
        u = mat[i, c]
        if u != 1:
            mat[i] = (mat[i] * u) % m
        f = mat[:, c].copy()
        f[i] = 0
        if f.any():
            mat -= np.outer(f, mat[i])
            mat %= m
    return len(cols)


# --------------------------------------------------------------------------
# intermediate sums: one column addition per new vector


@njit
def intermediate_sums_loops(mat, prev, parent, coord, delta, m):
    cnt = parent.shape[0]
    rows = mat.shape[0]
    out = np.empty((cnt, rows), dtype=np.int64)
    for i in range(cnt):
        p = parent[i]
        j = coord[i]
        d = delta[i]
        for r in range(rows):
            out[i, r] = (prev[p, r] + d * mat[r, j]) % m
    return out


def intermediate_sums_numpy(mat, prev, parent, coord, delta, m):
    return (prev[parent] + delta[:, None] * mat.T[coord]) % m


# --------------------------------------------------------------------------
# collision extension with early abort


@njit
def first_extension_loops(bmat, s2, e1, target, m):
    """Index of the first row ``e`` of ``e1`` with wt(s2 - bmat @ e) == target.

    The weight is accumulated entry by entry and the candidate dropped as soon
    as it exceeds ``target``. Returns -1 if no candidate qualifies.
    """
    cnt, k = e1.shape
    rows = bmat.shape[0]
    supp = np.empty(k, dtype=np.int64)
    for p in range(cnt):
        ns = 0
        for j in range(k):
            if e1[p, j] != 0:
                supp[ns] = j
                ns += 1
        w = 0
        ok = True
        for r in range(rows):
            acc = s2[r]
            for q in range(ns):
                j = supp[q]
                acc -= bmat[r, j] * e1[p, j]
            acc %= m
            w += min(acc, m - acc)
            if w > target:
                ok = False
                break
        if ok and w == target:
            return p
    return -1


def first_extension_numpy(bmat, s2, e1, target, m, chunk=4096):
    for start in range(0, e1.shape[0], chunk):
        block = e1[start:start + chunk]
        e2 = (s2[None, :] - block @ bmat.T) % m
        w = np.minimum(e2, m - e2).sum(axis=1)
        hit = np.flatnonzero(w == target)
        if hit.size:
            return start + int(hit[0])
    return -1


# --------------------------------------------------------------------------
# row weights


@njit
def weights_loops(rows, m):
    cnt, n = rows.shape
    out = np.zeros(cnt, dtype=np.int64)
    for i in range(cnt):
        s = 0
        for j in range(n):
            x = rows[i, j]
            s += min(x, m - x)
        out[i] = s
    return out


def weights_numpy(rows, m):
    return np.minimum(rows, m - rows).sum(axis=1)


if USE_NUMBA:
    matmul_mod = matmul_mod_loops
    gauss_jordan = gauss_jordan_loops
    intermediate_sums = intermediate_sums_loops
    first_extension = first_extension_loops
    weights = weights_loops
else:
    matmul_mod = matmul_mod_numpy
    gauss_jordan = gauss_jordan_numpy
    intermediate_sums = intermediate_sums_numpy
    first_extension = first_extension_numpy
    weights = weights_numpy
